#include "phasebell/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <utility>

namespace phasebell::grid {

namespace {

constexpr char kMagic[8] = {'P', 'B', 'F', 'I', 'E', 'L', 'D', '1'};

template <class T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw Error("truncated field file");
  return v;
}

Axis rebuild_axis(std::uint32_t kind, std::uint64_t n, double lower, double upper) {
  return Axis::restore(kind == 0 ? Representation::position : Representation::momentum, n, lower,
                       upper);
}

template <class T, std::size_t Rank>
void write_impl(const std::filesystem::path& path, const Field<T, Rank>& f) {
  constexpr bool is_complex = std::is_same_v<T, cplx>;
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, Rank);
  put<std::uint32_t>(os, is_complex ? 1u : 0u);
  nlohmann::json meta;
  meta["format"] = "PBFIELD1";
  meta["rank"] = Rank;
  meta["complex"] = is_complex;
  for (std::size_t d = 0; d < Rank; ++d) {
    const Axis& a = f.axis(d);
    const std::uint32_t kind = a.kind() == Representation::position ? 0u : 1u;
    put<std::uint32_t>(os, kind);
    put<std::uint64_t>(os, a.size());
    put<double>(os, a.lower());
    put<double>(os, a.upper());
    meta["axes"].push_back({{"kind", kind == 0 ? "position" : "momentum"},
                            {"n", a.size()},
                            {"lower", a.lower()},
                            {"upper", a.upper()}});
  }
  const auto v = f.values();
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(v.size() * sizeof(T)));
  if (!os) throw Error("failed writing " + path.string());
  std::ofstream side(path.string() + ".json");
  side << meta.dump(2) << "\n";
}

template <class T, std::size_t Rank>
Field<T, Rank> read_impl(const std::filesystem::path& path) {
  constexpr bool is_complex = std::is_same_v<T, cplx>;
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) throw Error("not a PBFIELD1 file");
  if (get<std::uint32_t>(is) != Rank) throw Error("field rank mismatch in " + path.string());
  if ((get<std::uint32_t>(is) != 0) != is_complex) throw Error("field value type mismatch");
  std::vector<Axis> read_axes;
  for (std::size_t d = 0; d < Rank; ++d) {
    const auto kind = get<std::uint32_t>(is);
    const auto n = get<std::uint64_t>(is);
    const auto lo = get<double>(is);
    const auto hi = get<double>(is);
    read_axes.push_back(rebuild_axis(kind, n, lo, hi));
  }
  const auto axes = [&]<std::size_t... I>(std::index_sequence<I...>) {
    return std::array<Axis, Rank>{read_axes[I]...};
  }(std::make_index_sequence<Rank>{});
  Field<T, Rank> f(axes);
  auto v = f.values();
  is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
  if (!is) throw Error("truncated field data in " + path.string());
  return f;
}

}  // namespace

void write_field(const std::filesystem::path& path, const RealField2D& f) { write_impl(path, f); }
void write_field(const std::filesystem::path& path, const ComplexField2D& f) { write_impl(path, f); }
void write_field(const std::filesystem::path& path, const RealField4D& f) { write_impl(path, f); }

RealField2D read_real_field_2d(const std::filesystem::path& path) { return read_impl<double, 2>(path); }
ComplexField2D read_complex_field_2d(const std::filesystem::path& path) {
  return read_impl<cplx, 2>(path);
}
RealField4D read_real_field_4d(const std::filesystem::path& path) { return read_impl<double, 4>(path); }

}  // namespace phasebell::grid
