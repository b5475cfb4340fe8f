#pragma once

#include <filesystem>

#include "phasebell/grid.hpp"

namespace phasebell::grid {

// Binary layout (little-endian):
//   "PBFIELD1" | u32 rank | u32 complex flag | rank x (u32 kind, u64 n, f64 lower, f64 upper)
//   | row-major values (f64, or interleaved re/im pairs)
// A JSON sidecar "<path>.json" repeats the header in readable form.

void write_field(const std::filesystem::path& path, const RealField2D& f);
void write_field(const std::filesystem::path& path, const ComplexField2D& f);
void write_field(const std::filesystem::path& path, const RealField4D& f);

RealField2D read_real_field_2d(const std::filesystem::path& path);
ComplexField2D read_complex_field_2d(const std::filesystem::path& path);
RealField4D read_real_field_4d(const std::filesystem::path& path);

}  // namespace phasebell::grid
