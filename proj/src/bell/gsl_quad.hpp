#pragma once

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cstddef>
#include <vector>

#include "phasebell/grid.hpp"

namespace phasebell::bell::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  int status = 0;

  Result& operator+=(const Result& o) {
    value += o.value;
    error += o.error;
    if (o.status != 0) status = o.status;
    return *this;
  }
};

template <class F>
double trampoline(double x, void* params) {
  return (*static_cast<F*>(params))(x);
}

template <class F>
gsl_function as_gsl(F& f) {
  return gsl_function{&trampoline<F>, &f};
}

class Workspace {
 public:
  explicit Workspace(std::size_t limit) : limit_(limit), w_(gsl_integration_workspace_alloc(limit)) {
    if (!w_) throw Error("GSL workspace allocation failed");
  }
  ~Workspace() { gsl_integration_workspace_free(w_); }
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
  gsl_integration_workspace* get() { return w_; }
  std::size_t limit() const { return limit_; }

 private:
  std::size_t limit_;
  gsl_integration_workspace* w_;
};

class OscTable {
 public:
  OscTable(double omega, double length, bool sine)
      : t_(gsl_integration_qawo_table_alloc(omega, length, sine ? GSL_INTEG_SINE : GSL_INTEG_COSINE, 25)) {
    if (!t_) throw Error("GSL oscillatory table allocation failed");
  }
  ~OscTable() { gsl_integration_qawo_table_free(t_); }
  OscTable(const OscTable&) = delete;
  OscTable& operator=(const OscTable&) = delete;
  gsl_integration_qawo_table* get() { return t_; }

 private:
  gsl_integration_qawo_table* t_;
};

template <class F>
Result qag(F f, double a, double b, double epsabs, double epsrel, std::size_t limit = 500,
           int key = GSL_INTEG_GAUSS41) {
  Workspace w(limit);
  gsl_function g = as_gsl(f);
  Result r;
  r.status = gsl_integration_qag(&g, a, b, epsabs, epsrel, limit, key, w.get(), &r.value, &r.error);
  return r;
}

template <class F>
Result qagp(F f, std::vector<double> points, double epsabs, double epsrel, std::size_t limit = 500) {
  Workspace w(limit);
  gsl_function g = as_gsl(f);
  Result r;
  r.status = gsl_integration_qagp(&g, points.data(), points.size(), epsabs, epsrel, limit, w.get(), &r.value,
                                  &r.error);
  return r;
}

template <class F>
Result qagiu(F f, double a, double epsabs, double epsrel, std::size_t limit = 500) {
  Workspace w(limit);
  gsl_function g = as_gsl(f);
  Result r;
  r.status = gsl_integration_qagiu(&g, a, epsabs, epsrel, limit, w.get(), &r.value, &r.error);
  return r;
}

/// int_a^b f(x) cos(omega x) (or sin) dx.
template <class F>
Result qawo(F f, double a, double b, double omega, bool sine, double epsabs, double epsrel,
            std::size_t limit = 2000) {
  Workspace w(limit);
  OscTable table(omega, b - a, sine);
  gsl_function g = as_gsl(f);
  Result r;
  r.status = gsl_integration_qawo(&g, a, epsabs, epsrel, limit, w.get(), table.get(), &r.value, &r.error);
  return r;
}

/// int_a^inf f(x) cos(omega x) (or sin) dx.
template <class F>
Result qawf(F f, double a, double omega, bool sine, double epsabs, std::size_t limit = 1000) {
  Workspace w(limit), cycles(limit);
  OscTable table(omega, 1.0, sine);
  gsl_function g = as_gsl(f);
  Result r;
  r.status = gsl_integration_qawf(&g, a, epsabs, limit, w.get(), cycles.get(), table.get(), &r.value, &r.error);
  return r;
}

/// Disables the aborting GSL error handler for the lifetime of the guard.
class ErrorHandlerGuard {
 public:
  ErrorHandlerGuard() : previous_(gsl_set_error_handler_off()) {}
  ~ErrorHandlerGuard() { gsl_set_error_handler(previous_); }
  ErrorHandlerGuard(const ErrorHandlerGuard&) = delete;
  ErrorHandlerGuard& operator=(const ErrorHandlerGuard&) = delete;

 private:
  gsl_error_handler_t* previous_;
};

}  // namespace phasebell::bell::quad
