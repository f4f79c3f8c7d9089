#pragma once

// Gauss-Legendre quadrature on [0, 1] and on the simplex 0 <= s2 <= s1 <= 1,
// refined by doubling the order until successive results agree.

#include <Eigen/Core>

#include <cmath>
#include <string>
#include <type_traits>
#include <vector>

#include "spinpulse/error.hpp"

namespace spinpulse {

struct QuadratureSpec {
  int base_order = 64;
  /// Relative change between successive orders that counts as converged.
  double rtol = 1e-10;
  /// Absolute change that counts as converged (quantities that vanish).
  double abs_floor = 1e-14;
  int max_order = 4096;
};

struct QuadratureInfo {
  int order = 0;
  double change = 0.0;
};

template <class T>
struct Quadrature {
  T value;
  QuadratureInfo info;
};

/// Nodes and weights mapped to [0, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached per order; safe to call concurrently.
const GaussLegendreRule& gauss_legendre(int order);

namespace detail {

inline double magnitude(double v) { return std::abs(v); }

template <class Derived>
double magnitude(const Eigen::MatrixBase<Derived>& m) {
  return m.norm();
}

template <class T>
T zero_like() {
  if constexpr (std::is_arithmetic_v<T>) {
    return T{0};
  } else {
    return T::Zero();
  }
}

template <class T, class Eval>
Quadrature<T> refine(Eval&& eval, const QuadratureSpec& spec, const char* what) {
  if (spec.base_order < 2 || spec.max_order < spec.base_order || !(spec.rtol > 0.0) ||
      !(spec.abs_floor >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + ": invalid quadrature spec");
  }
  int order = spec.base_order;
  T coarse = eval(order);
  while (true) {
    const int finer_order = 2 * order;
    if (finer_order > spec.max_order) {
      throw Error(ErrorCode::QuadratureNoConvergence,
                  std::string(what) + ": no convergence up to order " + std::to_string(order));
    }
    T fine = eval(finer_order);
    const double change = magnitude(T(fine - coarse));
    if (change <= spec.rtol * magnitude(fine) || change <= spec.abs_floor) {
      return {std::move(fine), {finer_order, change}};
    }
    coarse = std::move(fine);
    order = finer_order;
  }
}

}  // namespace detail

/// integral_0^1 f(s) ds
template <class F>
auto integrate_unit_interval(F&& f, const QuadratureSpec& spec, const char* what = "quadrature") {
  using T = std::decay_t<decltype(f(0.5))>;
  auto eval = [&](int n) {
    const GaussLegendreRule& rule = gauss_legendre(n);
    T sum = detail::zero_like<T>();
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(rule.nodes[i]);
    return sum;
  };
  return detail::refine<T>(eval, spec, what);
}

/// integral_0^1 ds1 integral_0^{s1} ds2 f(s1, s2), iterated Gauss-Legendre with
/// the same order on both axes.
template <class F>
auto integrate_simplex(F&& f, const QuadratureSpec& spec, const char* what = "quadrature") {
  using T = std::decay_t<decltype(f(0.5, 0.25))>;
  auto eval = [&](int n) {
    const GaussLegendreRule& rule = gauss_legendre(n);
    T outer = detail::zero_like<T>();
    for (int i = 0; i < n; ++i) {
      const double s1 = rule.nodes[i];
      T inner = detail::zero_like<T>();
      for (int k = 0; k < n; ++k) inner += rule.weights[k] * f(s1, s1 * rule.nodes[k]);
      outer += (rule.weights[i] * s1) * inner;
    }
    return outer;
  };
  return detail::refine<T>(eval, spec, what);
}

}  // namespace spinpulse
