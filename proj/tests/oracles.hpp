#pragma once

// Reference implementations written independently of the library, used only
// as test oracles.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// Frozen high-precision values (50-digit evaluation, rounded to double).
inline constexpr double kEntropyAt011 = 0.49991595816452799564;
inline constexpr double kGuessingBoundary04 = 0.6642991177133705;
inline constexpr double kHelstrom04 = 0.7497750883889295;
inline constexpr double kMinfailSuccess02_025 = 0.3692087116644798;
inline constexpr double kUsdAbThird = 0.6887218755408671;
inline constexpr double kUsdAbArgmaxThird05 = 0.46980056103272033;
// Largest optimum-minus-approximation gaps on the 401-point grid s in [0.001, 0.999].
inline constexpr double kUsdAbGapThird = 0.0021798146593767775;
inline constexpr double kUsdBcGapThird = 0.0024613828303742813;
inline constexpr double kUsdAbGapQuarter = 0.004678091448010735;
inline constexpr double kUsdBcGapQuarter = 0.0052950602697313665;
inline constexpr double kQuarticRoots005_06[4] = {-0.18839627386104396, 0.0546219943158642,
                                                  0.16763707824902763, 0.9661372012961521};

inline double h2(double p) {
  auto term = [](double x) { return x > 0 ? -x * std::log2(x) : 0.0; };
  return term(p) + term(1 - p);
}

// Single-stage optimal unambiguous discrimination failure: minimize
// eta1 q + eta2 s^2 / q over q in [s^2, 1].
inline double single_stage_failure(double s, double eta1) {
  const double eta2 = 1 - eta1;
  if (s == 0) return 0.0;
  const double q = std::clamp(s * std::sqrt(eta2 / eta1), s * s, 1.0);
  return eta1 * q + eta2 * s * s / q;
}

// Textbook three-branch form of the same bound.
inline double three_branch_failure(double s, double eta1) {
  const double eta2 = 1 - eta1;
  if (eta1 <= s * s / (1 + s * s)) return eta1 + eta2 * s * s;
  if (eta1 >= 1 / (1 + s * s)) return eta2 + eta1 * s * s;
  return 2 * std::sqrt(eta1 * eta2) * s;
}

// Scan f on a uniform grid, then refine the best cell by ternary search.
inline std::pair<double, double> scan_max(const std::function<double(double)>& f, double lo,
                                          double hi, int n = 20000) {
  int best = 0;
  double best_v = -1e300;
  for (int i = 0; i <= n; ++i) {
    const double v = f(lo + (hi - lo) * i / n);
    if (v > best_v) best_v = v, best = i;
  }
  double a = lo + (hi - lo) * std::max(0, best - 1) / n;
  double b = lo + (hi - lo) * std::min(n, best + 1) / n;
  for (int it = 0; it < 200; ++it) {
    const double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
    if (f(m1) < f(m2)) a = m1; else b = m2;
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

// Real roots of r q^4 - r q^3 + s q - s^2 in [lo, hi] from sign changes on a
// dense grid, each refined by bisection.
inline std::vector<double> quartic_sign_change_roots(double s, double eta1, double lo, double hi,
                                                     int n = 100000) {
  const double r = eta1 / (1 - eta1);
  auto P = [&](double q) { return r * q * q * q * q - r * q * q * q + s * q - s * s; };
  std::vector<double> roots;
  double prev_x = lo, prev = P(lo);
  for (int i = 1; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n;
    const double v = P(x);
    if (prev == 0) roots.push_back(prev_x);
    else if (prev * v < 0) {
      double a = prev_x, b = x;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        if ((P(a) < 0) == (P(m) < 0)) a = m; else b = m;
      }
      roots.push_back(0.5 * (a + b));
    }
    prev_x = x, prev = v;
  }
  return roots;
}

// P_ss = eta1 (1 - q1b)(1 - q1c) + eta2 (1 - s^2/(t^2 q1b))(1 - t^2/q1c).
inline double joint_success(double s, double eta1, double t, double q1b, double q1c) {
  const double q2b = s * s / (t * t * q1b);
  const double q2c = t * t / q1c;
  return eta1 * (1 - q1b) * (1 - q1c) + (1 - eta1) * (1 - q2b) * (1 - q2c);
}

// Random admissible (t, q1b, q1c) for overlap s.
struct FreeStrategy {
  double t, q1b, q1c;
};

inline FreeStrategy random_strategy(double s, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double t = s + (1 - s) * u(gen);
  const double lo_b = s * s / (t * t);
  const double q1b = lo_b + (1 - lo_b) * u(gen);
  const double q1c = t * t + (1 - t * t) * u(gen);
  return {std::max(t, 1e-3), q1b, q1c};
}

}  // namespace oracle
