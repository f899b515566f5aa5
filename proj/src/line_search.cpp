#include "seqdisc/line_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace seqdisc {

namespace {

constexpr double kGoldenStep = 0.3819660112501051;  // (3 - sqrt 5) / 2

// Shrinks [lo, hi] around a sign change of g, starting near x, and bisects.
double polish_stationary(const std::function<double(double)>& df, double x, double lo, double hi,
                         double x_tol) {
  double width = std::max(1e-7, 16 * x_tol);
  for (int expand = 0; expand < 30; ++expand, width *= 4) {
    const double a = std::max(lo, x - width);
    const double b = std::min(hi, x + width);
    const double ga = df(a);
    const double gb = df(b);
    if (ga == 0.0) return a;
    if (gb == 0.0) return b;
    if (ga > 0.0 && gb < 0.0) return bisect_root(df, a, b, x_tol);
    if (a == lo && b == hi) break;
  }
  return x;
}

}  // namespace

double bisect_root(const std::function<double(double)>& g, double lo, double hi, double x_tol,
                   int max_iterations) {
  double g_lo = g(lo);
  for (int i = 0; i < max_iterations && hi - lo > x_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = g(mid);
    if (g_mid == 0.0) return mid;
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ScalarMaximum maximize_unimodal(const std::function<double(double)>& f, double lo, double hi,
                                const std::function<double(double)>& derivative,
                                LineSearchOptions options) {
  // Brent's localmin on -f.
  const auto cost = [&](double x) { return -f(x); };
  constexpr double kRel = 4 * std::numeric_limits<double>::epsilon();
  double a = lo;
  double b = hi;
  double x = a + kGoldenStep * (b - a);
  double w = x;
  double v = x;
  double fx = cost(x);
  double fw = fx;
  double fv = fx;
  double d = 0.0;
  double e = 0.0;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    const double mid = 0.5 * (a + b);
    const double tol1 = kRel * std::abs(x) + options.x_tol / 3;
    const double tol2 = 2 * tol1;
    if (std::abs(x - mid) <= tol2 - 0.5 * (b - a)) break;
    bool golden = true;
    if (std::abs(e) > tol1) {
      double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2 * (q - r);
      if (q > 0) p = -p;
      q = std::abs(q);
      const double e_prev = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_prev) && p > q * (a - x) && p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = mid >= x ? tol1 : -tol1;
        golden = false;
      }
    }
    if (golden) {
      e = (x >= mid ? a : b) - x;
      d = kGoldenStep * e;
    }
    const double u = std::abs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = cost(u);
    if (fu <= fx) {
      (u >= x ? a : b) = x;
      v = w; fv = fw;
      w = x; fw = fx;
      x = u; fx = fu;
    } else {
      (u < x ? a : b) = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw;
        w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  // The interior search never evaluates the endpoints themselves.
  for (double end : {lo, hi}) {
    const double fe = cost(end);
    if (fe < fx) {
      x = end;
      fx = fe;
    }
  }
  if (derivative && x > lo && x < hi) {
    const double polished = polish_stationary(derivative, x, lo, hi, options.x_tol);
    const double fp = cost(polished);
    if (fp <= fx + 1e-15 * std::max(1.0, std::abs(fx))) {
      x = polished;
      fx = fp;
    }
  }
  return {x, -fx, iter};
}

}  // namespace seqdisc
