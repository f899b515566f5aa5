#include "seqdisc/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seqdisc/error.hpp"
#include "seqdisc/line_search.hpp"

namespace seqdisc {

namespace {

constexpr double kSlack = 1e-12;

double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

// A conclusive channel whose outcomes split into weights a (state 1) and
// b (state 2): P = a + b, I = P H(a/P) = -a log2(a/P) - b log2(b/P).
struct ConclusiveSplit {
  double a;
  double b;

  double total() const { return a + b; }
  double confidence1() const { return total() > 0.0 ? a / total() : 0.0; }
  double information() const {
    const double p = total();
    if (!(p > 0.0)) return 0.0;
    return std::max(0.0, xlog2x(p) - xlog2x(a) - xlog2x(b));
  }
  // dI = -da log2(a/P) - db log2(b/P)
  double information_derivative(double da, double db) const {
    const double p = total();
    double d = 0.0;
    if (da != 0.0) d -= da * std::log2(a / p);
    if (db != 0.0) d -= db * std::log2(b / p);
    return d;
  }
};

ChannelReport report(const ConclusiveSplit& split, double arg) {
  return {split.total(), split.confidence1(), split.information(), arg};
}

void check_failure_pair(const DiscriminationProblem& p, double q1, double q2) {
  const double s2 = p.s() * p.s();
  if (!(q1 >= 0.0 && q1 <= 1.0 && q2 >= 0.0 && q2 <= 1.0) || q1 * q2 < s2 - kSlack) {
    throw Error(ErrorCode::ConstraintViolation,
                "failure pair must lie in [0,1]^2 with q1 q2 >= s^2");
  }
}

ConclusiveSplit usd_ab_split(const DiscriminationProblem& p, double q1) {
  const double s2 = p.s() * p.s();
  if (!(q1 >= s2 - kSlack && q1 <= 1.0 + kSlack) || (q1 <= 0.0 && s2 > 0.0)) {
    throw Error(ErrorCode::ConstraintViolation, "q1 must lie in [s^2, 1]");
  }
  q1 = std::clamp(q1, s2, 1.0);
  const double q2 = q1 > 0.0 ? std::min(1.0, s2 / q1) : 0.0;
  return {p.eta1() * (1.0 - q1), p.eta2() * (1.0 - q2)};
}

ConclusiveSplit usd_bc_symmetric_split(const DiscriminationProblem& p, double q1b) {
  const double s = p.s();
  if (!(q1b >= s - kSlack && q1b <= 1.0 + kSlack) || q1b <= 0.0) {
    throw Error(ErrorCode::ConstraintViolation, "q1b must lie in [s, 1] and be positive");
  }
  q1b = std::clamp(q1b, s, 1.0);
  const double a = 1.0 - q1b;
  const double b = 1.0 - s / q1b;
  return {p.eta1() * a * a, p.eta2() * b * b};
}

ConclusiveSplit ff_ab_split(const DiscriminationProblem& p, double c) {
  const double w = 1.0 - p.s() * p.s();
  return {p.eta1() * (1.0 - c) * w, p.eta2() * c * w};
}

}  // namespace

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::OutOfRange, "entropy argument outside [0, 1]");
  return -xlog2x(p) - xlog2x(1.0 - p);
}

double mi_guessing(const DiscriminationProblem& problem, double q1, double q2) {
  check_failure_pair(problem, q1, q2);
  const double h = binary_entropy(problem.eta1());
  const double q = problem.eta1() * q1 + problem.eta2() * q2;
  if (!(q > 0.0)) return h;
  return h - q * binary_entropy(std::clamp(problem.eta1() * q1 / q, 0.0, 1.0));
}

ChannelReport mi_usd_ab(const DiscriminationProblem& problem, double q1) {
  return report(usd_ab_split(problem, q1), q1);
}

double mi_usd_ab_derivative(const DiscriminationProblem& problem, double q1) {
  const auto split = usd_ab_split(problem, q1);
  const double s2 = problem.s() * problem.s();
  return split.information_derivative(-problem.eta1(), problem.eta2() * s2 / (q1 * q1));
}

ChannelReport optimize_mi_usd_ab(const DiscriminationProblem& problem) {
  const double s = problem.s();
  if (!(s > 0.0)) throw Error(ErrorCode::OutOfRange, "optimize_mi_usd_ab requires s > 0");
  if (problem.eta1() == 0.5) return mi_usd_ab(problem, s);
  const auto best = maximize_unimodal([&](double q) { return mi_usd_ab(problem, q).mi; }, s * s, 1.0,
                                      [&](double q) { return mi_usd_ab_derivative(problem, q); });
  return mi_usd_ab(problem, best.x);
}

double mi_usd_observer(const DiscriminationProblem& problem, double q1_obs, double q2_obs) {
  check_failure_pair(problem, q1_obs, q2_obs);
  return ConclusiveSplit{problem.eta1() * (1.0 - q1_obs), problem.eta2() * (1.0 - q2_obs)}
      .information();
}

ChannelReport mi_usd_bc(const DiscriminationProblem& problem, const SequentialStrategy& st) {
  const ConclusiveSplit split{problem.eta1() * st.p1b() * st.p1c(),
                              problem.eta2() * st.p2b() * st.p2c()};
  return report(split, st.q1b());
}

ChannelReport mi_usd_bc_symmetric(const DiscriminationProblem& problem, double q1b) {
  return report(usd_bc_symmetric_split(problem, q1b), q1b);
}

double mi_usd_bc_symmetric_derivative(const DiscriminationProblem& problem, double q1b) {
  const auto split = usd_bc_symmetric_split(problem, q1b);
  const double s = problem.s();
  const double da = -2.0 * problem.eta1() * (1.0 - q1b);
  const double db = 2.0 * problem.eta2() * (1.0 - s / q1b) * s / (q1b * q1b);
  return split.information_derivative(da, db);
}

ChannelReport optimize_mi_usd_bc(const DiscriminationProblem& problem) {
  const double s = problem.s();
  if (!(s > 0.0)) throw Error(ErrorCode::OutOfRange, "optimize_mi_usd_bc requires s > 0");
  const auto best = maximize_unimodal(
      [&](double q) { return mi_usd_bc_symmetric(problem, q).mi; }, s, 1.0,
      [&](double q) { return mi_usd_bc_symmetric_derivative(problem, q); });
  return mi_usd_bc_symmetric(problem, best.x);
}

ChannelReport mi_ff_ab(const DiscriminationProblem& problem, FlipFlopStrategy ff) {
  return report(ff_ab_split(problem, ff.c()), ff.c());
}

double mi_ff_ab_derivative(const DiscriminationProblem& problem, double c) {
  const double w = 1.0 - problem.s() * problem.s();
  return ff_ab_split(problem, c).information_derivative(-problem.eta1() * w, problem.eta2() * w);
}

ChannelReport optimize_mi_ff_ab(const DiscriminationProblem& problem) {
  const auto best = maximize_unimodal(
      [&](double c) { return mi_ff_ab(problem, FlipFlopStrategy(c)).mi; }, 0.0, 1.0,
      [&](double c) { return mi_ff_ab_derivative(problem, c); });
  return mi_ff_ab(problem, FlipFlopStrategy(best.x));
}

double mi_ff_bc(const DiscriminationProblem& problem, FlipFlopStrategy ff, double t) {
  const double s = problem.s();
  const double t2 = t * t;
  if (!(t > 0.0) || t2 < s - kSlack || t2 > 1.0 + kSlack) {
    throw Error(ErrorCode::ConstraintViolation, "flip-flop B:C channel requires s <= t^2 <= 1");
  }
  const double c = ff.c();
  const double stage = std::max(0.0, 1.0 - s * s / t2) * std::max(0.0, 1.0 - t2);
  return ConclusiveSplit{stage * problem.eta1() * (1.0 - c) * (1.0 - c),
                         stage * problem.eta2() * c * c}
      .information();
}

double helstrom_mi(const DiscriminationProblem& problem) {
  if (std::abs(problem.eta1() - 0.5) > 1e-12) {
    throw Error(ErrorCode::UnsupportedPriors, "Helstrom information is implemented for equal priors only");
  }
  return helstrom_mi(problem.s());
}

double helstrom_mi(double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::OutOfRange, "overlap outside [0, 1]");
  const double p_error = 0.5 * (1.0 - std::sqrt(1.0 - s * s));
  return 1.0 - binary_entropy(p_error);
}

}  // namespace seqdisc
