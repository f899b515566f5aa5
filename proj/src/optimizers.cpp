#include "seqdisc/optimizers.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>

#include "seqdisc/error.hpp"
#include "seqdisc/line_search.hpp"
#include "seqdisc/parallel.hpp"

namespace seqdisc {

namespace {

void require_positive_overlap(const DiscriminationProblem& problem, const char* where) {
  if (!(problem.s() > 0.0)) {
    throw Error(ErrorCode::OutOfRange, std::string(where) + " requires s > 0");
  }
}

// Companion-matrix eigenvalues of r q^4 - r q^3 + s q - s^2 can sit a few
// 1e-6 apart when roots coincide (triple root at s = 1/4, equal priors).
// Those clusters are replaced by their centroid, which is well conditioned.
constexpr double kClusterRadius = 1e-5;
constexpr double kImagTol = 1e-9;
constexpr double kEndpointTol = 1e-9;

std::complex<double> newton_polish(const DiscriminationProblem& p, std::complex<double> q) {
  const double r = p.eta1() / p.eta2();
  const double s = p.s();
  for (int i = 0; i < 4; ++i) {
    const auto f = quartic_residual(p, q);
    const auto df = 4.0 * r * q * q * q - 3.0 * r * q * q + s;
    if (std::abs(df) < 1e-12) break;
    const auto next = q - f / df;
    if (std::abs(quartic_residual(p, next)) >= std::abs(f)) break;
    q = next;
  }
  return q;
}

void merge_clusters(std::vector<std::complex<double>>& roots) {
  const std::size_t n = roots.size();
  std::vector<int> group(n);
  for (std::size_t i = 0; i < n; ++i) group[i] = static_cast<int>(i);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(roots[i] - roots[j]) < kClusterRadius) {
        const int from = group[j];
        const int to = group[i];
        for (auto& g : group) {
          if (g == from) g = to;
        }
      }
    }
  }
  std::vector<std::complex<double>> merged = roots;
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> sum = 0.0;
    int count = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (group[j] == group[i]) {
        sum += roots[j];
        ++count;
      }
    }
    if (count > 1) merged[i] = sum / static_cast<double>(count);
  }
  roots = std::move(merged);
}

double symmetric_success_derivative(const DiscriminationProblem& p, double q) {
  const double s = p.s();
  return -2.0 * p.eta1() * (1.0 - q) + 2.0 * p.eta2() * (1.0 - s / q) * s / (q * q);
}

RootClass classify(const DiscriminationProblem& p, double q) {
  const double curvature = symmetric_success_second_derivative(p, q);
  if (curvature < -1e-8) return RootClass::LocalMax;
  if (curvature > 1e-8) return RootClass::LocalMin;
  // Flat stationary point (merged roots): first-derivative test.
  const double h = 1e-4;
  const double left = symmetric_success_derivative(p, std::max(p.s(), q - h));
  const double right = symmetric_success_derivative(p, std::min(1.0, q + h));
  return (left > 0.0 && right < 0.0) ? RootClass::LocalMax : RootClass::LocalMin;
}

SequentialStrategy symmetric_strategy(const DiscriminationProblem& p, double q) {
  return make_strategy(p, std::sqrt(p.s()), q, q);
}

}  // namespace

double joint_success(const DiscriminationProblem& problem, const SequentialStrategy& st) {
  return problem.eta1() * st.p1b() * st.p1c() + problem.eta2() * st.p2b() * st.p2c();
}

double joint_success_free(const DiscriminationProblem& problem, double t, double q1b, double q1c) {
  const double s2 = problem.s() * problem.s();
  const double t2 = t * t;
  return problem.eta1() * (1.0 - q1b) * (1.0 - q1c) +
         problem.eta2() * (1.0 - s2 / (t2 * q1b) - t2 / q1c + s2 / (q1b * q1c));
}

double joint_failure(const DiscriminationProblem& problem, const SequentialStrategy& st) {
  return problem.eta1() * st.q1b() * st.q1c() + problem.eta2() * st.q2b() * st.q2c();
}

MinJointFailure min_joint_failure(const DiscriminationProblem& problem) {
  const double s = problem.s();
  const double e1 = problem.eta1();
  const double e2 = problem.eta2();
  const double s2 = s * s;
  if (e1 < s2 / (1.0 + s2)) return {1.0, e1 + e2 * s2, Regime::LowPrior};
  if (e1 > 1.0 / (1.0 + s2)) return {s2, e2 + e1 * s2, Regime::HighPrior};
  return {std::sqrt(e2 / e1) * s, 2.0 * std::sqrt(e1 * e2) * s, Regime::Middle};
}

double minfail_success_closed_form(const DiscriminationProblem& problem) {
  const double s = problem.s();
  const double e1 = problem.eta1();
  const double e2 = problem.eta2();
  switch (min_joint_failure(problem).regime) {
    case Regime::LowPrior: return e2 * (1.0 - s) * (1.0 - s);
    case Regime::HighPrior: return e1 * (1.0 - s) * (1.0 - s);
    default: break;
  }
  const double k = std::pow(e1 * e2, 0.25) * std::sqrt(s);
  const double a = std::sqrt(e1) - k;
  const double b = std::sqrt(e2) - k;
  return a * a + b * b;
}

OptimizationResult optimize_minfail_success(const DiscriminationProblem& problem) {
  require_positive_overlap(problem, "optimize_minfail_success");
  const double s = problem.s();
  const MinJointFailure mf = min_joint_failure(problem);
  double q1b = 0.0;
  switch (mf.regime) {
    case Regime::LowPrior: q1b = 1.0; break;
    case Regime::HighPrior: q1b = s; break;
    default: q1b = std::pow(problem.eta2() / problem.eta1(), 0.25) * std::sqrt(s); break;
  }
  const double q1c = mf.q1b_q1c_product / q1b;
  const SequentialStrategy st = make_strategy(problem, std::sqrt(s), q1b, q1c);
  return {st, joint_success(problem, st), joint_failure(problem, st), mf.regime,
          Method::ClosedForm};
}

double symmetric_success(const DiscriminationProblem& problem, double q) {
  const double a = 1.0 - q;
  const double b = 1.0 - problem.s() / q;
  return problem.eta1() * a * a + problem.eta2() * b * b;
}

double symmetric_success_second_derivative(const DiscriminationProblem& problem, double q) {
  const double s = problem.s();
  const double q3 = q * q * q;
  return 2.0 * problem.eta1() + 2.0 * problem.eta2() * (3.0 * s * s / (q3 * q) - 2.0 * s / q3);
}

double quartic_residual(const DiscriminationProblem& problem, std::complex<double> q) {
  const double r = problem.eta1() / problem.eta2();
  const double s = problem.s();
  return std::abs(((r * q - r) * q * q + s) * q - s * s);
}

QuarticRootReport quartic_physical_roots(const DiscriminationProblem& problem) {
  require_positive_overlap(problem, "quartic_physical_roots");
  const double r = problem.eta1() / problem.eta2();
  const double s = problem.s();
  // Monic form q^4 - q^3 + (s/r) q - s^2/r.
  const std::array<double, 4> coeff{-s * s / r, s / r, 0.0, -1.0};
  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  for (int i = 1; i < 4; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < 4; ++i) companion(i, 3) = -coeff[i];
  Eigen::EigenSolver<Eigen::Matrix4d> solver(companion, false);

  QuarticRootReport report;
  for (int i = 0; i < 4; ++i) report.all_roots.push_back(newton_polish(problem, solver.eigenvalues()(i)));
  merge_clusters(report.all_roots);
  std::sort(report.all_roots.begin(), report.all_roots.end(),
            [](auto a, auto b) { return std::pair(a.real(), a.imag()) < std::pair(b.real(), b.imag()); });

  for (auto& root : report.all_roots) {
    if (std::abs(root.imag()) >= kImagTol) {
      report.classification.push_back(RootClass::NonPhysical);
      continue;
    }
    double q = root.real();
    if (q > s - kEndpointTol && q < s) q = s;
    if (q > 1.0 && q < 1.0 + kEndpointTol) q = 1.0;
    if (q < s || q > 1.0) {
      report.classification.push_back(RootClass::NonPhysical);
      continue;
    }
    root = q;
    report.physical_roots.push_back(q);
    report.classification.push_back(classify(problem, q));
  }
  return report;
}

std::optional<double> best_interior_success(const DiscriminationProblem& problem) {
  const QuarticRootReport report = quartic_physical_roots(problem);
  std::optional<double> best;
  for (std::size_t i = 0; i < report.all_roots.size(); ++i) {
    if (report.classification[i] != RootClass::LocalMax) continue;
    const double q = report.all_roots[i].real();
    if (q <= problem.s() || q >= 1.0) continue;
    if (!best || symmetric_success(problem, q) > symmetric_success(problem, *best)) best = q;
  }
  return best;
}

double boundary_success(const DiscriminationProblem& problem) {
  const double eta_max = std::max(problem.eta1(), problem.eta2());
  return eta_max * (1.0 - problem.s()) * (1.0 - problem.s());
}

OptimizationResult optimize_success_only(const DiscriminationProblem& problem) {
  require_positive_overlap(problem, "optimize_success_only");
  const double boundary = boundary_success(problem);
  if (const auto q = best_interior_success(problem)) {
    const double interior = symmetric_success(problem, *q);
    // Ties go to the interior solution.
    if (interior >= boundary - 4 * std::numeric_limits<double>::epsilon()) {
      const SequentialStrategy st = symmetric_strategy(problem, *q);
      return {st, joint_success(problem, st), joint_failure(problem, st), Regime::Interior,
              Method::RootSolve};
    }
  }
  const bool state1 = problem.eta1() > problem.eta2();
  const SequentialStrategy st = symmetric_strategy(problem, state1 ? problem.s() : 1.0);
  return {st, joint_success(problem, st), joint_failure(problem, st),
          state1 ? Regime::BoundaryState1 : Regime::BoundaryState2, Method::ClosedForm};
}

std::optional<double> critical_overlap(double eta1) {
  if (!(eta1 > 0.0 && eta1 < 1.0)) {
    throw Error(ErrorCode::OutOfRange, "critical_overlap requires 0 < eta1 < 1");
  }
  const auto gap = [eta1](double s) {
    const DiscriminationProblem p = make_problem(s, eta1);
    const auto q = best_interior_success(p);
    const double interior = q ? symmetric_success(p, *q) : -1.0;
    return interior - boundary_success(p);
  };
  constexpr double lo = 1e-6;
  constexpr double hi = 0.25;
  if (!(gap(lo) > 0.0) || gap(hi) >= 0.0) return std::nullopt;
  return bisect_root(gap, lo, hi, 1e-10);
}

FlipFlopStrategy::FlipFlopStrategy(double c) : c_(c) {
  if (!(c >= 0.0 && c <= 1.0)) throw Error(ErrorCode::OutOfRange, "flipping rate must lie in [0, 1]");
}

FlipFlopSingle ff_single(const DiscriminationProblem& problem, FlipFlopStrategy ff) {
  const double c = ff.c();
  const double s2 = problem.s() * problem.s();
  return {c + (1.0 - c) * s2, 1.0 - c + c * s2,
          (problem.eta1() * (1.0 - c) + problem.eta2() * c) * (1.0 - s2)};
}

FlipFlopRates ff_sequential_rates(const DiscriminationProblem& problem, FlipFlopStrategy ff) {
  const double c = ff.c();
  const double s = problem.s();
  const double q1 = c + (1.0 - c) * s;
  const double q2 = c * s + (1.0 - c);
  return {q1, q2, q1, q2, 1.0 - q1, 1.0 - q2, 1.0 - q1, 1.0 - q2};
}

double ff_sequential_joint(const DiscriminationProblem& problem, FlipFlopStrategy ff) {
  const double c = ff.c();
  const double d = 1.0 - problem.s();
  return ((1.0 - c) * (1.0 - c) * problem.eta1() + c * c * problem.eta2()) * d * d;
}

SequentialStrategy ff_setup_strategy(const DiscriminationProblem& problem, int setup) {
  if (setup != 1 && setup != 2) throw Error(ErrorCode::OutOfRange, "flip-flop setup must be 1 or 2");
  return symmetric_strategy(problem, setup == 1 ? 1.0 : problem.s());
}

namespace {

struct GridPoint {
  double value = -std::numeric_limits<double>::infinity();
  double t = 0, q1b = 0, q1c = 0;

  void offer(double v, double t_, double b, double c) {
    if (v > value || (v == value && std::tie(t_, b, c) < std::tie(t, q1b, q1c))) {
      value = v;
      t = t_;
      q1b = b;
      q1c = c;
    }
  }
  void merge(const GridPoint& o) { offer(o.value, o.t, o.q1b, o.q1c); }
};

double lerp(double lo, double hi, std::size_t i, std::size_t n) {
  if (i + 1 == n) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace

OptimizationResult grid_oracle(const DiscriminationProblem& problem, int n_per_axis) {
  if (n_per_axis < 50) throw Error(ErrorCode::OutOfRange, "grid_oracle requires n_per_axis >= 50");
  require_positive_overlap(problem, "grid_oracle");
  const std::size_t n = static_cast<std::size_t>(n_per_axis);
  const std::size_t m = 4 * n;  // face resolution
  const double s = problem.s();
  const auto q1b_lo = [s](double t) { return std::min(1.0, s * s / (t * t)); };
  const auto q1c_lo = [](double t) { return std::min(1.0, t * t); };

  const unsigned workers = worker_count();
  std::vector<GridPoint> partial(workers);

  // Volume.
  parallel_chunks(n, [&](std::size_t begin, std::size_t end, unsigned w) {
    GridPoint& best = partial[w];
    for (std::size_t i = begin; i < end; ++i) {
      const double t = lerp(s, 1.0, i, n);
      const double b_lo = q1b_lo(t);
      const double c_lo = q1c_lo(t);
      for (std::size_t j = 0; j < n; ++j) {
        const double b = lerp(b_lo, 1.0, j, n);
        for (std::size_t k = 0; k < n; ++k) {
          const double c = lerp(c_lo, 1.0, k, n);
          best.offer(joint_success_free(problem, t, b, c), t, b, c);
        }
      }
    }
  }, workers);

  // Faces: t = s, t = 1 (both over (q1b, q1c)); q1b at either bound and q1c
  // at either bound (over t and the remaining parameter).
  std::vector<GridPoint> face_best(workers);
  parallel_chunks(m, [&](std::size_t begin, std::size_t end, unsigned w) {
    GridPoint& best = face_best[w];
    for (std::size_t i = begin; i < end; ++i) {
      for (double t : {s, 1.0}) {
        const double b = lerp(q1b_lo(t), 1.0, i, m);
        for (std::size_t k = 0; k < m; ++k) {
          const double c = lerp(q1c_lo(t), 1.0, k, m);
          best.offer(joint_success_free(problem, t, b, c), t, b, c);
        }
      }
      const double t = lerp(s, 1.0, i, m);
      for (std::size_t k = 0; k < m; ++k) {
        const double c = lerp(q1c_lo(t), 1.0, k, m);
        for (double b : {q1b_lo(t), 1.0}) best.offer(joint_success_free(problem, t, b, c), t, b, c);
        const double b = lerp(q1b_lo(t), 1.0, k, m);
        for (double cc : {q1c_lo(t), 1.0}) best.offer(joint_success_free(problem, t, b, cc), t, b, cc);
      }
    }
  }, workers);

  GridPoint best;
  for (const auto& g : partial) best.merge(g);
  for (const auto& g : face_best) best.merge(g);

  const SequentialStrategy st = make_strategy(problem, best.t, best.q1b, best.q1c);
  Regime regime = Regime::Interior;
  if (st.p1b() * st.p1c() < 1e-6) regime = Regime::BoundaryState2;
  else if (st.p2b() * st.p2c() < 1e-6) regime = Regime::BoundaryState1;
  return {st, joint_success(problem, st), joint_failure(problem, st), regime, Method::Grid};
}

}  // namespace seqdisc
