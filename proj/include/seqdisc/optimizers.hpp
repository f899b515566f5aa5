#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "seqdisc/core_model.hpp"

namespace seqdisc {

/// P_ss = eta1 p1b p1c + eta2 p2b p2c.
double joint_success(const DiscriminationProblem& problem, const SequentialStrategy& strategy);

/// P_ss written in the free parameters (t, q1b, q1c) alone.
double joint_success_free(const DiscriminationProblem& problem, double t, double q1b, double q1c);

/// P_ff = eta1 q1b q1c + eta2 q2b q2c.
double joint_failure(const DiscriminationProblem& problem, const SequentialStrategy& strategy);

struct MinJointFailure {
  double q1b_q1c_product;
  double p_ff;
  Regime regime;  // LowPrior, Middle or HighPrior
};

/// Minimum of P_ff over all strategies. It depends only on q1b q1c because
/// q1b q2b q1c q2c = s^2 for every admissible strategy.
MinJointFailure min_joint_failure(const DiscriminationProblem& problem);

/// Maximum P_ss subject to P_ff being at its minimum. Requires s > 0.
OptimizationResult optimize_minfail_success(const DiscriminationProblem& problem);

/// Three-branch closed form of the value optimize_minfail_success attains.
double minfail_success_closed_form(const DiscriminationProblem& problem);

/// P_ss on the symmetric family t = sqrt(s), q1c = q1b = q.
double symmetric_success(const DiscriminationProblem& problem, double q);
double symmetric_success_second_derivative(const DiscriminationProblem& problem, double q);

enum class RootClass { LocalMax, LocalMin, NonPhysical };

struct QuarticRootReport {
  std::vector<std::complex<double>> all_roots;  // 4 entries
  std::vector<double> physical_roots;           // real roots in [s, 1], ascending
  std::vector<RootClass> classification;        // parallel to all_roots
};

/// Stationary points of symmetric_success: roots of
/// r q^4 - r q^3 + s q - s^2 = 0 with r = eta1/eta2. Requires s > 0.
QuarticRootReport quartic_physical_roots(const DiscriminationProblem& problem);

/// r q^4 - r q^3 + s q - s^2.
double quartic_residual(const DiscriminationProblem& problem, std::complex<double> q);

/// q1b of the best interior local maximum of symmetric_success, if any.
std::optional<double> best_interior_success(const DiscriminationProblem& problem);

/// eta_max (1 - s)^2.
double boundary_success(const DiscriminationProblem& problem);

/// Global maximum of P_ss with no constraint on P_ff. Requires s > 0.
OptimizationResult optimize_success_only(const DiscriminationProblem& problem);

/// Overlap s_c at which the interior maximum and the boundary value cross,
/// searched on (1e-6, 0.25]. Returns nullopt when there is no crossing there.
std::optional<double> critical_overlap(double eta1);

/// Probability of choosing setup 1 (inconclusive on |psi_1>, identifies state 2).
class FlipFlopStrategy {
 public:
  explicit FlipFlopStrategy(double c);
  double c() const noexcept { return c_; }

 private:
  double c_;
};

struct FlipFlopSingle {
  double q1;
  double q2;
  double p_succ;
};

/// Single observer flipping between the two von Neumann setups.
FlipFlopSingle ff_single(const DiscriminationProblem& problem, FlipFlopStrategy ff);

struct FlipFlopRates {
  double q1b, q2b, q1c, q2c;
  double p1b, p2b, p1c, p2c;
};

/// Bob and Charlie each flip independently with the same rate between the
/// two boundary setups at t^2 = s. Failure rates averaged over c.
FlipFlopRates ff_sequential_rates(const DiscriminationProblem& problem, FlipFlopStrategy ff);

/// [(1 - c)^2 eta1 + c^2 eta2] (1 - s)^2.
double ff_sequential_joint(const DiscriminationProblem& problem, FlipFlopStrategy ff);

/// The two boundary strategies the flip-flop setups use. Setup 1 never
/// identifies state 1 (q1b = q1c = 1); setup 2 is its mirror.
SequentialStrategy ff_setup_strategy(const DiscriminationProblem& problem, int setup);

/// Exhaustive search over an inclusive n^3 grid of (t, q1b, q1c), plus a
/// finer sweep of the six faces of the admissible box. Requires n >= 50, s > 0.
OptimizationResult grid_oracle(const DiscriminationProblem& problem, int n_per_axis);

}  // namespace seqdisc
