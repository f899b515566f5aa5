#pragma once

#include <array>
#include <complex>
#include <string_view>

namespace seqdisc {

/// Absolute tolerance used by every constraint check.
inline constexpr double kConstraintTol = 1e-10;

using Amplitude = std::complex<double>;
using Qubit = std::array<Amplitude, 2>;

/// Two pure qubit states with real overlap s and priors eta1, eta2 = 1 - eta1.
class DiscriminationProblem {
 public:
  double s() const noexcept { return s_; }
  double eta1() const noexcept { return eta1_; }
  double eta2() const noexcept { return 1.0 - eta1_; }

  /// The same instance with the state labels exchanged.
  DiscriminationProblem swapped() const noexcept { return {s_, 1.0 - eta1_}; }

 private:
  DiscriminationProblem(double s, double eta1) : s_(s), eta1_(eta1) {}
  friend DiscriminationProblem make_problem(double s, double eta1);

  double s_;
  double eta1_;
};

/// Throws Error(OutOfRange) unless 0 <= s < 1 and 0 < eta1 < 1.
DiscriminationProblem make_problem(double s, double eta1);

struct StatePair {
  Qubit psi1;
  Qubit psi2;
  double overlap;
};

/// |psi_{1,2}> = cos(theta)|0> +- sin(theta)|1>, theta = acos(overlap) / 2.
StatePair embed_states(double overlap);

/// Failure probabilities of Bob (b) and Charlie (c) for each state, plus the
/// intermediate overlap t = <phi1|phi2>. Only reachable through make_strategy,
/// so q2b and q2c always satisfy the unitarity constraints.
class SequentialStrategy {
 public:
  double t() const noexcept { return t_; }
  double q1b() const noexcept { return q1b_; }
  double q2b() const noexcept { return q2b_; }
  double q1c() const noexcept { return q1c_; }
  double q2c() const noexcept { return q2c_; }
  double p1b() const noexcept { return 1.0 - q1b_; }
  double p2b() const noexcept { return 1.0 - q2b_; }
  double p1c() const noexcept { return 1.0 - q1c_; }
  double p2c() const noexcept { return 1.0 - q2c_; }

  /// Relabels states 1 <-> 2. Pair with DiscriminationProblem::swapped().
  SequentialStrategy swapped() const noexcept;

 private:
  SequentialStrategy(double t, double q1b, double q2b, double q1c, double q2c)
      : t_(t), q1b_(q1b), q2b_(q2b), q1c_(q1c), q2c_(q2c) {}
  friend SequentialStrategy make_strategy(const DiscriminationProblem&, double, double, double);

  double t_;
  double q1b_;
  double q2b_;
  double q1c_;
  double q2c_;
};

/// Builds a strategy from the free triple (t, q1b, q1c); q2b = s^2/(t^2 q1b),
/// q2c = t^2/q1c. Throws Error(ConstraintViolation) outside
/// s <= t <= 1, s^2/t^2 <= q1b <= 1, t^2 <= q1c <= 1 (or t = 0).
SequentialStrategy make_strategy(const DiscriminationProblem& problem, double t, double q1b,
                                 double q1c);

/// Checks the unitarity constraints and the product identity q1b q2b q1c q2c = s^2.
bool satisfies_constraints(const DiscriminationProblem& problem, const SequentialStrategy& strategy,
                           double tol = kConstraintTol);

enum class Regime {
  Interior,
  BoundaryState1,
  BoundaryState2,
  LowPrior,
  Middle,
  HighPrior,
};

enum class Method { ClosedForm, RootSolve, Grid };

std::string_view to_string(Regime regime);
std::string_view to_string(Method method);

struct OptimizationResult {
  SequentialStrategy strategy;
  double p_ss;
  double p_ff;
  Regime regime;
  Method method;
};

}  // namespace seqdisc
