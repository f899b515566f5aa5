#include "seqdisc/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "seqdisc/error.hpp"

namespace seqdisc {

namespace {

std::string describe(const char* what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " = " << value;
  return os.str();
}

// Accept values up to kConstraintTol outside [lo, hi] and pull them back in.
bool within(double& value, double lo, double hi) {
  if (!(value >= lo - kConstraintTol && value <= hi + kConstraintTol)) return false;
  value = std::clamp(value, lo, hi);
  return true;
}

}  // namespace

DiscriminationProblem make_problem(double s, double eta1) {
  if (!(s >= 0.0 && s < 1.0)) {
    throw Error(ErrorCode::OutOfRange, describe("overlap must satisfy 0 <= s < 1, got s", s));
  }
  if (!(eta1 > 0.0 && eta1 < 1.0)) {
    throw Error(ErrorCode::OutOfRange, describe("prior must satisfy 0 < eta1 < 1, got eta1", eta1));
  }
  return {s, eta1};
}

StatePair embed_states(double overlap) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) {
    throw Error(ErrorCode::OutOfRange, describe("overlap outside [0, 1]", overlap));
  }
  // cos(2 theta) = overlap
  const double theta = 0.5 * std::acos(overlap);
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  return {Qubit{c, sn}, Qubit{c, -sn}, overlap};
}

SequentialStrategy SequentialStrategy::swapped() const noexcept {
  return {t_, q2b_, q1b_, q2c_, q1c_};
}

SequentialStrategy make_strategy(const DiscriminationProblem& problem, double t, double q1b,
                                 double q1c) {
  const double s = problem.s();
  if (!(t > 0.0) || !within(t, s, 1.0)) {
    throw Error(ErrorCode::ConstraintViolation,
                describe("intermediate overlap must satisfy s <= t <= 1 and t > 0, got t", t));
  }
  const double t2 = t * t;
  const double q1b_min = s * s / t2;
  if (!within(q1b, q1b_min, 1.0)) {
    throw Error(ErrorCode::ConstraintViolation,
                describe("q1b below s^2/t^2 or above 1, got q1b", q1b) +
                    describe(", lower bound", q1b_min));
  }
  if (!within(q1c, t2, 1.0)) {
    throw Error(ErrorCode::ConstraintViolation,
                describe("q1c below t^2 or above 1, got q1c", q1c) + describe(", lower bound", t2));
  }
  // q1b >= q1b_min and q1c >= t^2 imply the derived values never exceed 1
  // by more than rounding.
  const double q2b = std::min(1.0, q1b_min / q1b);
  const double q2c = std::min(1.0, t2 / q1c);
  return {t, q1b, q2b, q1c, q2c};
}

bool satisfies_constraints(const DiscriminationProblem& problem, const SequentialStrategy& st,
                           double tol) {
  const double s = problem.s();
  const auto in_unit = [](double q) { return q >= 0.0 && q <= 1.0; };
  if (!in_unit(st.q1b()) || !in_unit(st.q2b()) || !in_unit(st.q1c()) || !in_unit(st.q2c())) {
    return false;
  }
  if (st.t() < s - tol || st.t() > 1.0 + tol) return false;
  if (std::abs(s / st.t() - std::sqrt(st.q1b() * st.q2b())) > tol) return false;
  if (std::abs(st.t() - std::sqrt(st.q1c() * st.q2c())) > tol) return false;
  return std::abs(st.q1b() * st.q2b() * st.q1c() * st.q2c() - s * s) <= tol;
}

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Interior: return "INTERIOR";
    case Regime::BoundaryState1: return "BOUNDARY_STATE1";
    case Regime::BoundaryState2: return "BOUNDARY_STATE2";
    case Regime::LowPrior: return "REGIME_LOW_PRIOR";
    case Regime::Middle: return "REGIME_MIDDLE";
    case Regime::HighPrior: return "REGIME_HIGH_PRIOR";
  }
  return "UNKNOWN";
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::ClosedForm: return "closed-form";
    case Method::RootSolve: return "root-solve";
    case Method::Grid: return "grid";
  }
  return "unknown";
}

}  // namespace seqdisc
