#include "seqdisc/neumark.hpp"

#include <cmath>
#include <vector>

#include "seqdisc/error.hpp"

namespace seqdisc {

namespace {

constexpr double kResidualSkip = 1e-8;
constexpr double kSectorGuard = 1e-14;

Vector6c embed(const Qubit& qubit, int ancilla) {
  Vector6c v = Vector6c::Zero();
  v(joint_index(0, ancilla)) = qubit[0];
  v(joint_index(1, ancilla)) = qubit[1];
  return v;
}

Qubit scaled(const Qubit& q, double factor) { return {q[0] * factor, q[1] * factor}; }

// Two Gram-Schmidt passes against the current basis.
Vector6c residual(const std::vector<Vector6c>& basis, Vector6c v) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& e : basis) v -= e * e.dot(v);
  }
  return v;
}

void complete_basis(std::vector<Vector6c>& basis) {
  for (int k = 0; k < 6 && static_cast<int>(basis.size()) < 6; ++k) {
    Vector6c r = residual(basis, Vector6c::Unit(k));
    const double norm = r.norm();
    if (norm >= kResidualSkip) basis.push_back(r / norm);
  }
}

// Unitary mapping inputs[j] -> outputs[j]. Requires equal Gram matrices, which
// the strategy constraints guarantee. Orthonormalizes the inputs in order,
// carries the same linear combinations over to the outputs, then completes
// both sides over the standard basis in index order.
Matrix6c extend_isometry(const std::array<Vector6c, 2>& inputs,
                         const std::array<Vector6c, 2>& outputs) {
  std::vector<Vector6c> in_basis;
  std::vector<Vector6c> out_basis;
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    Vector6c r_in = inputs[j];
    Vector6c r_out = outputs[j];
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < in_basis.size(); ++k) {
        const auto coeff = in_basis[k].dot(r_in);
        r_in -= in_basis[k] * coeff;
        r_out -= out_basis[k] * coeff;
      }
    }
    const double norm = r_in.norm();
    if (norm < kResidualSkip) continue;
    in_basis.push_back(r_in / norm);
    out_basis.push_back(r_out / norm);
  }
  complete_basis(in_basis);
  complete_basis(out_basis);
  if (in_basis.size() != 6 || out_basis.size() != 6) {
    throw Error(ErrorCode::NumericalDegeneracy, "unitary completion lost rank");
  }
  Matrix6c u = Matrix6c::Zero();
  for (int k = 0; k < 6; ++k) u += out_basis[k] * in_basis[k].adjoint();
  return u;
}

}  // namespace

StageUnitary build_bob_unitary(const DiscriminationProblem& problem,
                               const SequentialStrategy& strategy) {
  if (!satisfies_constraints(problem, strategy)) {
    throw Error(ErrorCode::ConstraintViolation, "strategy inconsistent with problem");
  }
  const StatePair in = embed_states(problem.s());
  const StatePair mid = embed_states(strategy.t());
  // Success and failure branches leave the qubit in the same |phi_i>.
  const std::array<Vector6c, 2> inputs{embed(in.psi1, kInconclusive), embed(in.psi2, kInconclusive)};
  const std::array<Vector6c, 2> outputs{
      embed(scaled(mid.psi1, std::sqrt(strategy.p1b())), 1) +
          embed(scaled(mid.psi1, std::sqrt(strategy.q1b())), kInconclusive),
      embed(scaled(mid.psi2, std::sqrt(strategy.p2b())), 2) +
          embed(scaled(mid.psi2, std::sqrt(strategy.q2b())), kInconclusive)};
  return {extend_isometry(inputs, outputs), StageRole::Bob};
}

StageUnitary build_charlie_unitary(const DiscriminationProblem& problem,
                                   const SequentialStrategy& strategy) {
  if (!satisfies_constraints(problem, strategy)) {
    throw Error(ErrorCode::ConstraintViolation, "strategy inconsistent with problem");
  }
  const StatePair mid = embed_states(strategy.t());
  // Success post-states |theta_1> = |theta_2> = |0>; the shared failure state
  // is (|phi_1> + |phi_2>)/norm, which for the canonical embedding is also |0>.
  const Qubit success_state{1.0, 0.0};
  const Qubit sum{mid.psi1[0] + mid.psi2[0], mid.psi1[1] + mid.psi2[1]};
  const double sum_norm = std::sqrt(std::norm(sum[0]) + std::norm(sum[1]));
  const Qubit failure_state = scaled(sum, 1.0 / sum_norm);
  const std::array<Vector6c, 2> inputs{embed(mid.psi1, kInconclusive),
                                       embed(mid.psi2, kInconclusive)};
  const std::array<Vector6c, 2> outputs{
      embed(scaled(success_state, std::sqrt(strategy.p1c())), 1) +
          embed(scaled(failure_state, std::sqrt(strategy.q1c())), kInconclusive),
      embed(scaled(success_state, std::sqrt(strategy.p2c())), 2) +
          embed(scaled(failure_state, std::sqrt(strategy.q2c())), kInconclusive)};
  return {extend_isometry(inputs, outputs), StageRole::Charlie};
}

std::array<Qubit, kAncillaDim> sector_amplitudes(const StageUnitary& u, const Qubit& qubit_in) {
  const Vector6c out = u.matrix.col(joint_index(0, kInconclusive)) * qubit_in[0] +
                       u.matrix.col(joint_index(1, kInconclusive)) * qubit_in[1];
  std::array<Qubit, kAncillaDim> sectors;
  for (int j = 0; j < kAncillaDim; ++j) {
    sectors[j] = {out(joint_index(0, j)), out(joint_index(1, j))};
  }
  return sectors;
}

StageOutcome measure_stage(const StageUnitary& u, const Qubit& qubit_in, CounterRng& rng) {
  return measure_stage(u, qubit_in, rng.uniform());
}

StageOutcome measure_stage(const StageUnitary& u, const Qubit& qubit_in, double uniform) {
  const auto sectors = sector_amplitudes(u, qubit_in);
  std::array<double, kAncillaDim> weight{};
  double total = 0.0;
  for (int j = 0; j < kAncillaDim; ++j) {
    const double w = std::norm(sectors[j][0]) + std::norm(sectors[j][1]);
    weight[j] = std::sqrt(w) < kSectorGuard ? 0.0 : w;
    total += weight[j];
  }
  if (total <= 0.0) {
    throw Error(ErrorCode::NumericalDegeneracy, "every ancilla sector has vanishing norm");
  }
  const double x = uniform * total;
  int chosen = -1;
  double cumulative = 0.0;
  for (int j = 0; j < kAncillaDim; ++j) {
    if (weight[j] == 0.0) continue;
    chosen = j;
    cumulative += weight[j];
    if (x < cumulative) break;
  }
  return {chosen, scaled(sectors[chosen], 1.0 / std::sqrt(weight[chosen]))};
}

double unitarity_defect(const Matrix6c& m) {
  return (m.adjoint() * m - Matrix6c::Identity()).cwiseAbs().maxCoeff();
}

double fidelity(const Qubit& a, const Qubit& b) {
  return std::norm(std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1]);
}

}  // namespace seqdisc
