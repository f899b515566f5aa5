#pragma once

#include <Eigen/Dense>
#include <array>

#include "seqdisc/core_model.hpp"
#include "seqdisc/rng.hpp"

namespace seqdisc {

using Matrix6c = Eigen::Matrix<std::complex<double>, 6, 6>;
using Vector6c = Eigen::Matrix<std::complex<double>, 6, 1>;

inline constexpr int kAncillaDim = 3;
inline constexpr int kInconclusive = 0;

/// Basis index of |qubit>|ancilla> on the 6-dimensional space. Ancilla-major,
/// so the columns acting on qubit (x) |0>_ancilla are columns 0 and 1 and the
/// ancilla sector j occupies rows 2j and 2j+1.
constexpr int joint_index(int qubit, int ancilla) { return 2 * ancilla + qubit; }

enum class StageRole { Bob, Charlie };

/// Neumark dilation of one observer's three-outcome measurement. Ancilla
/// outcome 0 is inconclusive, outcome i identifies state i.
struct StageUnitary {
  Matrix6c matrix;
  StageRole role;
};

StageUnitary build_bob_unitary(const DiscriminationProblem& problem,
                               const SequentialStrategy& strategy);
StageUnitary build_charlie_unitary(const DiscriminationProblem& problem,
                                   const SequentialStrategy& strategy);

/// U (qubit (x) |0>) split into the three ancilla sectors.
std::array<Qubit, kAncillaDim> sector_amplitudes(const StageUnitary& u, const Qubit& qubit_in);

struct StageOutcome {
  int outcome;
  Qubit qubit_out;
};

/// Samples the ancilla measurement and returns the renormalized qubit of the
/// selected sector. Sectors with norm below 1e-14 are never selected; if all
/// are, throws Error(NumericalDegeneracy).
StageOutcome measure_stage(const StageUnitary& u, const Qubit& qubit_in, CounterRng& rng);

/// Same as above with the uniform variate supplied by the caller.
StageOutcome measure_stage(const StageUnitary& u, const Qubit& qubit_in, double uniform);

/// max |U^dagger U - I| over all entries.
double unitarity_defect(const Matrix6c& m);
inline double unitarity_defect(const StageUnitary& u) { return unitarity_defect(u.matrix); }

/// |<a|b>|^2 for normalized a, b.
double fidelity(const Qubit& a, const Qubit& b);

}  // namespace seqdisc
