#pragma once

#include "seqdisc/core_model.hpp"
#include "seqdisc/optimizers.hpp"

namespace seqdisc {

/// Mutual information of a channel that keeps only conclusive outcomes.
struct ChannelReport {
  double p_success;
  double confidence1;    // share of conclusive outcomes that identify state 1
  double mi;             // bits
  double optimizer_arg;  // q1, q1b or c, depending on the channel
};

/// -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0. Throws OutOfRange off [0, 1].
double binary_entropy(double p);

/// Information when inconclusive outcomes are kept and used for guessing:
/// H(eta1) - Q H(eta1 q1 / Q), Q = eta1 q1 + eta2 q2.
double mi_guessing(const DiscriminationProblem& problem, double q1, double q2);

/// Conclusive-only information between Alice and a single observer with
/// q2 = s^2 / q1 (the optimal unambiguous trade-off).
ChannelReport mi_usd_ab(const DiscriminationProblem& problem, double q1);
double mi_usd_ab_derivative(const DiscriminationProblem& problem, double q1);
ChannelReport optimize_mi_usd_ab(const DiscriminationProblem& problem);

/// Conclusive-only information for an observer with the given failure pair.
double mi_usd_observer(const DiscriminationProblem& problem, double q1_obs, double q2_obs);

/// Information shared by Bob and Charlie over rounds where both succeed.
ChannelReport mi_usd_bc(const DiscriminationProblem& problem, const SequentialStrategy& strategy);

/// mi_usd_bc on the symmetric family t = sqrt(s), q1c = q1b.
ChannelReport mi_usd_bc_symmetric(const DiscriminationProblem& problem, double q1b);
double mi_usd_bc_symmetric_derivative(const DiscriminationProblem& problem, double q1b);
ChannelReport optimize_mi_usd_bc(const DiscriminationProblem& problem);

/// Two-party flip-flop channel. Setup 1 (probability c) identifies state 2,
/// so the state-1 conclusive share is eta1 (1 - c)(1 - s^2).
ChannelReport mi_ff_ab(const DiscriminationProblem& problem, FlipFlopStrategy ff);
double mi_ff_ab_derivative(const DiscriminationProblem& problem, double c);
ChannelReport optimize_mi_ff_ab(const DiscriminationProblem& problem);

/// Bob-Charlie flip-flop channel at intermediate overlap t (s <= t^2 <= 1);
/// balanced rate c = eta1 and t^2 = s give eta1 eta2 (1 - s)^2 H(eta2).
double mi_ff_bc(const DiscriminationProblem& problem, FlipFlopStrategy ff, double t);

/// 1 - H(p_e), p_e = (1 - sqrt(1 - s^2)) / 2. Equal priors only; throws
/// UnsupportedPriors otherwise.
double helstrom_mi(const DiscriminationProblem& problem);

/// Equal-prior Helstrom information for any overlap in [0, 1].
double helstrom_mi(double s);

}  // namespace seqdisc
