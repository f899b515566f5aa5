#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqdisc/core_model.hpp"
#include "seqdisc/optimizers.hpp"

namespace seqdisc {

enum class Setup : std::uint8_t { None, Povm, FlipFlop1, FlipFlop2 };

std::string_view to_string(Setup setup);

/// One round of the protocol. prepared is 1 or 2; outcomes are 0
/// (inconclusive) or the identified state. Charlie fields are None/0 for the
/// two-party flip-flop run.
struct TrialRecord {
  std::uint8_t prepared;
  std::uint8_t bob_outcome;
  std::uint8_t charlie_outcome;
  Setup bob_setup;
  Setup charlie_setup;

  bool operator==(const TrialRecord&) const = default;
};

struct TrialLedger {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  bool has_charlie = true;
  std::vector<TrialRecord> records;

  std::size_t n() const { return records.size(); }
};

/// A trial generator: record for trial index k, a pure function of
/// (seed, stream, k). Trials are independent, so any partition of the index
/// range across workers reproduces the same ledger.
using TrialKernel = std::function<TrialRecord(std::uint64_t trial)>;

TrialKernel sequential_kernel(const DiscriminationProblem& problem,
                              const SequentialStrategy& strategy, std::uint64_t seed,
                              std::uint64_t stream = 0);
TrialKernel flipflop_sequential_kernel(const DiscriminationProblem& problem, FlipFlopStrategy ff,
                                       std::uint64_t seed, std::uint64_t stream = 0);
TrialKernel flipflop_single_kernel(const DiscriminationProblem& problem, FlipFlopStrategy ff,
                                   std::uint64_t seed, std::uint64_t stream = 0);

TrialLedger run_sequential(const DiscriminationProblem& problem, const SequentialStrategy& strategy,
                           std::size_t n, std::uint64_t seed, std::uint64_t stream = 0);
TrialLedger run_flipflop_sequential(const DiscriminationProblem& problem, FlipFlopStrategy ff,
                                    std::size_t n, std::uint64_t seed, std::uint64_t stream = 0);
TrialLedger run_flipflop_single(const DiscriminationProblem& problem, FlipFlopStrategy ff,
                                std::size_t n, std::uint64_t seed, std::uint64_t stream = 0);

/// Generates trials [0, n) in blocks and hands each block to sink in trial
/// order, keeping at most one block in memory.
void stream_trials(const TrialKernel& kernel, std::size_t n, std::size_t block_size,
                   const std::function<void(std::span<const TrialRecord>, std::uint64_t first)>& sink);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;  // sqrt(p (1 - p) / n)
  std::size_t n = 0;
};

struct SimulationStats {
  std::size_t n = 0;
  Estimate p_ss;
  Estimate p_ff;
  Estimate bob_success;
  Estimate charlie_success;
  std::array<Estimate, 2> bob_success_given;      // conditional on prepared state
  std::array<Estimate, 2> charlie_success_given;
  std::array<Estimate, 2> joint_success_given;
  std::array<std::size_t, 2> prepared_counts{};
  std::size_t misidentifications = 0;
  double mi_ab = 0.0;  // plug-in P_s H(C) on conclusive records
  double mi_ac = 0.0;
  double mi_bc = 0.0;
};

/// Single-pass counter; merge() is associative so blocks can be reduced in
/// any grouping.
class StatsAccumulator {
 public:
  void add(const TrialRecord& r);
  void add(std::span<const TrialRecord> records) {
    for (const auto& r : records) add(r);
  }
  void merge(const StatsAccumulator& other);
  SimulationStats finish() const;

 private:
  std::size_t n_ = 0;
  std::array<std::size_t, 2> prepared_{};
  std::array<std::size_t, 2> bob_{};
  std::array<std::size_t, 2> charlie_{};
  std::array<std::size_t, 2> joint_{};
  std::size_t both_fail_ = 0;
  std::size_t misid_ = 0;
};

SimulationStats empirical_stats(const TrialLedger& ledger);

struct SiftedKey {
  std::string bits;  // '0' for state 1, '1' for state 2
  std::vector<std::uint64_t> trials;
  double rate = 0.0;     // bits / trials
  double balance = 0.0;  // fraction of '1'
  std::size_t errors = 0;  // positions disagreeing with Alice's record
};

struct KeyBundle {
  SiftedKey ab;
  SiftedKey ac;
  SiftedKey abc;
};

KeyBundle sift_keys(const TrialLedger& ledger);

/// CSV with header trial,prepared,bob_setup,bob_outcome,charlie_setup,charlie_outcome.
void write_ledger_header(std::ostream& out);
void write_ledger_rows(std::ostream& out, std::span<const TrialRecord> records, std::uint64_t first,
                       bool has_charlie);
void write_ledger_csv(std::ostream& out, const TrialLedger& ledger);

/// Three lines, key_ab, key_ac, key_abc, each an ASCII 0/1 string.
void write_keys(std::ostream& out, const KeyBundle& keys);
/// {"ab": {rate, balance, n_conclusive}, "ac": ..., "abc": ...}
std::string keys_sidecar_json(const KeyBundle& keys);

}  // namespace seqdisc
