#include "seqdisc/simulator.hpp"

#include <json.hpp>
#include <algorithm>
#include <cmath>
#include <ostream>

#include "seqdisc/error.hpp"
#include "seqdisc/infotheory.hpp"
#include "seqdisc/neumark.hpp"
#include "seqdisc/parallel.hpp"

namespace seqdisc {

namespace {

double norm2(const Qubit& q) { return std::norm(q[0]) + std::norm(q[1]); }

Estimate binomial(std::size_t hits, std::size_t n) {
  Estimate e;
  e.n = n;
  if (n == 0) return e;
  e.value = static_cast<double>(hits) / static_cast<double>(n);
  e.std_error = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(n));
  return e;
}

double plug_in_information(std::size_t state1, std::size_t state2, std::size_t n) {
  if (n == 0) return 0.0;
  const double total = static_cast<double>(state1 + state2);
  if (total == 0.0) return 0.0;
  return total / static_cast<double>(n) * binary_entropy(static_cast<double>(state1) / total);
}

TrialLedger fill(const TrialKernel& kernel, std::size_t n, std::uint64_t seed, std::uint64_t stream,
                 bool has_charlie) {
  if (n == 0) throw Error(ErrorCode::OutOfRange, "simulation needs at least one trial");
  TrialLedger ledger;
  ledger.seed = seed;
  ledger.stream = stream;
  ledger.has_charlie = has_charlie;
  ledger.records.resize(n);
  parallel_chunks(n, [&](std::size_t begin, std::size_t end, unsigned) {
    for (std::size_t k = begin; k < end; ++k) ledger.records[k] = kernel(k);
  });
  return ledger;
}

std::uint8_t prepare(const DiscriminationProblem& p, CounterRng& rng) {
  return rng.uniform() < p.eta1() ? 1 : 2;
}

const Qubit& input_state(const StatePair& states, std::uint8_t prepared) {
  return prepared == 1 ? states.psi1 : states.psi2;
}

}  // namespace

std::string_view to_string(Setup setup) {
  switch (setup) {
    case Setup::None: return "";
    case Setup::Povm: return "POVM";
    case Setup::FlipFlop1: return "FF1";
    case Setup::FlipFlop2: return "FF2";
  }
  return "";
}

TrialKernel sequential_kernel(const DiscriminationProblem& problem,
                              const SequentialStrategy& strategy, std::uint64_t seed,
                              std::uint64_t stream) {
  const StageUnitary bob = build_bob_unitary(problem, strategy);
  const StageUnitary charlie = build_charlie_unitary(problem, strategy);
  const StatePair states = embed_states(problem.s());
  return [=](std::uint64_t trial) {
    CounterRng rng(seed, stream, trial);
    TrialRecord r{};
    r.prepared = prepare(problem, rng);
    r.bob_setup = Setup::Povm;
    r.charlie_setup = Setup::Povm;
    const StageOutcome at_bob = measure_stage(bob, input_state(states, r.prepared), rng);
    const StageOutcome at_charlie = measure_stage(charlie, at_bob.qubit_out, rng);
    r.bob_outcome = static_cast<std::uint8_t>(at_bob.outcome);
    r.charlie_outcome = static_cast<std::uint8_t>(at_charlie.outcome);
    return r;
  };
}

TrialKernel flipflop_sequential_kernel(const DiscriminationProblem& problem, FlipFlopStrategy ff,
                                       std::uint64_t seed, std::uint64_t stream) {
  const SequentialStrategy setup1 = ff_setup_strategy(problem, 1);
  const SequentialStrategy setup2 = ff_setup_strategy(problem, 2);
  const std::array<StageUnitary, 2> bob{build_bob_unitary(problem, setup1),
                                        build_bob_unitary(problem, setup2)};
  const std::array<StageUnitary, 2> charlie{build_charlie_unitary(problem, setup1),
                                            build_charlie_unitary(problem, setup2)};
  const StatePair states = embed_states(problem.s());
  const double c = ff.c();
  return [=](std::uint64_t trial) {
    CounterRng rng(seed, stream, trial);
    TrialRecord r{};
    r.prepared = prepare(problem, rng);
    const int b = rng.uniform() < c ? 0 : 1;
    const StageOutcome at_bob = measure_stage(bob[b], input_state(states, r.prepared), rng);
    const int ch = rng.uniform() < c ? 0 : 1;
    const StageOutcome at_charlie = measure_stage(charlie[ch], at_bob.qubit_out, rng);
    r.bob_setup = b == 0 ? Setup::FlipFlop1 : Setup::FlipFlop2;
    r.charlie_setup = ch == 0 ? Setup::FlipFlop1 : Setup::FlipFlop2;
    r.bob_outcome = static_cast<std::uint8_t>(at_bob.outcome);
    r.charlie_outcome = static_cast<std::uint8_t>(at_charlie.outcome);
    return r;
  };
}

TrialKernel flipflop_single_kernel(const DiscriminationProblem& problem, FlipFlopStrategy ff,
                                   std::uint64_t seed, std::uint64_t stream) {
  const StatePair states = embed_states(problem.s());
  const double c = ff.c();
  return [=](std::uint64_t trial) {
    CounterRng rng(seed, stream, trial);
    TrialRecord r{};
    r.prepared = prepare(problem, rng);
    const bool first = rng.uniform() < c;
    // Setup 1 projects on {|psi1>, |psi1_perp>}: a |psi1> click is
    // inconclusive, |psi1_perp> identifies state 2. Setup 2 mirrors it.
    const Qubit& projector = first ? states.psi1 : states.psi2;
    const double inconclusive = fidelity(projector, input_state(states, r.prepared)) /
                                norm2(input_state(states, r.prepared));
    r.bob_setup = first ? Setup::FlipFlop1 : Setup::FlipFlop2;
    r.bob_outcome = rng.uniform() < inconclusive ? 0 : (first ? 2 : 1);
    r.charlie_setup = Setup::None;
    r.charlie_outcome = 0;
    return r;
  };
}

TrialLedger run_sequential(const DiscriminationProblem& problem, const SequentialStrategy& strategy,
                           std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  return fill(sequential_kernel(problem, strategy, seed, stream), n, seed, stream, true);
}

TrialLedger run_flipflop_sequential(const DiscriminationProblem& problem, FlipFlopStrategy ff,
                                    std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  return fill(flipflop_sequential_kernel(problem, ff, seed, stream), n, seed, stream, true);
}

TrialLedger run_flipflop_single(const DiscriminationProblem& problem, FlipFlopStrategy ff,
                                std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  return fill(flipflop_single_kernel(problem, ff, seed, stream), n, seed, stream, false);
}

void stream_trials(const TrialKernel& kernel, std::size_t n, std::size_t block_size,
                   const std::function<void(std::span<const TrialRecord>, std::uint64_t)>& sink) {
  if (block_size == 0) throw Error(ErrorCode::OutOfRange, "block size must be positive");
  std::vector<TrialRecord> block;
  for (std::size_t first = 0; first < n; first += block_size) {
    const std::size_t count = std::min(block_size, n - first);
    block.resize(count);
    parallel_chunks(count, [&](std::size_t begin, std::size_t end, unsigned) {
      for (std::size_t k = begin; k < end; ++k) block[k] = kernel(first + k);
    });
    sink(block, first);
  }
}

void StatsAccumulator::add(const TrialRecord& r) {
  ++n_;
  const int i = r.prepared - 1;
  ++prepared_[i];
  const bool bob = r.bob_outcome != 0;
  const bool charlie = r.charlie_outcome != 0;
  if (bob) ++bob_[i];
  if (charlie) ++charlie_[i];
  if (bob && charlie) ++joint_[i];
  if (!bob && !charlie) ++both_fail_;
  if ((bob && r.bob_outcome != r.prepared) || (charlie && r.charlie_outcome != r.prepared)) ++misid_;
}

void StatsAccumulator::merge(const StatsAccumulator& o) {
  n_ += o.n_;
  for (int i = 0; i < 2; ++i) {
    prepared_[i] += o.prepared_[i];
    bob_[i] += o.bob_[i];
    charlie_[i] += o.charlie_[i];
    joint_[i] += o.joint_[i];
  }
  both_fail_ += o.both_fail_;
  misid_ += o.misid_;
}

SimulationStats StatsAccumulator::finish() const {
  SimulationStats st;
  st.n = n_;
  st.prepared_counts = prepared_;
  st.misidentifications = misid_;
  st.p_ss = binomial(joint_[0] + joint_[1], n_);
  st.p_ff = binomial(both_fail_, n_);
  st.bob_success = binomial(bob_[0] + bob_[1], n_);
  st.charlie_success = binomial(charlie_[0] + charlie_[1], n_);
  for (int i = 0; i < 2; ++i) {
    st.bob_success_given[i] = binomial(bob_[i], prepared_[i]);
    st.charlie_success_given[i] = binomial(charlie_[i], prepared_[i]);
    st.joint_success_given[i] = binomial(joint_[i], prepared_[i]);
  }
  st.mi_ab = plug_in_information(bob_[0], bob_[1], n_);
  st.mi_ac = plug_in_information(charlie_[0], charlie_[1], n_);
  st.mi_bc = plug_in_information(joint_[0], joint_[1], n_);
  return st;
}

SimulationStats empirical_stats(const TrialLedger& ledger) {
  if (ledger.n() == 0) throw Error(ErrorCode::OutOfRange, "empty ledger");
  StatsAccumulator acc;
  acc.add(ledger.records);
  return acc.finish();
}

KeyBundle sift_keys(const TrialLedger& ledger) {
  if (ledger.n() == 0) throw Error(ErrorCode::OutOfRange, "empty ledger");
  KeyBundle keys;
  const auto append = [](SiftedKey& key, std::uint64_t trial, std::uint8_t outcome,
                         std::uint8_t prepared) {
    key.bits.push_back(outcome == 1 ? '0' : '1');
    key.trials.push_back(trial);
    if (outcome != prepared) ++key.errors;
  };
  for (std::size_t k = 0; k < ledger.n(); ++k) {
    const TrialRecord& r = ledger.records[k];
    if (r.bob_outcome != 0) append(keys.ab, k, r.bob_outcome, r.prepared);
    if (r.charlie_outcome != 0) append(keys.ac, k, r.charlie_outcome, r.prepared);
    if (r.bob_outcome != 0 && r.charlie_outcome != 0) {
      append(keys.abc, k, r.bob_outcome, r.prepared);
      if (r.charlie_outcome != r.bob_outcome) ++keys.abc.errors;
    }
  }
  const double n = static_cast<double>(ledger.n());
  for (SiftedKey* key : {&keys.ab, &keys.ac, &keys.abc}) {
    key->rate = static_cast<double>(key->bits.size()) / n;
    const auto ones = std::count(key->bits.begin(), key->bits.end(), '1');
    key->balance = key->bits.empty() ? 0.0 : static_cast<double>(ones) / key->bits.size();
  }
  return keys;
}

void write_ledger_header(std::ostream& out) {
  out << "trial,prepared,bob_setup,bob_outcome,charlie_setup,charlie_outcome\r\n";
}

void write_ledger_rows(std::ostream& out, std::span<const TrialRecord> records, std::uint64_t first,
                       bool has_charlie) {
  for (std::size_t k = 0; k < records.size(); ++k) {
    const TrialRecord& r = records[k];
    out << first + k << ',' << int(r.prepared) << ',' << to_string(r.bob_setup) << ','
        << int(r.bob_outcome) << ',';
    if (has_charlie) out << to_string(r.charlie_setup) << ',' << int(r.charlie_outcome);
    else out << ',';
    out << "\r\n";
  }
}

void write_ledger_csv(std::ostream& out, const TrialLedger& ledger) {
  write_ledger_header(out);
  write_ledger_rows(out, ledger.records, 0, ledger.has_charlie);
}

void write_keys(std::ostream& out, const KeyBundle& keys) {
  out << keys.ab.bits << '\n' << keys.ac.bits << '\n' << keys.abc.bits << '\n';
}

std::string keys_sidecar_json(const KeyBundle& keys) {
  nlohmann::ordered_json j;
  const auto entry = [](const SiftedKey& k) {
    nlohmann::ordered_json e;
    e["rate"] = k.rate;
    e["balance"] = k.balance;
    e["n_conclusive"] = k.bits.size();
    return e;
  };
  j["ab"] = entry(keys.ab);
  j["ac"] = entry(keys.ac);
  j["abc"] = entry(keys.abc);
  return j.dump(2);
}

}  // namespace seqdisc
