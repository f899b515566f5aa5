#pragma once

#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace seqdisc::cli {

enum class Command { Optimize, Sweep, Simulate, Qkd, Figure };
enum class Scheme { MinFailure, SuccessOnly, FlipFlop };
enum class Format { Csv, Json };

/// Exit codes are a stable scripting contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitRuntime = 3;

/// Trial counts above this stream the ledger to disk block by block.
inline constexpr std::size_t kStreamingThreshold = 10'000'000;

struct RunConfig {
  Command command = Command::Optimize;
  double s = 0.25;
  double eta1 = 0.5;
  Scheme scheme = Scheme::SuccessOnly;
  std::optional<double> c;  // flip-flop rate; defaults to eta1 (balanced)
  bool two_party = false;   // flip-flop with Bob only
  std::string axis = "s";
  double from = 0.0;
  double to = 0.0;
  int points = 401;
  std::size_t trials = 1'000'000;
  std::uint64_t seed = 42;
  std::uint64_t stream = 0;
  std::string output;  // empty: stdout
  Format format = Format::Json;
  std::string figure;
  int resolution = 401;
  std::string ledger_path;
  std::string keys_path;
  bool dump_unitaries = false;
};

using Json = nlohmann::ordered_json;

Json optimize_report(const RunConfig& config);
void write_sweep(const RunConfig& config, std::ostream& out);
/// Runs the configured simulation; writes the ledger CSV when a path is set.
Json simulate_report(const RunConfig& config);
/// Simulation plus key sifting; writes key files when a path is set.
Json qkd_report(const RunConfig& config);

/// Full command-line entry point. Never throws; returns an exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seqdisc::cli
