#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vdc/channel.hpp"
#include "vdc/inner_code.hpp"
#include "vdc/recursive.hpp"
#include "vdc/stats.hpp"

namespace vdc {

/// First detected cause wins: alignment > cut-underestimation > inner > rs,
/// mirroring the serial decode pipeline.
enum class FailureStage { kNone, kAlignment, kCut, kInner, kRs };
const char* to_string(FailureStage s);

struct TrialRow {
  std::uint64_t trial = 0;
  std::uint64_t message_hash = 0;
  bool ok = true;
  FailureStage stage = FailureStage::kNone;
  std::size_t n_received = 0;
};

struct TrialReport {
  std::uint64_t total_trials = 0;
  std::uint64_t total_failures = 0;
  double estimate = 0.0;           // worst-message rate (table codes) or pooled rate
  stats::Interval ci95;
  std::uint64_t est_trials = 0;    // trials behind the estimate
  std::uint64_t est_failures = 0;
  bool per_message = false;
  std::array<std::uint64_t, 5> stage_counts{};  // indexed by FailureStage
  std::vector<TrialRow> rows;
  double wall_seconds = 0.0;       // reporting only, never serialized
};

struct ExperimentConfig {
  ChannelModel channel{ChannelKind::kBdc, 0.5};
  std::shared_ptr<const InnerCode> code;                  // plain inner-code DFP runs
  std::shared_ptr<const RecursiveCodeConfig> recursive;   // end-to-end runs when set
  std::uint64_t trials = 1000;
  std::uint64_t master_seed = 1;
  unsigned workers = 1;
};

/// Runs the trials with per-trial RNG streams derived from
/// (master_seed, trial). The report is byte-identical for every worker count.
TrialReport run_dfp_campaign(const ExperimentConfig& config);

/// CSV: trial,message_hash,outcome,stage,n_received
void write_trial_csv(const TrialReport& report, std::ostream& out);

/// Determinism-safe JSON summary (no timing data).
std::string report_summary_json(const ExperimentConfig& config, const TrialReport& report);

}  // namespace vdc
