#include "vdc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace vdc {

const char* to_string(FailureStage s) {
  switch (s) {
    case FailureStage::kNone: return "none";
    case FailureStage::kAlignment: return "alignment";
    case FailureStage::kCut: return "cut";
    case FailureStage::kInner: return "inner";
    case FailureStage::kRs: return "rs";
  }
  return "?";
}

namespace {

struct RecursiveGroundTruth {
  std::vector<FieldElement> symbols;  // true RS codeword symbols
};

// Attributes a failed recursive trial to its first broken stage, using the
// trace plus per-bit provenance from the instrumented channel.
FailureStage attribute_failure(const RecursiveCodeConfig& cfg, const DecodeTrace& trace,
                               const TransmitTrace& channel_trace,
                               const RecursiveGroundTruth& truth) {
  for (const auto& c : trace.centers) {
    if (c.status == CenterStatus::kFailed) return FailureStage::kAlignment;
  }
  // cut-underestimation: any segment bit that originated inside a delimiter
  const std::size_t block = cfg.inner_n() + 4 * cfg.alpha() + 2 * cfg.beta();
  const std::size_t n = cfg.inner_n();
  const std::size_t out_len = channel_trace.output.size();
  std::int64_t prev_right = 0;
  for (const auto& c : trace.centers) {
    std::size_t lo = static_cast<std::size_t>(std::clamp<std::int64_t>(prev_right, 0, static_cast<std::int64_t>(out_len)));
    std::size_t hi = static_cast<std::size_t>(std::clamp<std::int64_t>(c.left_cut, 0, static_cast<std::int64_t>(out_len)));
    for (std::size_t idx = lo; idx < hi; ++idx) {
      std::size_t src = channel_trace.source[idx];
      if (src % block >= n) return FailureStage::kCut;
    }
    prev_right = c.right_cut;
  }
  // inner: a decoded symbol differs from the transmitted one
  const FieldContext& field = cfg.field();
  for (std::size_t i = 0; i < trace.inner_decoded.size(); ++i) {
    if (field.from_bits(trace.inner_decoded[i]) != truth.symbols[i]) return FailureStage::kInner;
  }
  return FailureStage::kRs;
}

}  // namespace

TrialReport run_dfp_campaign(const ExperimentConfig& config) {
  if (config.trials == 0) throw std::invalid_argument("run_dfp_campaign: trials == 0");
  if (!config.code && !config.recursive) {
    throw std::invalid_argument("run_dfp_campaign: no code configured");
  }
  const auto t0 = std::chrono::steady_clock::now();

  const bool recursive = config.recursive != nullptr;
  const std::size_t k = recursive ? config.recursive->message_bits()
                                  : config.code->message_bits();
  const bool round_robin = !recursive && k <= 8;
  const std::size_t msg_count = round_robin ? (std::size_t{1} << k) : 0;

  TrialReport report;
  report.rows.resize(config.trials);

  auto run_trial = [&](std::uint64_t trial) {
    RngSpec base{config.master_seed, 0};
    CounterRng trial_rng(base.derive(trial));
    BitString message;
    if (round_robin) {
      message = BitString::from_uint(trial % msg_count, k);
    } else {
      message.reserve(k);
      for (std::size_t i = 0; i < k; ++i) {
        message.push_back(static_cast<std::uint8_t>(trial_rng.next_u64() & 1u));
      }
    }

    TrialRow row;
    row.trial = trial;
    auto packed = pack_bits(message);
    row.message_hash = fnv1a64(packed);

    if (recursive) {
      const RecursiveCodeConfig& cfg = *config.recursive;
      BitString encoded = recursive_encode(cfg, message);
      TransmitTrace channel_trace = transmit_traced(config.channel, encoded, trial_rng);
      row.n_received = channel_trace.output.size();
      RecursiveDecodeResult r = recursive_decode(cfg, channel_trace.output);
      row.ok = r.message.has_value() && *r.message == message;
      if (!row.ok) {
        RecursiveGroundTruth truth;
        truth.symbols = cfg.rs().encode(symbols_from_bits(cfg.field(), message));
        row.stage = attribute_failure(cfg, r.trace, channel_trace, truth);
      }
    } else {
      BitString encoded = config.code->encode(message);
      BitString received = transmit(config.channel, encoded, trial_rng);
      row.n_received = received.size();
      InnerDecodeResult r = config.code->decode(config.channel, received);
      row.ok = r.status == InnerDecodeStatus::kOk && r.message == message;
      if (!row.ok) row.stage = FailureStage::kInner;
    }
    report.rows[trial] = row;
  };

  const unsigned workers = std::max(1u, config.workers);
  if (workers == 1) {
    for (std::uint64_t t = 0; t < config.trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned wi = 0; wi < workers; ++wi) {
      pool.emplace_back([&, wi] {
        for (std::uint64_t t = wi; t < config.trials; t += workers) run_trial(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  // aggregate (deterministic: from rows, in trial order)
  std::vector<std::uint64_t> per_msg_trials(round_robin ? msg_count : 1, 0);
  std::vector<std::uint64_t> per_msg_failures(round_robin ? msg_count : 1, 0);
  for (const auto& row : report.rows) {
    report.total_trials += 1;
    std::size_t slot = round_robin ? row.trial % msg_count : 0;
    per_msg_trials[slot] += 1;
    if (!row.ok) {
      report.total_failures += 1;
      per_msg_failures[slot] += 1;
      report.stage_counts[static_cast<std::size_t>(row.stage)] += 1;
    }
  }
  report.per_message = round_robin;
  std::size_t worst = 0;
  double worst_rate = -1.0;
  for (std::size_t i = 0; i < per_msg_trials.size(); ++i) {
    if (per_msg_trials[i] == 0) continue;
    double rate = static_cast<double>(per_msg_failures[i]) / static_cast<double>(per_msg_trials[i]);
    if (rate > worst_rate) {
      worst_rate = rate;
      worst = i;
    }
  }
  report.est_trials = per_msg_trials[worst];
  report.est_failures = per_msg_failures[worst];
  report.estimate = worst_rate;
  report.ci95 = stats::clopper_pearson(report.est_failures, report.est_trials, 0.95);

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

void write_trial_csv(const TrialReport& report, std::ostream& out) {
  out << "trial,message_hash,outcome,stage,n_received\n";
  char hex[17];
  for (const auto& row : report.rows) {
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(row.message_hash));
    out << row.trial << ',' << hex << ',' << (row.ok ? "ok" : "fail") << ','
        << to_string(row.stage) << ',' << row.n_received << '\n';
  }
}

std::string report_summary_json(const ExperimentConfig& config, const TrialReport& report) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["channel"] = {{"kind", config.channel.name()}, {"param", config.channel.param()}};
  j["trials"] = report.total_trials;
  j["failures"] = report.total_failures;
  j["dfp_estimate"] = report.estimate;
  j["ci95"] = {report.ci95.lo, report.ci95.hi};
  j["estimator"] = report.per_message ? "worst_message" : "pooled";
  j["estimate_trials"] = report.est_trials;
  j["estimate_failures"] = report.est_failures;
  nlohmann::json stages;
  for (std::size_t i = 0; i < report.stage_counts.size(); ++i) {
    if (i == 0) continue;  // kNone
    stages[to_string(static_cast<FailureStage>(i))] = report.stage_counts[i];
  }
  j["stage_counts"] = stages;
  j["master_seed"] = config.master_seed;
  return j.dump(2) + "\n";
}

}  // namespace vdc
