#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vdc/bitstring.hpp"
#include "vdc/channel.hpp"
#include "vdc/rng.hpp"
#include "vdc/stats.hpp"

namespace vdc {

enum class InnerDecodeStatus { kOk, kLengthExceeded, kFailed };

struct InnerDecodeResult {
  InnerDecodeStatus status = InnerDecodeStatus::kFailed;
  BitString message;  // valid when status == kOk
};

/// A code used per outer symbol: k message bits to n block bits, with a known
/// or measured DFP delta on a reference channel. Implementations: TableCode
/// (explicit codebook + MAP decoding) and RecursiveCode (one application of
/// the recursive step, enabling composition).
class InnerCode {
 public:
  virtual ~InnerCode() = default;
  virtual std::size_t message_bits() const = 0;
  virtual std::size_t block_bits() const = 0;
  virtual double dfp() const = 0;
  virtual ChannelModel reference_channel() const = 0;
  /// Maximum accepted received length (PRC codes only).
  virtual std::optional<std::size_t> receive_cap() const = 0;
  virtual BitString encode(const BitString& message) const = 0;
  virtual InnerDecodeResult decode(const ChannelModel& channel, const BitString& received) const = 0;
};

/// Explicit codebook of 2^k codewords (message order), decoded by maximum
/// likelihood under the channel passed to decode. Ties break toward the
/// smallest message value.
class TableCode final : public InnerCode {
 public:
  TableCode(std::vector<BitString> codewords, ChannelModel reference, double delta,
            std::optional<std::size_t> prc_cap = std::nullopt);

  std::size_t message_bits() const override { return k_; }
  std::size_t block_bits() const override { return n_; }
  double dfp() const override { return delta_; }
  ChannelModel reference_channel() const override { return reference_; }
  std::optional<std::size_t> receive_cap() const override { return prc_cap_; }
  BitString encode(const BitString& message) const override;
  InnerDecodeResult decode(const ChannelModel& channel, const BitString& received) const override;

  const std::vector<BitString>& codewords() const { return codewords_; }
  std::size_t message_count() const { return codewords_.size(); }

  /// Same codebook with a different measured delta / receive cap.
  TableCode with_delta(double delta, std::optional<std::size_t> prc_cap) const {
    return TableCode(codewords_, reference_, delta, prc_cap);
  }

 private:
  std::vector<BitString> codewords_;
  ChannelModel reference_;
  double delta_;
  std::optional<std::size_t> prc_cap_;
  std::size_t k_;
  std::size_t n_;
};

/// argmax over messages of the channel likelihood of `y`, ties to the
/// smallest message. kLengthExceeded when |y| > n (BDC) or |y| > cap (PRC).
InnerDecodeResult map_decode(const TableCode& code, const ChannelModel& channel,
                             const BitString& y);

/// Exact per-message failure probabilities of the MAP decoder. Guards:
/// BDC needs n <= 16; PRC needs n <= 8 and cap <= 20. For PRC the mass of
/// outputs longer than the cap counts as failure.
std::vector<double> exact_dfp_per_message(const TableCode& code, const ChannelModel& channel);

/// max over messages of the above.
double exact_dfp(const TableCode& code, const ChannelModel& channel);

struct DfpEstimate {
  double estimate = 0.0;       // max-over-messages rate (round-robin) or pooled rate
  stats::Interval ci95;        // Clopper-Pearson interval of the counted trials
  std::uint64_t trials = 0;    // trials behind the estimate
  std::uint64_t failures = 0;  // failures behind the estimate
  std::uint64_t total_trials = 0;
  std::uint64_t total_failures = 0;
  bool per_message = false;    // true when the round-robin max estimator was used
};

/// Monte-Carlo DFP: trials are allocated round-robin over all messages when
/// 2^k <= 256 and the estimate/interval belong to the empirically worst
/// message (matching the worst-case-message DFP definition); otherwise
/// messages are sampled uniformly and the pooled rate is reported.
DfpEstimate monte_carlo_dfp(const InnerCode& code, const ChannelModel& channel,
                            std::uint64_t trials, RngSpec rng);

enum class SearchStrategy { kExhaustive, kRandom };

struct SearchSpec {
  explicit SearchSpec(ChannelModel ch) : channel(ch) {}

  ChannelModel channel;
  std::size_t k = 1;
  std::size_t n = 1;
  double target_delta = 0.1;
  SearchStrategy strategy = SearchStrategy::kExhaustive;
  std::uint64_t budget = 1000;
  RngSpec rng;
  std::uint64_t mc_trials = 2000;  // used when the exact guard does not apply
};

/// Searches codebooks for one with measured DFP <= target_delta.
/// Exhaustive: lexicographic combinations of 2^k codewords out of 2^n,
/// message i mapped to the i-th smallest; first hit wins; requires the
/// codebook count to fit the budget. Random: budget samples, best hit wins.
/// For PRC the receive cap is derived from the target per the tail rule
/// first. Returns nullopt when the budget is exhausted without a hit.
std::optional<TableCode> search_base_code(const SearchSpec& spec);

/// Codebook fixture JSON:
/// {k, n, channel:{kind,param}, codewords:[ascii...], delta_measured, prc_cap?}
TableCode load_codebook(const std::string& path);
void save_codebook(const TableCode& code, const std::string& path);
TableCode codebook_from_json_text(const std::string& text);
std::string codebook_to_json_text(const TableCode& code);

}  // namespace vdc
