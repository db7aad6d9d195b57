#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vdc/channel.hpp"
#include "vdc/gf2m.hpp"
#include "vdc/inner_code.hpp"
#include "vdc/reed_solomon.hpp"
#include "vdc/valley.hpp"

namespace vdc {

/// One application of the recursive step: k^2 message bits are split into k
/// symbols of GF(2^k), Reed-Solomon encoded to k+2t symbols, each symbol is
/// inner-encoded to n bits, and a Delimiter(alpha, beta) is appended to every
/// inner codeword.
///
/// Derived quantities (s = survival factor of the channel):
///   alpha      = ceil(C * ln(1/delta) / s),  C = 4/33
///   beta       = ceil(d / (2s)) - 2*alpha    (config rejected when beta < 1)
///   f_estimate = ceil(2 * s * alpha)
///   n'         = (k+2t) * (n + 4*alpha + 2*beta)
class RecursiveCodeConfig {
 public:
  RecursiveCodeConfig(std::shared_ptr<const InnerCode> inner, std::size_t t, std::size_t d,
                      ChannelModel channel);

  const InnerCode& inner() const { return *inner_; }
  std::shared_ptr<const InnerCode> inner_ptr() const { return inner_; }
  std::size_t t() const { return t_; }
  std::size_t d() const { return d_; }
  const ChannelModel& channel() const { return channel_; }

  std::size_t alpha() const { return alpha_; }
  std::size_t beta() const { return beta_; }
  std::size_t f_estimate() const { return f_estimate_; }
  DelimiterParams delimiter() const { return {alpha_, beta_}; }

  std::size_t inner_k() const { return inner_->message_bits(); }
  std::size_t inner_n() const { return inner_->block_bits(); }
  std::size_t outer_blocks() const { return inner_k() + 2 * t_; }   // k + 2t
  std::size_t message_bits() const { return inner_k() * inner_k(); }
  std::size_t block_bits() const;                                   // n'

  const RsCode& rs() const { return *rs_; }
  const FieldContext& field() const { return rs_->field(); }

 private:
  std::shared_ptr<const InnerCode> inner_;
  std::size_t t_;
  std::size_t d_;
  ChannelModel channel_;
  std::size_t alpha_, beta_, f_estimate_;
  std::shared_ptr<const RsCode> rs_;
};

enum class CenterStatus { kOk, kFailed };

struct CenterRecord {
  std::int64_t estimate = 0;   // G_i before clamping
  std::size_t aligned = 0;     // L_i (the clamped estimate when alignment failed)
  CenterStatus status = CenterStatus::kFailed;
  std::int64_t left_cut = 0;   // raw cut positions; clamped to [0, |w|] at use
  std::int64_t right_cut = 0;
  bool left_walk_ok = false;
  bool right_walk_ok = false;
};

struct DecodeTrace {
  std::vector<CenterRecord> centers;              // one per delimiter, k+2t total
  std::vector<InnerDecodeStatus> inner_status;    // one per outer symbol
  std::vector<BitString> inner_decoded;           // k bits each (zero-filled on failure)
  bool rs_ok = false;

  std::string to_json() const;
};

/// Serial positioning-string chase: G_1 = round(s*(n+2a+b)), then
/// G_i = L_{i-1} + round(s*(n+4a+2b)); L_i = align_valley at the clamped
/// estimate. Alignment failures keep the chain alive by substituting the
/// clamped estimate and are recorded, never thrown.
std::vector<CenterRecord> locate_positioning_centers(const RecursiveCodeConfig& cfg,
                                                     const BitString& w);

/// From each positioning center, walks out to the two partitioning-valley
/// centers and cuts f_estimate past them: segment i spans
/// [right_cut_{i-1}, left_cut_i) with left_cut = P_L - f + 1 and
/// right_cut = P_R + f + 1. Walk failures fall back to cutting at
/// L_i -/+ round(s*(2a+b)). Negative-length segments come back empty.
/// Fills the cut fields of `centers`.
std::vector<BitString> cut_inner_segments(const RecursiveCodeConfig& cfg, const BitString& w,
                                          std::vector<CenterRecord>& centers);

BitString recursive_encode(const RecursiveCodeConfig& cfg, const BitString& message);

struct RecursiveDecodeResult {
  std::optional<BitString> message;  // k^2 bits; nullopt = Reed-Solomon failure
  DecodeTrace trace;
};

RecursiveDecodeResult recursive_decode(const RecursiveCodeConfig& cfg, const BitString& w);

/// Adapter so one recursive application can serve as the inner code of the
/// next level (composition).
class RecursiveCode final : public InnerCode {
 public:
  RecursiveCode(RecursiveCodeConfig cfg, double delta,
                std::optional<std::size_t> receive_cap = std::nullopt);

  std::size_t message_bits() const override { return cfg_.message_bits(); }
  std::size_t block_bits() const override { return cfg_.block_bits(); }
  double dfp() const override { return delta_; }
  ChannelModel reference_channel() const override { return cfg_.channel(); }
  std::optional<std::size_t> receive_cap() const override { return receive_cap_; }
  BitString encode(const BitString& message) const override;
  InnerDecodeResult decode(const ChannelModel& channel, const BitString& received) const override;

  const RecursiveCodeConfig& config() const { return cfg_; }

 private:
  RecursiveCodeConfig cfg_;
  double delta_;
  std::optional<std::size_t> receive_cap_;
};

// ---- schedule planning ----

enum class FirstStepRule {
  kBaseImprovement,  // level 0 uses t0 = ceil(delta0^(c1/2) * k0), d0 = ceil(k0^(2/3))
  kSchedule,         // every level uses t = d = ceil(k^(2/3))
};

/// One step of the recursion schedule. Quantities are exact integers while
/// they fit 64 bits (k_exact != 0); beyond that the step exists only as
/// floating-point reporting, since such levels are far outside anything
/// runnable anyway.
struct PlannedLevel {
  int level = 0;
  double k = 0;                  // input message length of this step
  std::uint64_t k_exact = 0;     // k when it fits u64, else 0
  double delta_in = 0;           // inner DFP assumed at this step (0 when it underflows)
  double log_delta_in = 0;       // ln of the same; deep levels only have this
  double t = 0, d = 0;
  double alpha = 0, beta = 0, f_estimate = 0;
  double n_in = 0;               // assumed inner block length (capacity floor at level 0)
  double n_out = 0;              // (k+2t)(n_in + 4a + 2b)
  double dfp_bound = 0;          // step bound, NaN when outside the exact-tail guard

  bool operator==(const PlannedLevel&) const = default;
};

/// Emits `levels` recursive steps starting at message length k_base. Level 0
/// consumes delta_base; later levels assume the schedule value
/// delta_k = exp(-(c2/2) k^(1/6)) and report the rigorous step bound
/// alongside. Throws (naming the level) when a level's beta comes out < 1.
std::vector<PlannedLevel> plan_schedule(std::uint64_t k_base, double delta_base,
                                        const ChannelModel& channel, int levels,
                                        FirstStepRule first_step = FirstStepRule::kBaseImprovement);

/// ceil(k^(2/3)) computed exactly (smallest t with t^3 >= k^2).
std::uint64_t ceil_two_thirds_power(std::uint64_t k);

// ---- config / plan JSON ----

/// Parsed form of the RecursiveCodeConfig JSON schema:
/// {inner_fixture_path | inner:{k,n,delta[,prc_cap]}, t, d, channel,
///  derived:{alpha,beta,f_estimate,n_prime}}
struct RecursiveConfigSpec {
  std::optional<std::string> inner_fixture_path;
  std::optional<std::size_t> inner_k, inner_n;
  std::optional<double> inner_delta;
  std::optional<std::size_t> inner_prc_cap;
  std::uint64_t t = 0, d = 0;
  ChannelModel channel{ChannelKind::kBdc, 0.5};
  std::uint64_t alpha = 0, beta = 0, f_estimate = 0, n_prime = 0;

  bool operator==(const RecursiveConfigSpec&) const = default;
};

RecursiveConfigSpec parse_recursive_config_json(const std::string& text);
std::string recursive_config_to_json(const RecursiveConfigSpec& spec);
RecursiveConfigSpec describe_config(const RecursiveCodeConfig& cfg,
                                    const std::string& inner_fixture_path);
RecursiveConfigSpec describe_level(const PlannedLevel& lv, const ChannelModel& channel);

/// Loads a config whose JSON names an inner fixture (path resolved relative
/// to the config file). Verifies the stored derived block against the
/// recomputed values.
RecursiveCodeConfig load_recursive_config(const std::string& path);
void save_recursive_config(const RecursiveCodeConfig& cfg, const std::string& inner_fixture_path,
                           const std::string& path);

std::string plan_to_json(const std::vector<PlannedLevel>& plan, const ChannelModel& channel,
                         FirstStepRule rule);

}  // namespace vdc
