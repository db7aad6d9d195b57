#include "vdc/recursive.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "vdc/bounds.hpp"

namespace vdc {

namespace {

std::int64_t llround_checked(double x) { return static_cast<std::int64_t>(std::llround(x)); }

std::size_t clamp_index(std::int64_t v, std::size_t len) {
  if (v < 0) return 0;
  std::size_t cap = len == 0 ? 0 : len - 1;
  return std::min(static_cast<std::size_t>(v), cap);
}

std::size_t clamp_cut(std::int64_t v, std::size_t len) {
  if (v < 0) return 0;
  return std::min(static_cast<std::size_t>(v), len);
}

}  // namespace

RecursiveCodeConfig::RecursiveCodeConfig(std::shared_ptr<const InnerCode> inner, std::size_t t,
                                         std::size_t d, ChannelModel channel)
    : inner_(std::move(inner)), t_(t), d_(d), channel_(channel) {
  if (!inner_) throw std::invalid_argument("RecursiveCodeConfig: null inner code");
  const std::size_t k = inner_->message_bits();
  const double delta = inner_->dfp();
  if (k < 2) throw std::invalid_argument("RecursiveCodeConfig: inner k must be >= 2");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("RecursiveCodeConfig: inner delta must be in (0,1)");
  }
  if (t_ == 0) throw std::invalid_argument("RecursiveCodeConfig: t must be positive");
  if (k < 64) {
    std::uint64_t limit = (std::uint64_t{1} << (k - 1)) - k;  // t < 2^(k-1) - k
    if (t_ >= limit) throw std::invalid_argument("RecursiveCodeConfig: t >= 2^(k-1) - k");
  }
  const double s = channel_.survival_factor();
  alpha_ = static_cast<std::size_t>(
      std::ceil(bounds::Constants::face_c * std::log(1.0 / delta) / s));
  if (alpha_ < 1) alpha_ = 1;
  const double beta_raw = std::ceil(static_cast<double>(d_) / (2.0 * s));
  const double beta_val = beta_raw - 2.0 * static_cast<double>(alpha_);
  if (beta_val < 1.0) {
    throw std::invalid_argument(
        "RecursiveCodeConfig: beta < 1 (d too small for this delta/channel)");
  }
  beta_ = static_cast<std::size_t>(beta_val);
  f_estimate_ = static_cast<std::size_t>(std::ceil(2.0 * s * static_cast<double>(alpha_)));

  if (k > 256) {
    throw std::invalid_argument("RecursiveCodeConfig: GF(2^k) beyond k=256 is out of scope");
  }
  auto field = std::make_shared<const FieldContext>(static_cast<unsigned>(k));
  rs_ = std::make_shared<const RsCode>(field, k, t_);
}

std::size_t RecursiveCodeConfig::block_bits() const {
  return outer_blocks() * (inner_n() + 4 * alpha_ + 2 * beta_);
}

std::vector<CenterRecord> locate_positioning_centers(const RecursiveCodeConfig& cfg,
                                                     const BitString& w) {
  const double s = cfg.channel().survival_factor();
  const double n = static_cast<double>(cfg.inner_n());
  const double a = static_cast<double>(cfg.alpha());
  const double b = static_cast<double>(cfg.beta());
  const std::size_t blocks = cfg.outer_blocks();

  std::vector<CenterRecord> records(blocks);
  std::int64_t prev_center = 0;
  for (std::size_t i = 0; i < blocks; ++i) {
    std::int64_t estimate =
        (i == 0) ? llround_checked(s * (n + 2.0 * a + b))
                 : prev_center + llround_checked(s * (n + 4.0 * a + 2.0 * b));
    CenterRecord& rec = records[i];
    rec.estimate = estimate;
    std::size_t start = clamp_index(estimate, w.size());
    std::optional<std::size_t> aligned;
    if (!w.empty()) aligned = align_valley(w, start);
    if (aligned) {
      rec.aligned = *aligned;
      rec.status = CenterStatus::kOk;
    } else {
      rec.aligned = start;  // fall back to the clamped estimate, keep the chain alive
      rec.status = CenterStatus::kFailed;
    }
    prev_center = static_cast<std::int64_t>(rec.aligned);
  }
  return records;
}

std::vector<BitString> cut_inner_segments(const RecursiveCodeConfig& cfg, const BitString& w,
                                          std::vector<CenterRecord>& centers) {
  if (centers.size() != cfg.outer_blocks()) {
    throw std::invalid_argument("cut_inner_segments: wrong number of centers");
  }
  const double s = cfg.channel().survival_factor();
  const std::int64_t f = static_cast<std::int64_t>(cfg.f_estimate());
  const std::int64_t fallback =
      llround_checked(s * (2.0 * static_cast<double>(cfg.alpha()) + static_cast<double>(cfg.beta())));
  const std::int64_t len = static_cast<std::int64_t>(w.size());

  std::vector<BitString> segments;
  segments.reserve(centers.size());
  std::int64_t prev_right_cut = 0;
  for (auto& rec : centers) {
    const std::int64_t center = static_cast<std::int64_t>(rec.aligned);

    // left partitioning center: through the 0s, through the 1-run, stop at a 0
    std::int64_t j = std::min(center, len - 1);
    while (j >= 0 && w[static_cast<std::size_t>(j)] == 0) --j;
    while (j >= 0 && w[static_cast<std::size_t>(j)] == 1) --j;
    rec.left_walk_ok = j >= 0 && len > 0;
    rec.left_cut = rec.left_walk_ok ? j - f + 1 : center - fallback;

    // right partitioning center: through the 1s, through the 0-run, stop at the
    // last 0 before the next 1 (end of string counts as the terminator)
    j = center + 1;
    while (j < len && w[static_cast<std::size_t>(j)] == 1) ++j;
    while (j < len && w[static_cast<std::size_t>(j)] == 0) ++j;
    rec.right_walk_ok =
        j - 1 > center && j - 1 < len && w[static_cast<std::size_t>(j - 1)] == 0;
    rec.right_cut = rec.right_walk_ok ? (j - 1) + f + 1 : center + fallback;

    std::size_t lo = clamp_cut(prev_right_cut, w.size());
    std::size_t hi = clamp_cut(rec.left_cut, w.size());
    segments.push_back(hi > lo ? w.slice(lo, hi) : BitString());
    prev_right_cut = rec.right_cut;
  }
  return segments;
}

BitString recursive_encode(const RecursiveCodeConfig& cfg, const BitString& message) {
  if (message.size() != cfg.message_bits()) {
    throw std::invalid_argument("recursive_encode: message must be k^2 bits");
  }
  const FieldContext& field = cfg.field();
  std::vector<FieldElement> symbols = symbols_from_bits(field, message);
  std::vector<FieldElement> encoded = cfg.rs().encode(symbols);

  const BitString delim = render_delimiter(cfg.delimiter());
  BitString out;
  out.reserve(cfg.block_bits());
  for (const FieldElement& sym : encoded) {
    BitString sym_bits = bits_from_symbols(field, {sym});
    out.append(cfg.inner().encode(sym_bits));
    out.append(delim);
  }
  return out;
}

RecursiveDecodeResult recursive_decode(const RecursiveCodeConfig& cfg, const BitString& w) {
  RecursiveDecodeResult result;
  DecodeTrace& trace = result.trace;
  trace.centers = locate_positioning_centers(cfg, w);
  std::vector<BitString> segments = cut_inner_segments(cfg, w, trace.centers);

  const FieldContext& field = cfg.field();
  const std::size_t k = cfg.inner_k();
  std::vector<FieldElement> symbols;
  symbols.reserve(segments.size());
  for (const BitString& seg : segments) {
    InnerDecodeResult r = cfg.inner().decode(cfg.channel(), seg);
    if (r.status == InnerDecodeStatus::kOk && r.message.size() == k) {
      trace.inner_status.push_back(InnerDecodeStatus::kOk);
      trace.inner_decoded.push_back(r.message);
      symbols.push_back(field.from_bits(r.message));
    } else {
      // inner failures become zero symbols for the outer code to absorb
      trace.inner_status.push_back(r.status == InnerDecodeStatus::kOk ? InnerDecodeStatus::kFailed
                                                                      : r.status);
      trace.inner_decoded.push_back(BitString::zeros(k));
      symbols.push_back(field.zero());
    }
  }

  auto decoded = cfg.rs().decode(symbols);
  trace.rs_ok = decoded.has_value();
  if (decoded) {
    result.message = bits_from_symbols(field, *decoded);
  }
  return result;
}

RecursiveCode::RecursiveCode(RecursiveCodeConfig cfg, double delta,
                             std::optional<std::size_t> receive_cap)
    : cfg_(std::move(cfg)), delta_(delta), receive_cap_(receive_cap) {
  if (!(delta_ > 0.0 && delta_ < 1.0)) {
    throw std::invalid_argument("RecursiveCode: delta must be in (0,1)");
  }
  if (cfg_.channel().kind() == ChannelKind::kPrc && !receive_cap_) {
    receive_cap_ = prc_receive_cap(cfg_.channel().param(), cfg_.block_bits(), delta_);
  }
}

BitString RecursiveCode::encode(const BitString& message) const {
  return recursive_encode(cfg_, message);
}

InnerDecodeResult RecursiveCode::decode(const ChannelModel& channel,
                                        const BitString& received) const {
  if (channel.kind() == ChannelKind::kBdc) {
    if (received.size() > block_bits()) return {InnerDecodeStatus::kLengthExceeded, {}};
  } else if (receive_cap_ && received.size() > *receive_cap_) {
    return {InnerDecodeStatus::kLengthExceeded, {}};
  }
  RecursiveDecodeResult r = recursive_decode(cfg_, received);
  if (!r.message) return {InnerDecodeStatus::kFailed, {}};
  return {InnerDecodeStatus::kOk, std::move(*r.message)};
}

std::uint64_t ceil_two_thirds_power(std::uint64_t k) {
  long double approx = std::pow(static_cast<long double>(k), 2.0L / 3.0L);
  std::uint64_t t = static_cast<std::uint64_t>(std::llroundl(approx));
  auto cube_ge = [](std::uint64_t v, std::uint64_t kk) {
    return static_cast<unsigned __int128>(v) * v * v >=
           static_cast<unsigned __int128>(kk) * kk;
  };
  while (t > 0 && cube_ge(t - 1, k)) --t;
  while (!cube_ge(t, k)) ++t;
  return t;
}

std::vector<PlannedLevel> plan_schedule(std::uint64_t k_base, double delta_base,
                                        const ChannelModel& channel, int levels,
                                        FirstStepRule first_step) {
  if (k_base < 2) throw std::invalid_argument("plan_schedule: k_base must be >= 2");
  if (levels < 1) throw std::invalid_argument("plan_schedule: levels must be >= 1");
  if (!(delta_base > 0.0 && delta_base < 1.0)) {
    throw std::invalid_argument("plan_schedule: delta_base out of (0,1)");
  }
  const double s = channel.survival_factor();

  std::vector<PlannedLevel> plan;
  plan.reserve(static_cast<std::size_t>(levels));
  std::uint64_t k_exact = k_base;
  double k = static_cast<double>(k_base);
  // deep levels underflow delta itself, so the schedule runs on ln(delta)
  double log_delta = std::log(delta_base);
  double n_in = k / s;  // capacity-floor block length for the assumed base code

  for (int level = 0; level < levels; ++level) {
    PlannedLevel lv;
    lv.level = level;
    lv.k = k;
    lv.k_exact = k_exact;
    lv.log_delta_in = log_delta;
    lv.delta_in = std::exp(log_delta);
    lv.n_in = n_in;

    if (k_exact != 0) {
      lv.d = static_cast<double>(ceil_two_thirds_power(k_exact));
    } else {
      lv.d = std::ceil(std::pow(k, 2.0 / 3.0));
    }
    if (level == 0 && first_step == FirstStepRule::kBaseImprovement) {
      lv.t = std::ceil(std::exp(log_delta * bounds::Constants::c1 / 2.0) * k);
    } else {
      lv.t = lv.d;
    }

    double alpha = std::ceil(bounds::Constants::face_c * (-log_delta) / s);
    if (alpha < 1.0) alpha = 1.0;
    double beta = std::ceil(lv.d / (2.0 * s)) - 2.0 * alpha;
    if (beta < 1.0) {
      throw std::invalid_argument("plan_schedule: beta < 1 at level " + std::to_string(level));
    }
    lv.alpha = alpha;
    lv.beta = beta;
    lv.f_estimate = std::ceil(2.0 * s * alpha);
    lv.n_out = (k + 2.0 * lv.t) * (n_in + 4.0 * alpha + 2.0 * beta);

    if (k_exact != 0 && lv.t <= 1e6 && k_exact + 2 * static_cast<std::uint64_t>(lv.t) <= 1000000 &&
        lv.delta_in > 0.0) {
      lv.dfp_bound = bounds::recursive_dfp_bound(lv.delta_in, k_exact,
                                                 static_cast<std::uint64_t>(lv.t),
                                                 static_cast<std::uint64_t>(lv.d));
    } else {
      lv.dfp_bound = std::numeric_limits<double>::quiet_NaN();
    }
    plan.push_back(lv);

    // next level: k squares, delta follows the schedule assumption
    if (k_exact != 0 && k_exact <= 3037000499ull) {
      k_exact = k_exact * k_exact;
    } else {
      k_exact = 0;
    }
    k = k * k;
    log_delta = -(bounds::Constants::c2 / 2.0) * std::pow(k, 1.0 / 6.0);
    n_in = lv.n_out;
  }
  return plan;
}

// ---- JSON ----

namespace {

nlohmann::json channel_json(const ChannelModel& c) {
  return {{"kind", c.name()}, {"param", c.param()}};
}

ChannelModel channel_from_json(const nlohmann::json& j) {
  return ChannelModel::from_name(j.at("kind").get<std::string>(), j.at("param").get<double>());
}

}  // namespace

std::string DecodeTrace::to_json() const {
  nlohmann::json j;
  j["centers"] = nlohmann::json::array();
  for (const auto& c : centers) {
    j["centers"].push_back({{"estimate", c.estimate},
                            {"aligned", c.aligned},
                            {"status", c.status == CenterStatus::kOk ? "ok" : "failed"},
                            {"left_cut", c.left_cut},
                            {"right_cut", c.right_cut},
                            {"left_walk", c.left_walk_ok ? "ok" : "fallback"},
                            {"right_walk", c.right_walk_ok ? "ok" : "fallback"}});
  }
  j["inner"] = nlohmann::json::array();
  for (auto s : inner_status) {
    j["inner"].push_back(s == InnerDecodeStatus::kOk
                             ? "ok"
                             : (s == InnerDecodeStatus::kLengthExceeded ? "length_exceeded"
                                                                        : "failed"));
  }
  j["rs"] = rs_ok ? "ok" : "failed";
  return j.dump(2) + "\n";
}

RecursiveConfigSpec parse_recursive_config_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  RecursiveConfigSpec spec;
  if (j.contains("inner_fixture_path")) {
    spec.inner_fixture_path = j.at("inner_fixture_path").get<std::string>();
  }
  if (j.contains("inner")) {
    const auto& inner = j.at("inner");
    spec.inner_k = inner.at("k").get<std::size_t>();
    spec.inner_n = inner.at("n").get<std::size_t>();
    spec.inner_delta = inner.at("delta").get<double>();
    if (inner.contains("prc_cap")) spec.inner_prc_cap = inner.at("prc_cap").get<std::size_t>();
  }
  if (!spec.inner_fixture_path && !spec.inner_k) {
    throw std::invalid_argument("recursive config: need inner_fixture_path or inner{}");
  }
  spec.t = j.at("t").get<std::uint64_t>();
  spec.d = j.at("d").get<std::uint64_t>();
  spec.channel = channel_from_json(j.at("channel"));
  const auto& derived = j.at("derived");
  spec.alpha = derived.at("alpha").get<std::uint64_t>();
  spec.beta = derived.at("beta").get<std::uint64_t>();
  spec.f_estimate = derived.at("f_estimate").get<std::uint64_t>();
  spec.n_prime = derived.at("n_prime").get<std::uint64_t>();
  return spec;
}

std::string recursive_config_to_json(const RecursiveConfigSpec& spec) {
  nlohmann::json j;
  j["schema_version"] = 1;
  if (spec.inner_fixture_path) j["inner_fixture_path"] = *spec.inner_fixture_path;
  if (spec.inner_k) {
    nlohmann::json inner;
    inner["k"] = *spec.inner_k;
    inner["n"] = *spec.inner_n;
    inner["delta"] = *spec.inner_delta;
    if (spec.inner_prc_cap) inner["prc_cap"] = *spec.inner_prc_cap;
    j["inner"] = inner;
  }
  j["t"] = spec.t;
  j["d"] = spec.d;
  j["channel"] = channel_json(spec.channel);
  j["derived"] = {{"alpha", spec.alpha},
                  {"beta", spec.beta},
                  {"f_estimate", spec.f_estimate},
                  {"n_prime", spec.n_prime}};
  return j.dump(2) + "\n";
}

RecursiveConfigSpec describe_config(const RecursiveCodeConfig& cfg,
                                    const std::string& inner_fixture_path) {
  RecursiveConfigSpec spec;
  if (!inner_fixture_path.empty()) spec.inner_fixture_path = inner_fixture_path;
  spec.inner_k = cfg.inner_k();
  spec.inner_n = cfg.inner_n();
  spec.inner_delta = cfg.inner().dfp();
  spec.inner_prc_cap = cfg.inner().receive_cap();
  spec.t = cfg.t();
  spec.d = cfg.d();
  spec.channel = cfg.channel();
  spec.alpha = cfg.alpha();
  spec.beta = cfg.beta();
  spec.f_estimate = cfg.f_estimate();
  spec.n_prime = cfg.block_bits();
  return spec;
}

RecursiveConfigSpec describe_level(const PlannedLevel& lv, const ChannelModel& channel) {
  if (lv.k_exact == 0 || !(lv.delta_in > 0.0) || lv.n_out > 9e15) {
    throw std::invalid_argument("describe_level: level is not exactly representable");
  }
  RecursiveConfigSpec spec;
  spec.inner_k = static_cast<std::size_t>(lv.k_exact);
  spec.inner_n = static_cast<std::size_t>(std::llround(std::ceil(lv.n_in)));
  spec.inner_delta = lv.delta_in;
  spec.t = static_cast<std::uint64_t>(lv.t);
  spec.d = static_cast<std::uint64_t>(lv.d);
  spec.channel = channel;
  spec.alpha = static_cast<std::uint64_t>(lv.alpha);
  spec.beta = static_cast<std::uint64_t>(lv.beta);
  spec.f_estimate = static_cast<std::uint64_t>(lv.f_estimate);
  spec.n_prime = static_cast<std::uint64_t>(std::llround(std::ceil(lv.n_out)));
  return spec;
}

RecursiveCodeConfig load_recursive_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_recursive_config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  RecursiveConfigSpec spec = parse_recursive_config_json(ss.str());
  if (!spec.inner_fixture_path) {
    throw std::invalid_argument("load_recursive_config: config has no inner_fixture_path");
  }
  std::filesystem::path fixture(*spec.inner_fixture_path);
  if (fixture.is_relative()) {
    fixture = std::filesystem::path(path).parent_path() / fixture;
  }
  auto inner = std::make_shared<TableCode>(load_codebook(fixture.string()));
  RecursiveCodeConfig cfg(inner, spec.t, spec.d, spec.channel);
  if (cfg.alpha() != spec.alpha || cfg.beta() != spec.beta ||
      cfg.f_estimate() != spec.f_estimate || cfg.block_bits() != spec.n_prime) {
    throw std::invalid_argument("load_recursive_config: derived block disagrees with recomputation");
  }
  return cfg;
}

void save_recursive_config(const RecursiveCodeConfig& cfg, const std::string& inner_fixture_path,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("save_recursive_config: cannot open " + path);
  out << recursive_config_to_json(describe_config(cfg, inner_fixture_path));
}

std::string plan_to_json(const std::vector<PlannedLevel>& plan, const ChannelModel& channel,
                         FirstStepRule rule) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["channel"] = channel_json(channel);
  j["first_step"] = rule == FirstStepRule::kBaseImprovement ? "improve" : "schedule";
  j["levels"] = nlohmann::json::array();
  for (const auto& lv : plan) {
    nlohmann::json e;
    e["level"] = lv.level;
    e["k"] = lv.k;
    if (lv.k_exact != 0) e["k_exact"] = lv.k_exact;
    e["delta_in"] = lv.delta_in;
    e["log_delta_in"] = lv.log_delta_in;
    e["t"] = lv.t;
    e["d"] = lv.d;
    e["n_in"] = lv.n_in;
    e["n_out"] = lv.n_out;
    e["derived"] = {{"alpha", lv.alpha},
                    {"beta", lv.beta},
                    {"f_estimate", lv.f_estimate}};
    if (std::isnan(lv.dfp_bound)) {
      e["dfp_bound"] = nullptr;
    } else {
      e["dfp_bound"] = lv.dfp_bound;
    }
    // a realizable config block exists only while the level is exactly representable
    if (lv.k_exact != 0 && lv.delta_in > 0.0 && lv.n_out <= 9e15) {
      e["config"] = nlohmann::json::parse(recursive_config_to_json(describe_level(lv, channel)));
    }
    j["levels"].push_back(e);
  }
  return j.dump(2) + "\n";
}

}  // namespace vdc
