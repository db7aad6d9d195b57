#include "vdc/inner_code.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace vdc {

namespace {

double likelihood_for(const ChannelModel& c, const BitString& x, const BitString& y) {
  if (c.kind() == ChannelKind::kBdc) return bdc_likelihood(x, y, c.param());
  return prc_likelihood(x, y, c.param());
}

std::size_t admissible_length(const TableCode& code, const ChannelModel& channel) {
  if (channel.kind() == ChannelKind::kBdc) return code.block_bits();
  if (!code.receive_cap()) {
    throw std::invalid_argument("map_decode: PRC decoding requires a receive cap");
  }
  return *code.receive_cap();
}

}  // namespace

TableCode::TableCode(std::vector<BitString> codewords, ChannelModel reference, double delta,
                     std::optional<std::size_t> prc_cap)
    : codewords_(std::move(codewords)),
      reference_(reference),
      delta_(delta),
      prc_cap_(prc_cap) {
  const std::size_t count = codewords_.size();
  if (count < 2 || (count & (count - 1)) != 0) {
    throw std::invalid_argument("TableCode: codeword count must be a power of two >= 2");
  }
  k_ = 0;
  while ((std::size_t{1} << k_) < count) ++k_;
  n_ = codewords_[0].size();
  if (n_ == 0 || k_ > n_) throw std::invalid_argument("TableCode: need 0 < k <= n");
  std::set<std::vector<std::uint8_t>> distinct;
  for (const auto& c : codewords_) {
    if (c.size() != n_) throw std::invalid_argument("TableCode: ragged codeword lengths");
    distinct.insert(c.bits());
  }
  if (distinct.size() != count) throw std::invalid_argument("TableCode: encoder not injective");
  if (reference_.kind() == ChannelKind::kPrc && !prc_cap_) {
    throw std::invalid_argument("TableCode: PRC reference channel requires a receive cap");
  }
}

BitString TableCode::encode(const BitString& message) const {
  if (message.size() != k_) throw std::invalid_argument("TableCode::encode: wrong message length");
  return codewords_[message.to_uint()];
}

InnerDecodeResult TableCode::decode(const ChannelModel& channel, const BitString& received) const {
  return map_decode(*this, channel, received);
}

InnerDecodeResult map_decode(const TableCode& code, const ChannelModel& channel,
                             const BitString& y) {
  if (y.size() > admissible_length(code, channel)) {
    return {InnerDecodeStatus::kLengthExceeded, {}};
  }
  double best = -1.0;
  std::size_t best_msg = 0;
  for (std::size_t msg = 0; msg < code.message_count(); ++msg) {
    double lik = likelihood_for(channel, code.codewords()[msg], y);
    if (lik > best) {  // strict: ties keep the smallest message
      best = lik;
      best_msg = msg;
    }
  }
  return {InnerDecodeStatus::kOk, BitString::from_uint(best_msg, code.message_bits())};
}

namespace {

// distinct subsequences of x, packed as (len << 32) | bits; |x| <= 16
std::vector<std::uint64_t> distinct_subsequences(const BitString& x) {
  const std::size_t n = x.size();
  const std::uint64_t xbits = x.to_uint();
  std::unordered_set<std::uint64_t> seen;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    std::uint64_t bits = 0;
    std::uint64_t len = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1ull) {
        bits |= ((xbits >> i) & 1ull) << len;
        ++len;
      }
    }
    seen.insert((len << 32) | bits);
  }
  return {seen.begin(), seen.end()};
}

BitString unpack_key(std::uint64_t key) {
  return BitString::from_uint(key & 0xffffffffull, key >> 32);
}

// distinct PRC outputs of x with total length <= cap
std::vector<std::uint64_t> distinct_prc_outputs(const BitString& x, std::size_t cap) {
  std::unordered_set<std::uint64_t> seen;
  // DFS over per-bit repeat counts
  struct Frame {
    std::size_t i;
    std::uint64_t bits;
    std::uint64_t len;
  };
  std::vector<Frame> stack{{0, 0, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    if (f.i == x.size()) {
      seen.insert((f.len << 32) | f.bits);
      continue;
    }
    const std::uint64_t b = x[f.i];
    std::uint64_t bits = f.bits;
    for (std::uint64_t r = 0; f.len + r <= cap; ++r) {
      if (r > 0) bits |= b << (f.len + r - 1);
      stack.push_back({f.i + 1, bits, f.len + r});
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace

std::vector<double> exact_dfp_per_message(const TableCode& code, const ChannelModel& channel) {
  const std::size_t n = code.block_bits();
  if (channel.kind() == ChannelKind::kBdc) {
    if (n > 16) throw std::invalid_argument("exact_dfp: BDC guard n <= 16 exceeded");
  } else {
    if (n > 8) throw std::invalid_argument("exact_dfp: PRC guard n <= 8 exceeded");
    if (!code.receive_cap() || *code.receive_cap() > 20) {
      throw std::invalid_argument("exact_dfp: PRC guard cap <= 20 exceeded");
    }
  }

  std::unordered_map<std::uint64_t, std::size_t> decode_memo;
  auto decode_key = [&](std::uint64_t key) {
    auto it = decode_memo.find(key);
    if (it != decode_memo.end()) return it->second;
    InnerDecodeResult r = map_decode(code, channel, unpack_key(key));
    std::size_t msg = r.message.to_uint();
    decode_memo.emplace(key, msg);
    return msg;
  };

  std::vector<double> fail(code.message_count(), 0.0);
  for (std::size_t msg = 0; msg < code.message_count(); ++msg) {
    const BitString& x = code.codewords()[msg];
    if (channel.kind() == ChannelKind::kBdc) {
      for (std::uint64_t key : distinct_subsequences(x)) {
        if (decode_key(key) != msg) {
          fail[msg] += bdc_likelihood(x, unpack_key(key), channel.param());
        }
      }
    } else {
      const std::size_t cap = *code.receive_cap();
      for (std::uint64_t key : distinct_prc_outputs(x, cap)) {
        if (decode_key(key) != msg) {
          fail[msg] += prc_likelihood(x, unpack_key(key), channel.param());
        }
      }
      // outputs longer than the cap count as failures
      fail[msg] += poisson_tail(channel.param() * static_cast<double>(n), cap + 1);
    }
  }
  return fail;
}

double exact_dfp(const TableCode& code, const ChannelModel& channel) {
  auto per_msg = exact_dfp_per_message(code, channel);
  return *std::max_element(per_msg.begin(), per_msg.end());
}

DfpEstimate monte_carlo_dfp(const InnerCode& code, const ChannelModel& channel,
                            std::uint64_t trials, RngSpec rng) {
  if (trials == 0) throw std::invalid_argument("monte_carlo_dfp: trials == 0");
  const std::size_t k = code.message_bits();
  const bool round_robin = k <= 8;
  const std::size_t msg_count = round_robin ? (std::size_t{1} << k) : 0;

  std::vector<std::uint64_t> per_msg_trials(round_robin ? msg_count : 1, 0);
  std::vector<std::uint64_t> per_msg_failures(round_robin ? msg_count : 1, 0);

  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    CounterRng trial_rng(rng.derive(trial));
    BitString message;
    std::size_t slot = 0;
    if (round_robin) {
      slot = static_cast<std::size_t>(trial % msg_count);
      message = BitString::from_uint(slot, k);
    } else {
      for (std::size_t i = 0; i < k; ++i) {
        message.push_back(static_cast<std::uint8_t>(trial_rng.next_u64() & 1u));
      }
    }
    BitString received = transmit(channel, code.encode(message), trial_rng);
    InnerDecodeResult r = code.decode(channel, received);
    bool ok = r.status == InnerDecodeStatus::kOk && r.message == message;
    per_msg_trials[slot] += 1;
    if (!ok) per_msg_failures[slot] += 1;
  }

  DfpEstimate est;
  est.per_message = round_robin;
  for (std::size_t i = 0; i < per_msg_trials.size(); ++i) {
    est.total_trials += per_msg_trials[i];
    est.total_failures += per_msg_failures[i];
  }
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
  est.trials = per_msg_trials[worst];
  est.failures = per_msg_failures[worst];
  est.estimate = worst_rate;
  est.ci95 = stats::clopper_pearson(est.failures, est.trials, 0.95);
  return est;
}

namespace {

double log_choose(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

TableCode evaluate_candidate(const SearchSpec& spec, std::vector<BitString> codewords,
                             std::optional<std::size_t> cap, RngSpec mc_rng,
                             double& measured_out) {
  TableCode cand(std::move(codewords), spec.channel, 1.0, cap);
  bool exact_ok = spec.channel.kind() == ChannelKind::kBdc
                      ? spec.n <= 16
                      : (spec.n <= 8 && cap && *cap <= 20);
  double measured;
  if (exact_ok) {
    measured = exact_dfp(cand, spec.channel);
  } else {
    measured = monte_carlo_dfp(cand, spec.channel, spec.mc_trials, mc_rng).estimate;
  }
  measured_out = measured;
  return cand.with_delta(measured, cap);
}

}  // namespace

std::optional<TableCode> search_base_code(const SearchSpec& spec) {
  if (spec.k == 0 || spec.k > spec.n) throw std::invalid_argument("search_base_code: need 0 < k <= n");
  if (spec.n > 30) throw std::invalid_argument("search_base_code: n > 30 unsupported");
  if (!(spec.target_delta > 0.0 && spec.target_delta < 1.0)) {
    throw std::invalid_argument("search_base_code: target_delta out of (0,1)");
  }
  const std::size_t msg_count = std::size_t{1} << spec.k;
  const std::uint64_t word_count = std::uint64_t{1} << spec.n;

  std::optional<std::size_t> cap;
  if (spec.channel.kind() == ChannelKind::kPrc) {
    cap = prc_receive_cap(spec.channel.param(), spec.n, spec.target_delta);
  }

  if (spec.strategy == SearchStrategy::kExhaustive) {
    if (msg_count > word_count) throw std::invalid_argument("search_base_code: 2^k > 2^n");
    // (2^n choose 2^k) codebooks must fit the budget
    double log_books = log_choose(static_cast<double>(word_count), static_cast<double>(msg_count));
    if (log_books > std::log(static_cast<double>(spec.budget)) + 1e-9) {
      throw std::invalid_argument("search_base_code: exhaustive codebook count exceeds budget");
    }
    // lexicographic combinations c[0] < c[1] < ... < c[M-1]
    std::vector<std::uint64_t> comb(msg_count);
    for (std::size_t i = 0; i < msg_count; ++i) comb[i] = i;
    while (true) {
      std::vector<BitString> codewords;
      codewords.reserve(msg_count);
      for (std::uint64_t w : comb) codewords.push_back(BitString::from_uint(w, spec.n));
      double measured = 1.0;
      TableCode cand = evaluate_candidate(spec, std::move(codewords), cap, spec.rng, measured);
      if (measured <= spec.target_delta) return cand;
      // next combination
      std::size_t i = msg_count;
      while (i-- > 0) {
        if (comb[i] + (msg_count - i) < word_count) {
          ++comb[i];
          for (std::size_t j = i + 1; j < msg_count; ++j) comb[j] = comb[j - 1] + 1;
          break;
        }
        if (i == 0) return std::nullopt;  // lexicographically last codebook reached
      }
    }
  }

  // random strategy: evaluate `budget` sampled codebooks, keep the best
  if (spec.budget == 0) throw std::invalid_argument("search_base_code: budget == 0");
  std::optional<TableCode> best;
  double best_measured = 2.0;
  for (std::uint64_t candidate = 0; candidate < spec.budget; ++candidate) {
    CounterRng sample_rng(spec.rng.derive(2 * candidate));
    std::set<std::uint64_t> chosen;
    while (chosen.size() < msg_count) {
      chosen.insert(sample_rng.next_u64() & (word_count - 1));
    }
    std::vector<BitString> codewords;
    codewords.reserve(msg_count);
    for (std::uint64_t w : chosen) codewords.push_back(BitString::from_uint(w, spec.n));
    double measured = 1.0;
    TableCode cand = evaluate_candidate(spec, std::move(codewords), cap,
                                        spec.rng.derive(2 * candidate + 1), measured);
    if (measured < best_measured) {
      best_measured = measured;
      best = std::move(cand);
    }
  }
  if (best && best_measured <= spec.target_delta) return best;
  return std::nullopt;
}

TableCode codebook_from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ChannelModel channel =
      ChannelModel::from_name(j.at("channel").at("kind").get<std::string>(),
                              j.at("channel").at("param").get<double>());
  std::vector<BitString> codewords;
  for (const auto& s : j.at("codewords")) {
    codewords.push_back(BitString::from_ascii(s.get<std::string>()));
  }
  std::optional<std::size_t> cap;
  if (j.contains("prc_cap")) cap = j.at("prc_cap").get<std::size_t>();
  TableCode code(std::move(codewords), channel, j.at("delta_measured").get<double>(), cap);
  if (j.at("k").get<std::size_t>() != code.message_bits() ||
      j.at("n").get<std::size_t>() != code.block_bits()) {
    throw std::invalid_argument("codebook fixture: k/n fields disagree with codewords");
  }
  return code;
}

std::string codebook_to_json_text(const TableCode& code) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["k"] = code.message_bits();
  j["n"] = code.block_bits();
  j["channel"] = {{"kind", code.reference_channel().name()},
                  {"param", code.reference_channel().param()}};
  std::vector<std::string> words;
  words.reserve(code.message_count());
  for (const auto& c : code.codewords()) words.push_back(c.to_ascii());
  j["codewords"] = words;
  j["delta_measured"] = code.dfp();
  if (code.receive_cap()) j["prc_cap"] = *code.receive_cap();
  return j.dump(2) + "\n";
}

TableCode load_codebook(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("load_codebook: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return codebook_from_json_text(ss.str());
}

void save_codebook(const TableCode& code, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("save_codebook: cannot open " + path);
  out << codebook_to_json_text(code);
}

}  // namespace vdc
