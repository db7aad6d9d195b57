// vdc: simulation and analysis harness for valley-delimited concatenated
// codes on the binary deletion channel and the Poisson repeat channel.
//
// Subcommands: transmit, dfp, plan, search, bounds, encode, decode.
// Exit codes: 0 success, 1 decode failure (decode only), 2 input error,
// 64 usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vdc/bounds.hpp"
#include "vdc/channel.hpp"
#include "vdc/harness.hpp"
#include "vdc/inner_code.hpp"
#include "vdc/recursive.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitDecodeFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitUsage = 64;

vdc::SerializeMode mode_for_path(const std::string& path) {
  auto ext = std::filesystem::path(path).extension().string();
  return (ext == ".txt" || ext == ".ascii") ? vdc::SerializeMode::kAscii
                                            : vdc::SerializeMode::kBinary;
}

vdc::BitString read_bits_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string raw = ss.str();
  std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(raw.data()),
                                      raw.size());
  return vdc::deserialize(bytes, mode_for_path(path));
}

void write_bits_file(const vdc::BitString& w, const std::string& path) {
  auto bytes = vdc::serialize(w, mode_for_path(path));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

void write_text_file(const std::string& text, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path);
  out << text;
}

// --config JSON: {"schema_version":1, "seed":..., "workers":..., "<subcommand>":{flag:value}}
json load_config_json(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      std::ifstream in(argv[i + 1]);
      if (!in) throw std::invalid_argument(std::string("cannot open config ") + argv[i + 1]);
      json j = json::parse(in);
      if (!j.contains("schema_version")) {
        throw std::invalid_argument("config: missing schema_version");
      }
      return j;
    }
  }
  return json::object();
}

template <typename T>
void cfg_default(const json& cfg, const std::string& section, const std::string& key, T& var) {
  if (cfg.contains(section) && cfg.at(section).contains(key)) {
    var = cfg.at(section).at(key).get<T>();
  }
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_bounds_table(std::ostream& out, const std::string& format) {
  struct Row {
    std::string bound;
    std::string params;
    double value;
  };
  std::vector<Row> rows;
  auto add = [&](const std::string& name, const std::string& params, double v) {
    rows.push_back({name, params, v});
  };

  for (double p : {0.05, 0.1, 0.25, 0.4, 0.499}) {
    for (std::uint64_t n : {100ull, 10000ull}) {
      for (double eps : {0.1, 0.3}) {
        char ps[96];
        std::snprintf(ps, sizeof ps, "p=%g;n=%llu;eps=%g", p, static_cast<unsigned long long>(n),
                      eps);
        add("chernoff_binomial", ps, vdc::bounds::chernoff_binomial(p, n, eps));
      }
    }
  }
  for (double lambda : {5.0, 20.0, 400.0}) {
    for (double eps : {0.1, 0.25, 0.4}) {
      char ps[64];
      std::snprintf(ps, sizeof ps, "lambda=%g;eps=%g", lambda, eps);
      add("chernoff_poisson", ps, vdc::bounds::chernoff_poisson(lambda, eps));
    }
  }
  for (double alpha : {8.0, 16.0}) {
    for (double p : {0.001, 0.01}) {
      for (std::uint64_t n : {500ull, 1000ull}) {
        char ps[96];
        std::snprintf(ps, sizeof ps, "alpha=%g;p=%g;n=%llu", alpha, p,
                      static_cast<unsigned long long>(n));
        add("binomial_upper_tail_bound", ps, vdc::bounds::binomial_upper_tail_bound(alpha, p, n));
      }
    }
  }
  {
    struct P {
      double delta;
      std::uint64_t k, t, d;
    };
    for (const auto& q : {P{1e-30, 64, 16, 16}, P{1e-6, 64, 53, 16}, P{1e-4, 256, 40, 40}}) {
      char ps[96];
      std::snprintf(ps, sizeof ps, "delta=%g;k=%llu;t=%llu;d=%llu", q.delta,
                    static_cast<unsigned long long>(q.k), static_cast<unsigned long long>(q.t),
                    static_cast<unsigned long long>(q.d));
      add("recursive_dfp_bound", ps, vdc::bounds::recursive_dfp_bound(q.delta, q.k, q.t, q.d));
    }
  }
  for (double kb : {16.0, 64.0, 1000.0}) {
    char ps[32];
    std::snprintf(ps, sizeof ps, "k_base=%g", kb);
    add("rate_overhead_x", ps, vdc::bounds::rate_overhead_x(kb));
  }
  add("final_rate_bound", "k0=1000;delta0=1e-06;r0=0.1",
      vdc::bounds::final_rate_bound(1000, 1e-6, 0.1));
  for (double d : {0.5, 1e-6, 1e-12}) {
    char ps[32];
    std::snprintf(ps, sizeof ps, "delta=%g", d);
    add("inner_failure_bound", ps, vdc::bounds::inner_failure_bound(d).value);
  }

  if (format == "json") {
    json j = json::array();
    for (const auto& r : rows) {
      j.push_back({{"bound", r.bound}, {"params", r.params}, {"value", r.value}});
    }
    out << j.dump(2) << "\n";
  } else {
    out << "bound,params,value\n";
    for (const auto& r : rows) {
      out << r.bound << ',' << r.params << ',' << format_double(r.value) << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"valley-delimited concatenated codes for deletion/repeat channels"};
  app.require_subcommand(1);

  json cfg;
  try {
    cfg = load_config_json(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string format = "json";
  std::string config_path;
  if (cfg.contains("seed")) seed = cfg.at("seed").get<std::uint64_t>();
  if (cfg.contains("workers")) workers = cfg.at("workers").get<unsigned>();
  if (cfg.contains("format")) format = cfg.at("format").get<std::string>();
  app.add_option("--seed", seed, "master RNG seed");
  app.add_option("--workers", workers, "worker thread count");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--config", config_path, "JSON config file (flags win)");

  // ---- transmit ----
  auto* transmit = app.add_subcommand("transmit", "push a bit file through a channel");
  std::string tr_channel = "bdc", tr_in, tr_out;
  double tr_param = 0.1;
  cfg_default(cfg, "transmit", "channel", tr_channel);
  cfg_default(cfg, "transmit", "param", tr_param);
  cfg_default(cfg, "transmit", "in", tr_in);
  cfg_default(cfg, "transmit", "out", tr_out);
  transmit->add_option("--channel", tr_channel)->check(CLI::IsMember({"bdc", "prc"}));
  transmit->add_option("--param", tr_param, "p for BDC, lambda for PRC");
  transmit->add_option("--in", tr_in)->required(tr_in.empty());
  transmit->add_option("--out", tr_out)->required(tr_out.empty());

  // ---- encode / decode ----
  auto* encode = app.add_subcommand("encode", "recursive-encode a message file");
  std::string en_config, en_in, en_out;
  cfg_default(cfg, "encode", "recursive", en_config);
  encode->add_option("--recursive", en_config, "RecursiveCodeConfig JSON")->required(en_config.empty());
  encode->add_option("--in", en_in)->required();
  encode->add_option("--out", en_out)->required();

  auto* decode = app.add_subcommand("decode", "recursive-decode a received file");
  std::string de_config, de_in, de_out, de_trace;
  cfg_default(cfg, "decode", "recursive", de_config);
  decode->add_option("--recursive", de_config, "RecursiveCodeConfig JSON")->required(de_config.empty());
  decode->add_option("--in", de_in)->required();
  decode->add_option("--out", de_out)->required();
  decode->add_option("--trace", de_trace, "write DecodeTrace JSON here");

  // ---- dfp ----
  auto* dfp = app.add_subcommand("dfp", "Monte-Carlo decoding-failure campaign");
  std::string dfp_fixture, dfp_recursive, dfp_channel, dfp_csv, dfp_json;
  double dfp_param = 0.0;
  std::uint64_t dfp_trials = 1000;
  cfg_default(cfg, "dfp", "fixture", dfp_fixture);
  cfg_default(cfg, "dfp", "recursive", dfp_recursive);
  cfg_default(cfg, "dfp", "channel", dfp_channel);
  cfg_default(cfg, "dfp", "param", dfp_param);
  cfg_default(cfg, "dfp", "trials", dfp_trials);
  cfg_default(cfg, "dfp", "out_csv", dfp_csv);
  cfg_default(cfg, "dfp", "out_json", dfp_json);
  dfp->add_option("--fixture", dfp_fixture, "codebook fixture JSON");
  dfp->add_option("--recursive", dfp_recursive, "RecursiveCodeConfig JSON (end-to-end run)");
  dfp->add_option("--channel", dfp_channel)->check(CLI::IsMember({"bdc", "prc"}));
  dfp->add_option("--param", dfp_param);
  dfp->add_option("--trials", dfp_trials);
  dfp->add_option("--out-csv", dfp_csv);
  dfp->add_option("--out-json", dfp_json);

  // ---- search ----
  auto* search = app.add_subcommand("search", "search for a base codebook");
  std::string se_channel = "bdc", se_strategy = "exhaustive", se_out;
  double se_param = 0.1, se_target = 0.01;
  std::size_t se_k = 1, se_n = 3;
  std::uint64_t se_budget = 1000, se_mc_trials = 2000;
  cfg_default(cfg, "search", "channel", se_channel);
  cfg_default(cfg, "search", "param", se_param);
  cfg_default(cfg, "search", "k", se_k);
  cfg_default(cfg, "search", "n", se_n);
  cfg_default(cfg, "search", "target", se_target);
  cfg_default(cfg, "search", "strategy", se_strategy);
  cfg_default(cfg, "search", "budget", se_budget);
  cfg_default(cfg, "search", "mc_trials", se_mc_trials);
  cfg_default(cfg, "search", "out", se_out);
  search->add_option("--channel", se_channel)->check(CLI::IsMember({"bdc", "prc"}));
  search->add_option("--param", se_param);
  search->add_option("--k", se_k);
  search->add_option("--n", se_n);
  search->add_option("--target", se_target);
  search->add_option("--strategy", se_strategy)->check(CLI::IsMember({"exhaustive", "random"}));
  search->add_option("--budget", se_budget);
  search->add_option("--mc-trials", se_mc_trials);
  search->add_option("--out", se_out, "write fixture JSON here");

  // ---- plan ----
  auto* plan = app.add_subcommand("plan", "emit the recursion schedule and bounds");
  std::uint64_t pl_kbase = 64;
  double pl_delta = 1e-6;
  std::string pl_channel = "bdc", pl_first = "improve", pl_out;
  double pl_param = 0.1;
  int pl_levels = 1;
  cfg_default(cfg, "plan", "k_base", pl_kbase);
  cfg_default(cfg, "plan", "delta", pl_delta);
  cfg_default(cfg, "plan", "channel", pl_channel);
  cfg_default(cfg, "plan", "param", pl_param);
  cfg_default(cfg, "plan", "levels", pl_levels);
  cfg_default(cfg, "plan", "first_step", pl_first);
  plan->add_option("--k-base", pl_kbase);
  plan->add_option("--delta", pl_delta);
  plan->add_option("--channel", pl_channel)->check(CLI::IsMember({"bdc", "prc"}));
  plan->add_option("--param", pl_param);
  plan->add_option("--levels", pl_levels);
  plan->add_option("--first-step", pl_first)->check(CLI::IsMember({"improve", "schedule"}));
  plan->add_option("--out", pl_out, "also write the plan JSON here");

  // ---- bounds ----
  auto* bounds_cmd = app.add_subcommand("bounds", "print the bound table");
  std::string bo_out;
  bounds_cmd->add_option("--out", bo_out, "write the table here instead of stdout");

  // global flags may appear after the subcommand name
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*transmit) {
      vdc::ChannelModel channel = vdc::ChannelModel::from_name(tr_channel, tr_param);
      vdc::BitString input = read_bits_file(tr_in);
      vdc::BitString output = vdc::transmit(channel, input, vdc::RngSpec{seed, 0});
      write_bits_file(output, tr_out);
      json j = {{"input_bits", input.size()}, {"output_bits", output.size()}};
      std::cout << j.dump() << "\n";
      return kExitOk;
    }

    if (*encode) {
      vdc::RecursiveCodeConfig rc = vdc::load_recursive_config(en_config);
      vdc::BitString message = read_bits_file(en_in);
      write_bits_file(vdc::recursive_encode(rc, message), en_out);
      json j = {{"message_bits", message.size()}, {"codeword_bits", rc.block_bits()}};
      std::cout << j.dump() << "\n";
      return kExitOk;
    }

    if (*decode) {
      vdc::RecursiveCodeConfig rc = vdc::load_recursive_config(de_config);
      vdc::BitString received = read_bits_file(de_in);
      vdc::RecursiveDecodeResult r = vdc::recursive_decode(rc, received);
      if (!de_trace.empty()) write_text_file(r.trace.to_json(), de_trace);
      if (!r.message) {
        std::cerr << "decode failure: no outer codeword within radius\n";
        return kExitDecodeFailure;
      }
      write_bits_file(*r.message, de_out);
      json j = {{"received_bits", received.size()}, {"message_bits", r.message->size()}};
      std::cout << j.dump() << "\n";
      return kExitOk;
    }

    if (*dfp) {
      vdc::ExperimentConfig ec;
      ec.trials = dfp_trials;
      ec.master_seed = seed;
      ec.workers = workers;
      if (!dfp_recursive.empty()) {
        ec.recursive =
            std::make_shared<vdc::RecursiveCodeConfig>(vdc::load_recursive_config(dfp_recursive));
        ec.channel = ec.recursive->channel();
      } else if (!dfp_fixture.empty()) {
        auto code = std::make_shared<vdc::TableCode>(vdc::load_codebook(dfp_fixture));
        ec.code = code;
        ec.channel = code->reference_channel();
      } else {
        std::cerr << "error: dfp needs --fixture or --recursive\n";
        return kExitUsage;
      }
      if (!dfp_channel.empty()) {
        ec.channel = vdc::ChannelModel::from_name(dfp_channel, dfp_param);
      }
      vdc::TrialReport report = vdc::run_dfp_campaign(ec);
      std::string summary = vdc::report_summary_json(ec, report);
      if (!dfp_csv.empty()) {
        std::ofstream out(dfp_csv);
        if (!out) throw std::invalid_argument("cannot open " + dfp_csv);
        vdc::write_trial_csv(report, out);
      }
      if (!dfp_json.empty()) write_text_file(summary, dfp_json);
      std::cout << summary;
      std::cerr << "wall_seconds " << report.wall_seconds << "\n";
      return kExitOk;
    }

    if (*search) {
      vdc::SearchSpec spec(vdc::ChannelModel::from_name(se_channel, se_param));
      spec.k = se_k;
      spec.n = se_n;
      spec.target_delta = se_target;
      spec.strategy = se_strategy == "random" ? vdc::SearchStrategy::kRandom
                                              : vdc::SearchStrategy::kExhaustive;
      spec.budget = se_budget;
      spec.rng = vdc::RngSpec{seed, 0};
      spec.mc_trials = se_mc_trials;
      auto found = vdc::search_base_code(spec);
      if (!found) {
        std::cerr << "search: no codebook met the target within the budget\n";
        return kExitInputError;
      }
      std::string text = vdc::codebook_to_json_text(*found);
      if (!se_out.empty()) write_text_file(text, se_out);
      std::cout << text;
      return kExitOk;
    }

    if (*plan) {
      vdc::ChannelModel channel = vdc::ChannelModel::from_name(pl_channel, pl_param);
      vdc::FirstStepRule rule = pl_first == "schedule" ? vdc::FirstStepRule::kSchedule
                                                       : vdc::FirstStepRule::kBaseImprovement;
      auto levels = vdc::plan_schedule(pl_kbase, pl_delta, channel, pl_levels, rule);
      std::string text = vdc::plan_to_json(levels, channel, rule);
      if (!pl_out.empty()) write_text_file(text, pl_out);
      std::cout << text;
      return kExitOk;
    }

    if (*bounds_cmd) {
      // CSV is the default table format; --format json opts into JSON
      std::string fmt = (app.count("--format") > 0 && format == "json") ? "json" : "csv";
      if (bo_out.empty()) {
        emit_bounds_table(std::cout, fmt);
      } else {
        std::ofstream out(bo_out);
        if (!out) throw std::invalid_argument("cannot open " + bo_out);
        emit_bounds_table(out, fmt);
      }
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitUsage;
}
