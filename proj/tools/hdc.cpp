// hdc: experiment harness and codebook tooling.
//
//   hdc codebook gen --kind bipolar --m 1000 --d 8192 --seed 1 --out cb.hdc
//   hdc codebook stats cb.hdc
//   hdc run set-decode-uniform --m 100 --s 5 --delta 0.05 --trials 200 --seed 7
//
// Runners emit per-trial JSON-lines (<out>.jsonl) and a key/value summary CSV
// (<out>.csv); the summary is also printed to stdout. Re-running a config
// byte-reproduces the rows; the timestamp banner line is dropped by
// --no-banner so outputs diff cleanly.
//
// Exit codes: 0 success, 1 experiment gate failed, 2 invalid usage or
// parameters, 3 resource caps exceeded (override with --allow-large).

#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hdc/experiments.hpp"
#include "hdc/io.hpp"

namespace {

using json = nlohmann::json;

struct ParamBag {
  std::map<std::string, double> num;
  std::map<std::string, std::string> str;

  bool has(const std::string& k) const { return num.count(k) || str.count(k); }
  double get(const std::string& k, double fallback) const {
    auto it = num.find(k);
    return it == num.end() ? fallback : it->second;
  }
  std::uint32_t get_u32(const std::string& k, std::uint32_t fallback) const {
    return static_cast<std::uint32_t>(get(k, fallback));
  }
  std::uint64_t get_u64(const std::string& k, std::uint64_t fallback) const {
    auto it = num.find(k);
    return it == num.end() ? fallback : static_cast<std::uint64_t>(it->second);
  }
  std::string get_str(const std::string& k, const std::string& fallback) const {
    auto it = str.find(k);
    return it == str.end() ? fallback : it->second;
  }
};

struct Caps {
  std::uint64_t max_d = 1u << 20;
  std::uint64_t max_trials = 1000000;
  bool allow_large = false;

  void check_d(std::uint64_t d) const {
    if (!allow_large && d > max_d) {
      throw std::length_error("d = " + std::to_string(d) + " exceeds --max-d " +
                              std::to_string(max_d) + " (pass --allow-large to override)");
    }
  }
  void check_trials(std::uint64_t t) const {
    if (!allow_large && t > max_trials) {
      throw std::length_error("trial count " + std::to_string(t) + " exceeds --max-trials " +
                              std::to_string(max_trials) +
                              " (pass --allow-large to override)");
    }
  }
};

std::string iso_now() {
  char buf[32];
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_outputs(const hdc::exp::RunnerOutput& out, const std::string& prefix, bool banner) {
  const std::string banner_line = "# hdc " + out.experiment + " " + iso_now() + "\n";

  std::ofstream csv(prefix + ".csv");
  if (!csv) throw std::runtime_error("cannot write " + prefix + ".csv");
  if (banner) csv << banner_line;
  for (std::size_t i = 0; i < out.summary.size(); ++i) {
    csv << (i ? "," : "") << out.summary[i].first;
  }
  csv << "\n";
  for (std::size_t i = 0; i < out.summary.size(); ++i) {
    csv << (i ? "," : "") << out.summary[i].second;
  }
  csv << "\n";

  std::ofstream jsonl(prefix + ".jsonl");
  if (!jsonl) throw std::runtime_error("cannot write " + prefix + ".jsonl");
  if (banner) jsonl << banner_line;
  for (const auto& row : out.trials) {
    jsonl << "{";
    for (std::size_t i = 0; i < row.size(); ++i) {
      jsonl << (i ? "," : "") << "\"" << row[i].first << "\":" << fmt_double(row[i].second);
    }
    jsonl << "}\n";
  }
}

void print_summary(const hdc::exp::RunnerOutput& out) {
  for (const auto& [k, v] : out.summary) {
    std::printf("%s,%s\n", k.c_str(), v.c_str());
  }
}

hdc::exp::RunnerOutput dispatch(const std::string& name, const ParamBag& p, const Caps& caps) {
  using namespace hdc::exp;
  const std::uint64_t seed = p.get_u64("seed", 1);
  if (name == "set-decode-uniform" || name == "set-decode") {
    SetDecodeUniformParams q;
    q.m = p.get_u32("m", q.m);
    q.s = p.get_u32("s", q.s);
    q.delta = p.get("delta", q.delta);
    q.d = p.get_u32("d", q.d);
    q.draws = p.get_u32("draws", p.get_u32("trials", q.draws));
    q.sets_per_draw = p.get_u32("sets-per-draw", q.sets_per_draw);
    q.seed = seed;
    q.exhaustive = p.get("exhaustive", 1.0) != 0.0;
    caps.check_d(q.d);
    caps.check_trials(q.draws);
    return run_set_decode_uniform(q).output();
  }
  if (name == "set-decode-pointwise") {
    SetDecodePointwiseParams q;
    q.m = p.get_u32("m", q.m);
    q.s = p.get_u32("s", q.s);
    q.delta = p.get("delta", q.delta);
    q.d = p.get_u32("d", q.d);
    q.trials = p.get_u32("trials", q.trials);
    q.seed = seed;
    caps.check_d(q.d);
    caps.check_trials(q.trials);
    return run_set_decode_pointwise(q).output();
  }
  if (name == "set-estimates") {
    SetEstimatesParams q;
    q.m = p.get_u32("m", q.m);
    q.d = p.get_u32("d", q.d);
    q.s_max = p.get_u32("s", q.s_max);
    q.pairs = p.get_u32("pairs", p.get_u32("trials", q.pairs));
    q.seed = seed;
    caps.check_d(q.d);
    caps.check_trials(q.pairs);
    return run_set_estimates(q).output();
  }
  if (name == "sequence-stream") {
    SequenceStreamParams q;
    q.m = p.get_u32("m", q.m);
    q.n = p.get_u32("n", q.n);
    q.d = p.get_u32("d", q.d);
    q.pushes = p.get_u32("pushes", p.get_u32("trials", q.pushes));
    q.seed = seed;
    caps.check_d(q.d);
    caps.check_trials(q.pushes);
    return run_sequence_stream(q).output();
  }
  if (name == "noise-tolerance") {
    NoiseToleranceParams q;
    const std::string model = p.get_str("model", "all");
    if (model != "all") {
      q.models.clear();
      if (model == "awgn") {
        q.models.push_back(hdc::NoiseSpec::Model::Awgn);
      } else if (model == "uniform-integer") {
        q.models.push_back(hdc::NoiseSpec::Model::UniformInteger);
      } else if (model == "ternary-flip") {
        q.models.push_back(hdc::NoiseSpec::Model::TernaryFlip);
      } else if (model == "adversarial-l2") {
        q.models.push_back(hdc::NoiseSpec::Model::AdversarialL2);
      } else if (model == "adversarial-l1") {
        q.models.push_back(hdc::NoiseSpec::Model::AdversarialL1);
      } else {
        throw CLI::ValidationError("--model", "unknown noise model " + model);
      }
    }
    q.m = p.get_u32("m", q.m);
    q.s = p.get_u32("s", q.s);
    q.delta = p.get("delta", q.delta);
    q.d = p.get_u32("d", q.d);
    q.trials = p.get_u32("trials", q.trials);
    q.fraction = p.get("fraction", q.fraction);
    q.sparse_d = p.get_u32("sparse-d", q.sparse_d);
    q.sparse_density = p.get("p", q.sparse_density);
    q.seed = seed;
    caps.check_d(std::max<std::uint64_t>(q.d, q.sparse_d));
    caps.check_trials(q.trials);
    return run_noise_tolerance(q).output();
  }
  if (name == "srp-distortion") {
    SrpDistortionParams q;
    q.n = p.get_u32("n", q.n);
    q.d = p.get_u32("d", q.d);
    q.pairs = p.get_u32("pairs", p.get_u32("trials", q.pairs));
    q.delta = p.get("delta", q.delta);
    q.seed = seed;
    caps.check_d(q.d);
    caps.check_trials(q.pairs);
    return run_srp_distortion(q).output();
  }
  if (name == "posid-distortion") {
    PosidDistortionParams q;
    q.n = p.get_u32("n", q.n);
    q.bins = p.get_u32("bins", q.bins);
    q.d = p.get_u32("d", q.d);
    q.pairs = p.get_u32("pairs", p.get_u32("trials", q.pairs));
    q.seed = seed;
    caps.check_d(q.d);
    caps.check_trials(q.pairs);
    return run_posid_distortion(q).output();
  }
  if (name == "rff-kernel") {
    RffKernelParams q;
    q.n = p.get_u32("n", q.n);
    q.d = p.get_u32("d", q.d);
    q.gamma = p.get("gamma", q.gamma);
    q.pairs = p.get_u32("pairs", p.get_u32("trials", q.pairs));
    q.seed = seed;
    caps.check_d(q.d);
    caps.check_trials(q.pairs);
    return run_rff_kernel(q).output();
  }
  if (name == "cluster-preserve") {
    ClusterPreserveParams q;
    q.n = p.get_u32("n", q.n);
    q.d = p.get_u32("d", q.d);
    q.points = p.get_u32("points", q.points);
    q.spread = p.get("spread", q.spread);
    q.seed = seed;
    caps.check_d(q.d);
    return run_cluster_preserve(q).output();
  }
  if (name == "euclid-robustness") {
    EuclidRobustnessParams q;
    q.n = p.get_u32("n", q.n);
    q.d = p.get_u32("d", q.d);
    q.eps1 = p.get("eps1", q.eps1);
    q.eps2 = p.get("eps2", q.eps2);
    q.delta = p.get("delta", q.delta);
    q.fraction = p.get("fraction", q.fraction);
    q.trials = p.get_u32("trials", q.trials);
    q.seed = seed;
    caps.check_d(q.d);
    caps.check_trials(q.trials);
    return run_euclid_robustness(q).output();
  }
  if (name == "classify-prototypes") {
    ClassifyPrototypesParams q;
    q.n = p.get_u32("n", q.n);
    q.d = p.get_u32("d", q.d);
    q.per_class = p.get_u32("per-class", q.per_class);
    q.separation = p.get("separation", q.separation);
    q.sigma = p.get("sigma", q.sigma);
    q.epochs = p.get_u32("epochs", q.epochs);
    q.csv_path = p.get_str("data", "");
    if (p.num.count("label-col")) {
      q.label_col = static_cast<std::size_t>(p.get("label-col", 0));
    }
    q.save_model_path = p.get_str("save-model", "");
    q.seed = seed;
    caps.check_d(q.d);
    return run_classify_prototypes(q).output();
  }
  if (name == "winnow-mistakes") {
    WinnowMistakesParams q;
    q.d = p.get_u32("d", q.d);
    q.n = p.get_u32("n", q.n);
    q.k = p.get_u32("k", q.k);
    q.runs = p.get_u32("runs", p.get_u32("trials", q.runs));
    q.stream_length = p.get_u32("stream", q.stream_length);
    q.seed = seed;
    caps.check_d(q.d);
    caps.check_trials(static_cast<std::uint64_t>(q.runs) * q.stream_length);
    return run_winnow_mistakes(q).output();
  }
  if (name == "structure-decode") {
    StructureDecodeParams q;
    q.m = p.get_u32("m", q.m);
    q.n = p.get_u32("n", q.n);
    q.delta = p.get("delta", q.delta);
    q.d = p.get_u32("d", q.d);
    q.seeds = p.get_u32("trials", q.seeds);
    q.seed = seed;
    if (q.d) caps.check_d(q.d);
    caps.check_trials(q.seeds);
    return run_structure_decode(q).output();
  }
  if (name == "sparse-separator") {
    SparseSeparatorParams q;
    q.n = p.get_u32("n", q.n);
    q.k = p.get_u32("k", q.k);
    q.gamma = p.get("gamma", q.gamma);
    q.trials = p.get_u32("trials", q.trials);
    q.config.multiplier = p.get("multiplier", q.config.multiplier);
    q.config.d_cap = p.get_u64("d-cap", q.config.d_cap);
    q.config.points = p.get_u32("points", q.config.points);
    q.seed = seed;
    caps.check_d(q.config.d_cap);
    caps.check_trials(q.trials);
    return run_sparse_separator(q).output();
  }
  if (name == "bloom-fpr") {
    BloomFprParams q;
    q.s = p.get_u32("s", q.s);
    q.delta = p.get("delta", q.delta);
    q.d = p.get_u32("d", q.d);
    q.probes = p.get_u32("probes", p.get_u32("trials", q.probes));
    q.fixed_weight = p.get("fixed-weight", 1.0) != 0.0;
    q.seed = seed;
    caps.check_trials(q.probes);
    return run_bloom_fpr(q).output();
  }
  throw CLI::ValidationError("experiment", "unknown experiment " + name);
}

int cmd_codebook_gen(const ParamBag& p, const Caps& caps, const std::string& out) {
  hdc::CodebookParams cp;
  const std::string kind = p.get_str("kind", "bipolar");
  if (kind == "bipolar") {
    cp.kind = hdc::CodebookKind::DenseBipolar;
  } else if (kind == "gaussian") {
    cp.kind = hdc::CodebookKind::Gaussian;
  } else if (kind == "sparse") {
    cp.kind = hdc::CodebookKind::SparseBinary;
  } else {
    throw CLI::ValidationError("--kind", "expected bipolar|gaussian|sparse");
  }
  cp.m = p.get_u32("m", 0);
  cp.d = p.get_u32("d", 0);
  cp.seed = p.get_u64("seed", 0);
  cp.sigma = p.get("sigma", 1.0);
  cp.density = p.get("p", 0.01);
  cp.fixed_weight = p.get("fixed-weight", 0.0) != 0.0;
  caps.check_d(cp.d);
  const auto cb = hdc::Codebook::generate(cp);
  hdc::io::save_codebook(cb, out);
  std::printf("kind,m,d,seed,identity\n%s,%u,%u,%llu,%016llx\n", kind.c_str(), cb.m(), cb.d(),
              static_cast<unsigned long long>(cb.seed()),
              static_cast<unsigned long long>(cb.identity()));
  return 0;
}

int cmd_codebook_stats(const std::string& path) {
  const auto cb = hdc::io::load_codebook(path);
  const double mu = cb.m() >= 2 ? cb.incoherence() : 0.0;
  std::printf("kind,m,d,seed,L,L_max,kappa,mu_emp\n");
  std::printf("%s,%u,%u,%llu,%s,%s,%s,%s\n", hdc::codebook_kind_name(cb.kind()), cb.m(),
              cb.d(), static_cast<unsigned long long>(cb.seed()),
              fmt_double(cb.min_norm()).c_str(), fmt_double(cb.max_norm()).c_str(),
              fmt_double(cb.kappa()).c_str(), fmt_double(mu).c_str());
  return 0;
}

const std::vector<std::string> kNumericKeys{
    "m", "s", "n", "k", "d", "bins", "delta", "gamma", "trials", "draws", "pairs",
    "probes", "pushes", "runs", "stream", "eps1", "eps2", "fraction", "points",
    "sets-per-draw", "epochs", "per-class", "separation", "sigma", "p", "sparse-d",
    "multiplier", "d-cap", "spread", "label-col", "exhaustive", "fixed-weight", "seed"};
const std::vector<std::string> kStringKeys{"model", "data", "kind", "save-model"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hdc: hyperdimensional computing experiment harness"};
  app.require_subcommand(1);

  Caps caps;
  std::string out_prefix;
  std::string config_path;
  bool no_banner = false;
  std::map<std::string, double> num_vals;
  std::map<std::string, std::string> str_vals;
  std::map<std::string, CLI::Option*> opts;

  // --- run
  auto* run = app.add_subcommand("run", "run an experiment");
  std::string experiment;
  run->add_option("experiment", experiment,
                  "one of: set-decode-uniform (alias set-decode), set-decode-pointwise, "
                  "set-estimates, bloom-fpr, noise-tolerance, structure-decode, "
                  "sequence-stream, srp-distortion, posid-distortion, rff-kernel, "
                  "cluster-preserve, euclid-robustness, classify-prototypes, "
                  "winnow-mistakes, sparse-separator")
      ->required();
  for (const auto& k : kNumericKeys) {
    opts["n:" + k] = run->add_option("--" + k, num_vals[k]);
  }
  for (const auto& k : kStringKeys) {
    opts["s:" + k] = run->add_option("--" + k, str_vals[k]);
  }
  run->add_option("--out", out_prefix, "output prefix for .csv and .jsonl files");
  run->add_option("--config", config_path, "JSON file with parameter defaults");
  run->add_flag("--no-banner", no_banner, "omit the timestamp banner line");
  run->add_option("--max-d", caps.max_d, "resource cap on the encoding dimension");
  run->add_option("--max-trials", caps.max_trials, "resource cap on trial counts");
  run->add_flag("--allow-large", caps.allow_large, "override the resource caps");

  // --- codebook
  auto* codebook = app.add_subcommand("codebook", "generate and inspect codebooks");
  codebook->require_subcommand(1);
  auto* gen = codebook->add_subcommand("gen", "sample a codebook and write a container file");
  std::map<std::string, double> gen_num;
  std::map<std::string, std::string> gen_str;
  gen->add_option("--kind", gen_str["kind"], "bipolar|gaussian|sparse");
  gen->add_option("--m", gen_num["m"], "alphabet size")->required();
  gen->add_option("--d", gen_num["d"], "dimension")->required();
  auto* gseed = gen->add_option("--seed", gen_num["seed"], "codebook seed");
  auto* gsig = gen->add_option("--sigma", gen_num["sigma"], "gaussian std-dev");
  auto* gp = gen->add_option("--p", gen_num["p"], "sparse density");
  auto* gfw = gen->add_flag("--fixed-weight", "exact-weight sparse rows");
  std::string gen_out;
  gen->add_option("--out", gen_out, "output container path")->required();
  gen->add_option("--max-d", caps.max_d);
  gen->add_flag("--allow-large", caps.allow_large);

  auto* stats = codebook->add_subcommand("stats", "print stats of a codebook container");
  std::string stats_path;
  stats->add_option("file", stats_path, "codebook container")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) {
      ParamBag bag;
      if (!config_path.empty()) {
        std::ifstream cf(config_path);
        if (!cf) throw std::runtime_error("cannot open config " + config_path);
        json cfg = json::parse(cf);
        for (auto& [key, value] : cfg.items()) {
          if (value.is_number()) {
            bag.num[key] = value.get<double>();
          } else if (value.is_boolean()) {
            bag.num[key] = value.get<bool>() ? 1.0 : 0.0;
          } else if (value.is_string()) {
            bag.str[key] = value.get<std::string>();
          } else {
            throw std::runtime_error("config key " + key + " has unsupported type");
          }
        }
      }
      for (const auto& k : kNumericKeys) {  // explicit flags win over the config file
        if (opts["n:" + k]->count() > 0) bag.num[k] = num_vals[k];
      }
      for (const auto& k : kStringKeys) {
        if (opts["s:" + k]->count() > 0) bag.str[k] = str_vals[k];
      }
      const auto result = dispatch(experiment, bag, caps);
      write_outputs(result, out_prefix.empty() ? result.experiment : out_prefix, !no_banner);
      print_summary(result);
      return result.pass ? 0 : 1;
    }
    if (gen->parsed()) {
      ParamBag bag;
      bag.num = gen_num;
      bag.str = gen_str;
      if (gfw->count() > 0) bag.num["fixed-weight"] = 1.0;
      if (gsig->count() == 0) bag.num.erase("sigma");
      if (gp->count() == 0) bag.num.erase("p");
      if (gseed->count() == 0) bag.num.erase("seed");
      return cmd_codebook_gen(bag, caps, gen_out);
    }
    if (stats->parsed()) return cmd_codebook_stats(stats_path);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::length_error& e) {
    std::fprintf(stderr, "resource cap: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid parameters: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
