// Acceptance suite: runs every gate at its pinned operating point and prints
// one pass/fail line per criterion. Exit code is the number of failures.
// Usage: hdc_acceptance [A1 A2 ...]   (no arguments: run everything)

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hdc/experiments.hpp"

namespace {

using hdc::exp::RunnerOutput;

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

CriterionResult check_a1() {
  hdc::exp::SetDecodeUniformParams p;  // m=100 s=5 delta=0.05 d=2441, 200 draws
  const auto r = run_set_decode_uniform(p);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "uniform decode: error-draw fraction %.4f (bound %.2f); exhaustive m=%u "
                "size<=%u: %llu errors over %u qualifying codebooks (bound 0)",
                r.error_fraction, p.gate_fraction, p.exhaustive_m, p.exhaustive_max_s,
                static_cast<unsigned long long>(r.exhaustive_errors),
                r.exhaustive_codebooks_checked);
  return {r.pass && r.exhaustive_codebooks_checked > 0, buf};
}

CriterionResult check_a2() {
  hdc::exp::SetDecodePointwiseParams p;  // m=1000 s=50 delta=0.01 d=4881
  const auto r = run_set_decode_pointwise(p);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "pointwise decode success rate %.4f (bound >= %.2f)",
                r.success_rate, p.gate_rate);
  return {r.pass, buf};
}

CriterionResult check_a3() {
  hdc::exp::SetEstimatesParams p;  // m=200 d=16384 s<=20
  const auto r = run_set_estimates(p);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "size/intersection estimates: %u bound exceptions over %u pairs (bound 0); "
                "max errors %.3f / %.3f",
                r.exceptions, p.pairs, r.max_size_error, r.max_intersection_error);
  return {r.pass, buf};
}

CriterionResult check_a4() {
  hdc::exp::SequenceStreamParams p;  // 10^4 pushes, n=64, d=4096
  const auto r = run_sequence_stream(p);
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "streaming state vs re-encode: %u mismatches over %u pushes (bound 0)",
                r.mismatches, p.pushes);
  return {r.pass, buf};
}

CriterionResult check_a5() {
  hdc::exp::NoiseToleranceParams p;  // all models, half tolerance
  const auto r = run_noise_tolerance(p);
  std::string detail = "decode at half tolerance (bound rate >= 0.90):";
  std::uint32_t violations = 0;
  for (const auto& m : r.per_model) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), " %s %.3f;", hdc::noise_model_name(m.model),
                  m.success_rate);
    detail += buf;
    violations += m.safety_violations;
  }
  detail += " safety violations " + std::to_string(violations) + " (bound 0)";
  return {r.pass, detail};
}

CriterionResult check_a6() {
  hdc::exp::SrpDistortionParams sp;  // n=32 d=4096 1000 pairs
  const auto sr = run_srp_distortion(sp);
  hdc::exp::PosidDistortionParams pp;  // n=8 bins=64 d=65536 500 pairs
  const auto pr = run_posid_distortion(pp);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "srp |theta_hat-theta| <= %.3f for %.1f%% of pairs (bound 99%%); "
                "posid sandwich violations %u/%u (bound 0, mu_emp %.4f)",
                sr.tolerance, 100.0 * sr.within_fraction, pr.violations, pp.pairs,
                pr.mu_emp);
  return {sr.pass && pr.pass, buf};
}

CriterionResult check_a7() {
  hdc::exp::EuclidRobustnessParams p;  // eps1=0.1 eps2=0.3, AWGN at half tolerance
  const auto r = run_euclid_robustness(p);
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "nn-ordering violations %.4f of %u trials (bound <= %.2f) at sigma %.3f "
                "(half of tolerance %.3f)",
                r.violation_rate, p.trials, 2.0 * p.delta, r.sigma_applied,
                r.sigma_tolerance);
  return {r.pass, buf};
}

CriterionResult check_a8() {
  hdc::exp::ClassifyPrototypesParams cp;
  const auto cr = run_classify_prototypes(cp);
  hdc::exp::WinnowMistakesParams wp;  // k=8, d=4096, 100 runs
  const auto wr = run_winnow_mistakes(wp);
  char buf[288];
  std::snprintf(
      buf, sizeof(buf),
      "prototypes %.3f vs raw oracle %.3f (slack %.2f); winnow within 4k*ln(d)=%.0f in "
      "%.0f%% of runs (bound 95%%, max %llu); separator exceptions %u over %u fired (bound 0)",
      cr.encoded_accuracy, cr.raw_accuracy, cp.accuracy_slack, wr.budget,
      100.0 * wr.within_fraction, static_cast<unsigned long long>(wr.max_mistakes),
      cr.separator_exceptions, cr.separator_condition_fired);
  return {cr.pass && wr.pass && cr.separator_condition_fired > 0, buf};
}

CriterionResult check_a9() {
  hdc::exp::BloomFprParams p;  // s=100 delta=0.01, classical calibration
  const auto r = run_bloom_fpr(p);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "bloom d=%u: false negatives %u (bound 0); fpr %.4f over %u probes "
                "(bound <= %.2f)",
                r.d, r.false_negatives, r.fpr, p.probes, 2.0 * p.delta);
  return {r.pass, buf};
}

CriterionResult check_a10() {
  hdc::exp::RffKernelParams p;  // n=8 d=8192 1000 pairs
  const auto r = run_rff_kernel(p);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "rff dot-vs-kernel MAE %.4f (bound <= %.4f); quantized rank correlation "
                "%.4f (bound >= %.2f)",
                r.mae, r.mae_bound, r.rank_correlation, p.gate_spearman);
  return {r.pass, buf};
}

}  // namespace

int main(int argc, char** argv) {
  using Check = std::function<CriterionResult()>;
  const std::vector<std::pair<std::string, Check>> criteria{
      {"A1", check_a1}, {"A2", check_a2}, {"A3", check_a3}, {"A4", check_a4},
      {"A5", check_a5}, {"A6", check_a6}, {"A7", check_a7}, {"A8", check_a8},
      {"A9", check_a9}, {"A10", check_a10}};

  std::vector<std::string> selected;
  for (int i = 1; i < argc; ++i) selected.emplace_back(argv[i]);

  int failures = 0;
  int ran = 0;
  for (const auto& [id, check] : criteria) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), id) == selected.end()) {
      continue;
    }
    ++ran;
    const auto result = check();
    std::printf("[%s] %-3s %s\n", result.pass ? "PASS" : "FAIL", id.c_str(),
                result.detail.c_str());
    std::fflush(stdout);
    failures += !result.pass;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no matching criteria (expected A1..A10)\n");
    return 64;
  }
  if (ran > 1) {
    std::printf("%d/%d criteria passed\n", ran - failures, ran);
  }
  return failures;
}
