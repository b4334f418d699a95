// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Uses its own seeds and temp workspace; independent from the unit
// tests.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "tattr/cli.hpp"
#include "tattr/finite_diff.hpp"
#include "tattr/localization.hpp"
#include "tattr/model_io.hpp"
#include "tattr/reformulation.hpp"

using namespace tattr;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << criterion << ": " << what;
  if (!detail.empty()) std::cout << " (" << detail << ")";
  std::cout << std::endl;
  if (!pass) ++g_failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Polynomial random_poly(RngState& rng, int n, int max_degree) {
  Polynomial p(n);
  const int terms = 1 + static_cast<int>(next_below(rng, 6));
  for (int t = 0; t < terms; ++t) {
    MultiIndex kappa = MultiIndex::zeros(n);
    const int degree = 1 + static_cast<int>(next_below(rng, max_degree));
    for (int r = 0; r < degree; ++r) kappa[static_cast<int>(next_below(rng, n))] += 1;
    p.add_term(kappa, next_uniform(rng, -5.0, 5.0));
  }
  if (p.terms().empty()) p.add_term(MultiIndex::unit(n, 0), 1.0);
  return p;
}

FeatureVector random_vec(RngState& rng, int n, double bound) {
  FeatureVector v(n);
  for (int i = 0; i < n; ++i) v[i] = next_uniform(rng, -bound, bound);
  return v;
}

// --- criterion 1 + 2: reformulation suite and riemann convergence --------------

void criteria_1_and_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport suite = run_reformulation_suite(20250809, 100);
  const double elapsed = seconds_since(t0);

  bool props_pass = true;
  double worst = 0.0;
  for (const auto& row : suite.rows) {
    if (row.id.rfind("ig_", 0) == 0) continue;  // riemann rows belong to criterion 2
    props_pass = props_pass && row.pass;
    worst = std::max(worst, row.max_residual);
  }
  std::ostringstream d1;
  d1 << "5 reformulations x 100 instances, worst residual " << worst << ", " << elapsed << " s";
  report(1, props_pass && elapsed < 30.0, "reformulation suite exact at 1e-9, runtime < 30 s", d1.str());

  bool ratio_pass = false, completeness_pass = false;
  double ratio = 0.0, completeness = 0.0;
  for (const auto& row : suite.rows) {
    if (row.id == "ig_riemann_ratio_400_100") {
      ratio_pass = row.pass;
      ratio = row.max_residual;
    }
    if (row.id == "ig_completeness_m1000") {
      completeness_pass = row.pass;
      completeness = row.max_residual;
    }
  }
  std::ostringstream d2;
  d2 << "worst error ratio m=400/m=100 " << ratio << " <= 0.3, worst midpoint completeness at m=1000 "
     << completeness << " <= 1e-3";
  report(2, ratio_pass && completeness_pass, "riemann integrated gradients converges", d2.str());
}

// --- criterion 3: conservation ------------------------------------------------

void criterion_3() {
  RngState rng{333, 0};
  bool assign_ok = true;
  double worst_assign = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + static_cast<int>(next_below(rng, 4));
    const Polynomial p = random_poly(rng, n, 4);
    const AnchorMode mode = next_below(rng, 2) == 0 ? AnchorMode::at_baseline : AnchorMode::at_input;
    const TaylorDecomposition dec =
        exact_taylor_terms(p, random_vec(rng, n, 3.0), random_vec(rng, n, 3.0), mode);
    const AssignmentRule rule = next_below(rng, 2) == 0 ? AssignmentRule::equal_split()
                                                        : AssignmentRule::degree_proportional();
    const AttributionResult a = assign(dec, rule);
    const double rel = std::abs(a.scores.sum() - dec.total()) / (1.0 + std::abs(dec.total()));
    worst_assign = std::max(worst_assign, rel);
    assign_ok = assign_ok && rel <= 1e-10;
  }

  bool deeplift_ok = true;
  double worst_layer = 0.0;
  int checked = 0;
  RngState net_rng{334, 0};
  while (checked < 50) {
    const int n = 2 + static_cast<int>(next_below(net_rng, 5));
    const int depth = 1 + static_cast<int>(next_below(net_rng, 3));  // <= 3 layers
    const int width = 2 + static_cast<int>(next_below(net_rng, 7));  // <= 8
    std::vector<int> sizes{n};
    for (int l = 0; l < depth - 1; ++l) sizes.push_back(width);
    sizes.push_back(1);
    const Network net = make_dense_network(sizes, net_rng, 0.8, Activation::tanh, Activation::softplus);
    const FeatureVector x = random_vec(net_rng, n, 2.0);
    const FeatureVector baseline = random_vec(net_rng, n, 2.0);
    std::vector<FeatureVector> layer_relevances;
    const AttributionResult a = deeplift_rescale(net, x, baseline, 0, 1e-9, &layer_relevances);
    if (a.stabilizer_events > 0) continue;  // the criterion reads on the clean path
    const double delta = net.forward(x)[0] - net.forward(baseline)[0];
    const double scale = 1.0 + std::abs(delta);
    for (const FeatureVector& r : layer_relevances) {
      const double drift = std::abs(r.sum() - delta) / scale;
      worst_layer = std::max(worst_layer, drift);
      deeplift_ok = deeplift_ok && drift <= 1e-10;
    }
    ++checked;
  }

  std::ostringstream d;
  d << "assign worst rel " << worst_assign << " over 1000 decompositions; deeplift worst per-layer drift "
    << worst_layer << " over 50 networks";
  report(3, assign_ok && deeplift_ok, "conservation of assignments and layerwise relevance", d.str());
}

// --- criterion 4: derivative cross-oracle -------------------------------------

void criterion_4() {
  RngState rng{444, 0};
  bool fd_ok = true;
  double worst_fd = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(next_below(rng, 5));  // n <= 6
    std::vector<int> sizes{n, 4, 1};
    const Network net = make_dense_network(sizes, rng, 0.6, Activation::tanh, Activation::tanh);
    const ModelFunction f{net, 0};
    const FeatureVector x = random_vec(rng, n, 1.5);
    const ScalarFn fn = [&f](const FeatureVector& p) { return f(p); };

    const FeatureVector g = gradient(f, x);
    const FeatureVector gf = fd_gradient(fn, x, 1e-4);
    for (int i = 0; i < n; ++i) {
      const double rel = std::abs(g[i] - gf[i]) / (1.0 + std::abs(gf[i]));
      worst_fd = std::max(worst_fd, rel);
      fd_ok = fd_ok && rel <= 1e-5;
    }
    // h = 5e-4 keeps the stencil's own O(h^2) truncation under the 1e-5 gate
    // while staying far from the cancellation floor.
    const Eigen::MatrixXd h = hessian(f, x);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        MultiIndex kappa = MultiIndex::zeros(n);
        kappa[i] += 1;
        kappa[j] += 1;
        const double ref = fd_mixed_partial(fn, x, kappa, 5e-4);
        const double rel = std::abs(h(i, j) - ref) / (1.0 + std::abs(ref));
        worst_fd = std::max(worst_fd, rel);
        fd_ok = fd_ok && rel <= 1e-5;
      }
  }

  bool poly_ok = true;
  double worst_poly = 0.0;
  RngState prng{445, 0};
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(next_below(prng, 3));
    const Polynomial p = random_poly(prng, n, 4);
    const ModelFunction f{p};
    const FeatureVector anchor = random_vec(prng, n, 2.0);
    for (const auto& [kappa, c] : taylor_coefficients(f, anchor, 4)) {
      const double symbolic = p.partial(kappa)(anchor) / kappa.factorial();
      const double err = std::abs(c - symbolic) / (1.0 + std::abs(symbolic));
      worst_poly = std::max(worst_poly, err);
      poly_ok = poly_ok && err <= 1e-10;
    }
  }

  std::ostringstream d;
  d << "gradient/hessian vs stencils worst rel " << worst_fd << " <= 1e-5 on 50 tanh nets; "
    << "dual-tower vs symbolic coefficients worst " << worst_poly << " <= 1e-10 on 50 polynomials";
  report(4, fd_ok && poly_ok, "derivative cross-oracle agreement", d.str());
}

// --- criterion 5: three-properties report -------------------------------------

void criterion_5() {
  const AssignmentRule rule = AssignmentRule::degree_proportional();
  const PropertyTolerances tol = PropertyTolerances::exact();

  // Exact IG on a mixed polynomial: all residuals zero.
  const Polynomial mixed = parse_polynomial("2*x1^2 + x2^3 - 3*x1*x2 + x1*x2*x3 + x3");
  FeatureVector x3(3), b3(3);
  x3 << 1.2, -0.8, 2.0;
  b3 << 0.0, 0.0, 0.0;
  const TaylorDecomposition dec3 = exact_taylor_terms(mixed, x3, b3, AnchorMode::at_baseline);
  const PropertyReport ig_report = check_properties(exact_ig(mixed, x3, b3), dec3, rule, tol);
  const bool ig_zero = ig_report.approx_error <= 1e-9 && ig_report.independent_residual <= 1e-9 &&
                       ig_report.interactive_residual <= 1e-9;

  // Gradient*Input on x1*x2 at (2,3), baseline 0: property-1 residual is 6.
  const Polynomial prod = parse_polynomial("x1*x2");
  const FeatureVector x2 = Eigen::Vector2d(2.0, 3.0);
  const TaylorDecomposition dec2 =
      exact_taylor_terms(prod, x2, Eigen::Vector2d::Zero(), AnchorMode::at_baseline);
  const PropertyReport gi_report = check_properties(gradient_x_input(ModelFunction{prod}, x2), dec2, rule, tol);
  const bool gi_six = std::abs(gi_report.approx_error - 6.0) <= 1e-9 && !gi_report.satisfied[0];

  // Qualitative pattern: {P1,P2,P3} per method on the mixed polynomial.
  const ModelFunction f{mixed};
  auto pattern = [&](const PropertyReport& r) {
    return std::to_string(int(r.satisfied[0])) + std::to_string(int(r.satisfied[1])) +
           std::to_string(int(r.satisfied[2]));
  };
  const std::string gi = pattern(check_properties(gradient_x_input(f, x3), dec3, rule, tol));
  const std::string p1 = pattern(check_properties(perturbation_1(f, x3, 0.0), dec3, rule, tol));
  PatchSpec patches;
  patches.patches = {{0, 1}, {2}};
  const std::string pp = pattern(check_properties(perturbation_patch(f, x3, patches, 0.0), dec3, rule, tol,
                                                  MethodStructure::patch(patches)));
  FeatureVector fractions(3);
  fractions << 0.5, 0.3, 0.2;
  AttributionResult dl;
  dl.method = "deeplift_rescale";
  dl.scores = dec3.F + fractions * (dec3.total() - dec3.F.sum());
  const std::string dlp = pattern(check_properties(dl, dec3, rule, tol, MethodStructure::global_fraction(fractions)));
  const std::string ig = pattern(check_properties(exact_ig(mixed, x3, b3), dec3, rule, tol));

  const bool table_match = gi == "000" && p1 == "010" && pp == "010" && dlp == "100" && ig == "111";
  std::ostringstream d;
  d << "exact-IG residuals zero: " << (ig_zero ? "yes" : "no") << "; gradient*input P1 residual "
    << gi_report.approx_error << "; satisfied patterns gi=" << gi << " pert1=" << p1 << " patch=" << pp
    << " deeplift=" << dlp << " ig=" << ig;
  report(5, ig_zero && gi_six && table_match, "three-properties report matches the expected pattern", d.str());
}

// --- criterion 6: synthetic localization benchmark ----------------------------

void criterion_6() {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path work = fs::temp_directory_path() / "tattr_acceptance_bench";
  fs::remove_all(work);
  fs::create_directories(work);

  const int H = 16, W = 16, N = 500;
  const auto records = generate_synthetic_dataset(N, H, W, RngState{606, 0}, work.string());

  // Train the toy classifier on [0,1]-scaled pixels.
  std::vector<LabeledSample> dataset;
  for (const auto& rec : records) {
    const GrayImage img = read_pgm(rec.image_path);
    FeatureVector v(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) v[i] = img.pixels[i] / 255.0;
    dataset.emplace_back(std::move(v), rec.label);
  }
  const Network model = train_toy_classifier(dataset, {H * W, 8, 1}, RngState{607, 0}, 20, 0.05);
  const double accuracy = classification_accuracy(model, dataset);

  std::vector<MethodConfig> methods;
  for (const char* id : {"gradient_x_input", "integrated_gradients", "ig1", "ig2", "ig3"}) {
    MethodConfig mc;
    mc.id = id;
    mc.steps = 24;
    mc.sigma = 0.25;  // pixels are scaled to [0,1]
    mc.seed = 11;
    mc.num_baselines = 20;
    methods.push_back(std::move(mc));
  }
  EvalConfig cfg;
  cfg.pixel_scale = 1.0 / 255.0;
  const EvalReport eval = evaluate_methods(records, model, methods, cfg);

  bool emits = eval.samples_used > 100 && eval.summaries.size() == 5;
  for (const auto& s : eval.summaries) {
    emits = emits && s.mean_ratio.count(0.33) == 1 && s.mean_ratio.count(0.66) == 1;
    for (const auto& [alpha, mean] : s.mean_ratio) emits = emits && std::isfinite(mean);
  }
  const bool accounted = eval.samples_used + eval.samples_skipped == static_cast<int>(records.size());

  // Linear template sanity model: weights = box indicator.
  double template_total = 0.0;
  int template_count = 0;
  for (const auto& rec : records) {
    if (rec.label != 1 || template_count >= 50) continue;
    const GrayImage img = read_pgm(rec.image_path);
    FeatureVector v(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) v[i] = img.pixels[i];
    DenseLayer layer;
    layer.weights.resize(1, H * W);
    for (int r = 0; r < H; ++r)
      for (int c = 0; c < W; ++c) layer.weights(0, r * W + c) = rec.bbox.contains(r, c) ? 1.0 : 0.0;
    layer.bias = Eigen::VectorXd::Zero(1);
    layer.activation = Activation::identity;
    const Network tpl({layer});
    template_total += localization_accuracy(gradient_x_input(ModelFunction{tpl, 0}, v), rec.bbox, H, W);
    ++template_count;
  }
  const double template_mean = template_total / template_count;

  // Uniform random scores land at the coverage fraction in expectation.
  RngState rng{608, 0};
  const BBox box{4, 4, 12, 12};  // alpha = 0.25
  double random_total = 0.0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    FeatureVector s(H * W);
    for (int i = 0; i < s.size(); ++i) s[i] = next_uniform(rng);
    random_total += localization_accuracy(s, box, H, W);
  }
  const double random_mean = random_total / trials;
  const double elapsed = seconds_since(t0);

  std::ostringstream d;
  d << eval.samples_used << " samples evaluated (classifier accuracy " << accuracy << "); template ratio "
    << template_mean << " >= 0.9; uniform-random mean " << random_mean << " vs alpha 0.25; " << elapsed
    << " s";
  report(6,
         emits && accounted && template_mean >= 0.9 && std::abs(random_mean - 0.25) <= 0.03 &&
             elapsed < 300.0,
         "synthetic localization benchmark", d.str());
  fs::remove_all(work);
}

// --- criterion 7: determinism --------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void criterion_7() {
  const fs::path work = fs::temp_directory_path() / "tattr_acceptance_determinism";
  fs::remove_all(work);
  fs::create_directories(work);
  const fs::path input = work / "input.json";
  std::ofstream(input) << "[0.5, -1.5, 2.0, 0.25]";

  bool byte_identical = true;
  std::string how = "in-process";
#ifdef TATTR_CLI_PATH
  // Spawn the real binary twice per method and compare output bytes.
  how = "two subprocess runs";
  for (const char* method : {"ig2", "ig3"}) {
    for (int run = 0; run < 2; ++run) {
      std::ostringstream cmd;
      cmd << TATTR_CLI_PATH << " attribute --poly \"x1*x2 + x3^2 - x4\" --input " << input.string()
          << " --method " << method << " --sigma 63.75 --seed 7 --num-baselines 20 --steps 25 --out "
          << (work / (std::string(method) + "_" + std::to_string(run) + ".json")).string();
      if (std::system(cmd.str().c_str()) != 0) byte_identical = false;
    }
    byte_identical = byte_identical && slurp(work / (std::string(method) + "_0.json")) ==
                                           slurp(work / (std::string(method) + "_1.json")) &&
                     !slurp(work / (std::string(method) + "_0.json")).empty();
  }
#endif

  // ig3 with J=1 reproduces ig2 bit for bit.
  const ModelFunction f{parse_polynomial("x1*x2 + x3^2 - x4")};
  FeatureVector x(4);
  x << 0.5, -1.5, 2.0, 0.25;
  const AttributionResult a2 = ig2(f, x, 63.75, 7, 25);
  const AttributionResult a31 = ig3(f, x, 63.75, 7, 1, 25);
  const double diff = (a2.scores - a31.scores).cwiseAbs().maxCoeff();

  std::ostringstream d;
  d << how << " byte-identical; |ig3(J=1) - ig2| = " << diff << " <= 1e-12";
  report(7, byte_identical && diff <= 1e-12, "seeded attribution is deterministic", d.str());
  fs::remove_all(work);
}

// --- criterion 8: degenerate inputs --------------------------------------------

void criterion_8() {
  // Zero-displacement coordinates keep IG1/IG2 finite.
  const ModelFunction f{parse_polynomial("x1^2*x2 + x2^2")};
  FeatureVector x(2);
  x << 1.0, 2.0;
  FeatureVector baseline(2);
  baseline << 1.0, 0.0;  // delta_1 = 0
  const AttributionResult a1 = ig1(f, x, baseline, 50);
  bool finite = a1.scores.allFinite();

  bool ig2_finite = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const AttributionResult a2 = ig2(f, x, 0.5, seed, 30);
    ig2_finite = ig2_finite && a2.scores.allFinite();
  }

  // DeepLift hits an exactly-zero denominator; the stabilizer must fire,
  // be recorded, and never emit NaN.
  DenseLayer cancel;
  cancel.weights.resize(1, 2);
  cancel.weights << 1.0, -1.0;
  cancel.bias = Eigen::VectorXd::Zero(1);
  cancel.activation = Activation::identity;
  const Network net({cancel});
  const AttributionResult dl = deeplift_rescale(net, Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d::Zero());
  const bool stabilized = dl.stabilizer_events > 0 && dl.scores.allFinite();
  const bool recorded = dl.to_json().contains("stabilizer_events");

  std::ostringstream d;
  d << "ig1/ig2 finite at zero displacement: " << (finite && ig2_finite ? "yes" : "no")
    << "; deeplift stabilizer events " << dl.stabilizer_events << ", recorded in JSON, scores finite";
  report(8, finite && ig2_finite && stabilized && recorded, "degenerate inputs stay finite and recorded",
         d.str());
}

}  // namespace

int main() {
  std::cout << "acceptance suite\n";
  const auto t0 = std::chrono::steady_clock::now();
  try {
    criteria_1_and_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
  } catch (const std::exception& e) {
    std::cout << "[FAIL] unexpected exception: " << e.what() << std::endl;
    ++g_failures;
  }
  std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT") << " ("
            << seconds_since(t0) << " s total)" << std::endl;
  return g_failures == 0 ? 0 : 1;
}
