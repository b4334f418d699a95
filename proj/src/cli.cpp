#include "tattr/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tattr/localization.hpp"
#include "tattr/model_io.hpp"
#include "tattr/reformulation.hpp"

namespace tattr {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

FeatureVector load_vector(const std::string& path, int* height = nullptr, int* width = nullptr) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".pgm") {
    const GrayImage img = read_pgm(path);
    if (height != nullptr) *height = img.height;
    if (width != nullptr) *width = img.width;
    FeatureVector x(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) x[i] = img.pixels[i];
    return x;
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("input vector " + path + ": " + e.what());
  }
  if (!doc.is_array()) throw ParseError("input vector " + path + " must be a JSON array of numbers");
  FeatureVector x(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (!doc[i].is_number()) throw ParseError("input vector " + path + ": element " + std::to_string(i));
    x[static_cast<int>(i)] = doc[i].get<double>();
  }
  return x;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path);
}

// Parses "zero", "constant:V", or a path to a JSON array / PGM file.
FeatureVector resolve_baseline(const std::string& spec, int n) {
  if (spec.empty() || spec == "zero") return FeatureVector::Zero(n);
  if (spec.rfind("constant:", 0) == 0) {
    try {
      return FeatureVector::Constant(n, std::stod(spec.substr(9)));
    } catch (const std::exception&) {
      throw ParseError("baseline \"" + spec + "\": expected constant:<number>");
    }
  }
  FeatureVector b = load_vector(spec);
  if (b.size() != n)
    throw ShapeError("baseline vector has length " + std::to_string(b.size()) + ", input has " +
                     std::to_string(n));
  return b;
}

struct AttributeArgs {
  std::string model_path;
  std::string poly_text;
  std::string input_path;
  std::string method;
  std::string baseline = "zero";
  std::string out_path;
  int output_index = 0;
  int steps = 50;
  double sigma = 63.75;
  std::uint64_t seed = 1;
  int num_baselines = 20;
  double epsilon = 0.01;
  double value = 0.0;
  int patch_rows = 0;
  int patch_cols = 0;
  bool midpoint = false;
  std::vector<double> clip;  // [lo, hi] for sampled baselines when given
};

ClipRange clip_range(const std::vector<double>& clip) {
  if (clip.empty()) return std::nullopt;
  return std::make_pair(clip[0], clip[1]);
}

int run_attribute(const AttributeArgs& args) {
  if (args.model_path.empty() == args.poly_text.empty())
    throw ParameterError("pass exactly one of --model or --poly");

  int height = 0, width = 0;
  const FeatureVector x = load_vector(args.input_path, &height, &width);
  const int n = static_cast<int>(x.size());

  std::optional<Network> net;
  std::optional<ModelFunction> fn;
  if (!args.model_path.empty()) {
    net = load_model(args.model_path);
    fn.emplace(*net, args.output_index);
  } else {
    fn.emplace(parse_polynomial(args.poly_text, n));
  }
  if (fn->dim() != n)
    throw ShapeError("model expects " + std::to_string(fn->dim()) + " features, input has " + std::to_string(n));

  AttributionResult result;
  const std::string& m = args.method;
  if (m == "gradient_x_input") {
    result = gradient_x_input(*fn, x);
  } else if (m == "perturbation_1") {
    result = perturbation_1(*fn, x, args.value);
  } else if (m == "perturbation_patch") {
    if (args.patch_rows < 1 || args.patch_cols < 1)
      throw ParameterError("perturbation_patch needs --patch-rows and --patch-cols");
    if (height == 0) throw ParameterError("grid patches need a PGM input image");
    result = perturbation_patch(*fn, x, PatchSpec::grid(height, width, args.patch_rows, args.patch_cols),
                                args.value);
  } else if (m == "deeplift_rescale") {
    if (!net) throw ParameterError("deeplift_rescale needs --model");
    result = deeplift_rescale(*net, x, resolve_baseline(args.baseline, n), args.output_index);
  } else if (m == "epsilon_lrp") {
    if (!net) throw ParameterError("epsilon_lrp needs --model");
    result = epsilon_lrp(*net, x, args.epsilon, args.output_index);
  } else if (m == "integrated_gradients") {
    result = integrated_gradients(*fn, x, resolve_baseline(args.baseline, n), args.steps, args.midpoint);
  } else if (m == "ig1") {
    result = ig1(*fn, x, resolve_baseline(args.baseline, n), args.steps, args.midpoint);
  } else if (m == "ig2") {
    result = ig2(*fn, x, args.sigma, args.seed, args.steps, args.midpoint, clip_range(args.clip));
  } else if (m == "ig3") {
    result = ig3(*fn, x, args.sigma, args.seed, args.num_baselines, args.steps, args.midpoint,
                 clip_range(args.clip));
  } else if (m == "exact_ig") {
    if (!fn->is_polynomial()) throw ParameterError("exact_ig needs --poly (a polynomial model)");
    result = exact_ig(*fn->polynomial(), x, resolve_baseline(args.baseline, n));
  } else {
    throw ParameterError("unknown method \"" + m + "\"");
  }

  const std::string text = result.to_json().dump(2) + "\n";
  if (args.out_path.empty())
    std::cout << text;
  else
    write_text(args.out_path, text);
  return 0;
}

int run_verify(std::uint64_t seed, int count, const std::string& json_path) {
  const SuiteReport report = run_reformulation_suite(seed, count);
  std::cout << report.format_table();
  if (!json_path.empty()) write_text(json_path, report.to_json().dump(2) + "\n");
  std::cout << (report.all_pass ? "all checks passed" : "CHECK FAILURES PRESENT") << "\n";
  return report.all_pass ? 0 : 1;
}

struct EvalArgs {
  std::string manifest_path;
  std::string model_path;
  std::vector<std::string> methods = {"gradient_x_input", "integrated_gradients", "ig1", "ig2", "ig3"};
  std::string out_json;
  std::string out_csv;
  int steps = 50;
  double sigma = 63.75;
  std::uint64_t seed = 1;
  int num_baselines = 20;
  double epsilon = 0.01;
  double pixel_scale = 1.0;
  int output_index = 0;
  bool rank_signed = false;
};

int run_eval(const EvalArgs& args) {
  if (!fs::exists(args.model_path)) throw IoError("model file not found: " + args.model_path);
  const Network model = load_model(args.model_path);
  const std::vector<ManifestRecord> manifest = read_manifest(args.manifest_path);

  std::vector<MethodConfig> methods;
  for (const std::string& id : args.methods) {
    MethodConfig mc;
    mc.id = id;
    mc.steps = args.steps;
    mc.sigma = args.sigma;
    mc.seed = args.seed;
    mc.num_baselines = args.num_baselines;
    mc.epsilon = args.epsilon;
    methods.push_back(std::move(mc));
  }
  EvalConfig cfg;
  cfg.pixel_scale = args.pixel_scale;
  cfg.rank_signed = args.rank_signed;
  cfg.output_index = args.output_index;

  const EvalReport report = evaluate_methods(manifest, model, methods, cfg);
  for (const MethodSummary& s : report.summaries) {
    std::cout << s.method << ":";
    for (const auto& [alpha, mean] : s.mean_ratio)
      std::cout << "  alpha<=" << alpha << " -> " << mean << " (" << s.sample_count.at(alpha) << " samples)";
    std::cout << "\n";
  }
  std::cout << "samples used " << report.samples_used << ", skipped " << report.samples_skipped << "\n";
  if (!args.out_json.empty()) write_text(args.out_json, report.to_json().dump(2) + "\n");
  if (!args.out_csv.empty()) write_text(args.out_csv, report.to_csv());
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Taylor-expansion feature attribution toolkit"};
  app.require_subcommand(1);

  AttributeArgs at;
  CLI::App* attribute = app.add_subcommand("attribute", "score features of one input");
  attribute->add_option("--model", at.model_path, "path to a .model.json network");
  attribute->add_option("--poly", at.poly_text, "polynomial literal, e.g. \"3*x1 + 2*x1*x2\"");
  attribute->add_option("--input", at.input_path, "input vector (.json array or .pgm image)")->required();
  attribute->add_option("--method", at.method, "attribution method id")->required();
  attribute->add_option("--baseline", at.baseline, "zero | constant:<v> | path (.json/.pgm)");
  attribute->add_option("--output-index", at.output_index, "explained network output");
  attribute->add_option("--steps", at.steps, "riemann steps m");
  attribute->add_option("--sigma", at.sigma, "gaussian displacement sigma (ig2/ig3)");
  attribute->add_option("--seed", at.seed, "sampling seed (ig2/ig3)");
  attribute->add_option("--num-baselines", at.num_baselines, "baseline count J (ig3)");
  attribute->add_option("--epsilon", at.epsilon, "lrp stabilizer");
  attribute->add_option("--value", at.value, "perturbation constant v");
  attribute->add_option("--patch-rows", at.patch_rows, "grid patch height (perturbation_patch)");
  attribute->add_option("--patch-cols", at.patch_cols, "grid patch width (perturbation_patch)");
  attribute->add_flag("--midpoint", at.midpoint, "midpoint riemann rule instead of right-endpoint");
  attribute->add_option("--clip", at.clip, "clip sampled baselines to [lo, hi] (ig2/ig3), e.g. --clip 0 255")
      ->expected(2);
  attribute->add_option("--out", at.out_path, "write the JSON result here instead of stdout");

  std::uint64_t verify_seed = 20240501;
  int verify_count = 100;
  std::string verify_json;
  CLI::App* verify = app.add_subcommand("verify", "run the reformulation verification suite");
  verify->add_option("--seed", verify_seed, "suite seed");
  verify->add_option("--count", verify_count, "instances per check");
  verify->add_option("--json", verify_json, "also write the report as JSON");

  EvalArgs ev;
  CLI::App* eval = app.add_subcommand("eval", "localization benchmark over a manifest");
  eval->add_option("--manifest", ev.manifest_path, "manifest.jsonl path")->required();
  eval->add_option("--model", ev.model_path, "path to a .model.json network")->required();
  eval->add_option("--methods", ev.methods, "method ids to evaluate");
  eval->add_option("--steps", ev.steps, "riemann steps m");
  eval->add_option("--sigma", ev.sigma, "gaussian displacement sigma");
  eval->add_option("--seed", ev.seed, "sampling seed");
  eval->add_option("--num-baselines", ev.num_baselines, "baseline count J (ig3)");
  eval->add_option("--epsilon", ev.epsilon, "lrp stabilizer");
  eval->add_option("--pixel-scale", ev.pixel_scale, "multiplier applied to pixel values");
  eval->add_option("--output-index", ev.output_index, "explained network output");
  eval->add_flag("--rank-signed", ev.rank_signed, "rank raw scores instead of |scores|");
  eval->add_option("--out-json", ev.out_json, "JSON report path");
  eval->add_option("--out-csv", ev.out_csv, "CSV per-sample rows path");

  int gen_count = 100;
  int gen_height = 16, gen_width = 16;
  std::uint64_t gen_seed = 7;
  std::string gen_dir = "dataset";
  std::string gen_model;
  int gen_epochs = 30;
  double gen_lr = 0.05;
  double gen_scale = 1.0 / 255.0;
  CLI::App* gen = app.add_subcommand("gen-data", "generate a synthetic localization dataset");
  gen->add_option("--count", gen_count, "number of samples");
  gen->add_option("--height", gen_height, "image height");
  gen->add_option("--width", gen_width, "image width");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out-dir", gen_dir, "output directory");
  gen->add_option("--with-model", gen_model, "also train a toy classifier on the data and save it here");
  gen->add_option("--train-epochs", gen_epochs, "epochs for --with-model");
  gen->add_option("--train-lr", gen_lr, "learning rate for --with-model");
  gen->add_option("--train-pixel-scale", gen_scale, "pixel scaling used during training");

  std::string export_attr;
  std::string export_out;
  int export_h = 0, export_w = 0;
  CLI::App* exp = app.add_subcommand("export", "render an attribution JSON as a PGM saliency map");
  exp->add_option("--attr", export_attr, "attribution JSON produced by `attribute`")->required();
  exp->add_option("--height", export_h, "image height")->required();
  exp->add_option("--width", export_w, "image width")->required();
  exp->add_option("--out", export_out, "output PGM path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits 0, usage errors exit 2
  }

  try {
    if (attribute->parsed()) return run_attribute(at);
    if (verify->parsed()) return run_verify(verify_seed, verify_count, verify_json);
    if (eval->parsed()) return run_eval(ev);
    if (gen->parsed()) {
      const std::vector<ManifestRecord> records =
          generate_synthetic_dataset(gen_count, gen_height, gen_width, RngState{gen_seed, 0}, gen_dir);
      std::cout << "wrote " << records.size() << " samples under " << gen_dir << "\n";
      if (!gen_model.empty()) {
        std::vector<LabeledSample> dataset;
        for (const ManifestRecord& rec : records) {
          const GrayImage img = read_pgm(rec.image_path);
          FeatureVector x(img.pixels.size());
          for (std::size_t i = 0; i < img.pixels.size(); ++i) x[i] = gen_scale * img.pixels[i];
          dataset.emplace_back(std::move(x), rec.label);
        }
        if (dataset.empty()) throw ParameterError("--with-model needs at least one sample");
        const int dim = gen_height * gen_width;
        const Network net =
            train_toy_classifier(dataset, {dim, 8, 1}, RngState{gen_seed + 1, 0}, gen_epochs, gen_lr);
        save_model(net, gen_model);
        std::cout << "trained toy classifier (accuracy " << classification_accuracy(net, dataset) << ") -> "
                  << gen_model << "\n";
      }
      return 0;
    }
    if (exp->parsed()) {
      std::ifstream in(export_attr, std::ios::binary);
      if (!in) throw IoError("cannot open attribution file " + export_attr);
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ParseError("attribution file " + export_attr + ": " + e.what());
      }
      if (!doc.contains("scores") || !doc["scores"].is_array())
        throw ParseError("attribution file " + export_attr + " has no \"scores\" array");
      AttributionResult attr;
      attr.scores.resize(doc["scores"].size());
      for (std::size_t i = 0; i < doc["scores"].size(); ++i)
        attr.scores[static_cast<int>(i)] = doc["scores"][i].get<double>();
      export_saliency(attr, export_h, export_w, export_out);
      std::cout << "wrote " << export_out << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace tattr
