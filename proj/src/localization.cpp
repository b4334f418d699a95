#include "tattr/localization.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace tattr {

using nlohmann::json;
namespace fs = std::filesystem;

void BBox::validate(int height, int width) const {
  if (row0 < 0 || col0 < 0 || row1 > height || col1 > width || row1 <= row0 || col1 <= col0)
    throw ValidationError("bounding box [" + std::to_string(row0) + "," + std::to_string(col0) + "," +
                          std::to_string(row1) + "," + std::to_string(col1) + ") does not fit a " +
                          std::to_string(height) + "x" + std::to_string(width) + " grid");
}

void write_manifest(const std::vector<ManifestRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (const ManifestRecord& rec : records) {
    json line;
    line["image"] = rec.image_path;
    line["bbox"] = {rec.bbox.row0, rec.bbox.col0, rec.bbox.row1, rec.bbox.col1};
    line["label"] = rec.label;
    out << line.dump() << "\n";
  }
  if (!out) throw IoError("failed writing " + path);
}

std::vector<ManifestRecord> read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest " + path);
  std::vector<ManifestRecord> records;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("manifest " + path + " line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!doc.contains("image") || !doc.contains("bbox") || !doc.contains("label") || !doc["bbox"].is_array() ||
        doc["bbox"].size() != 4)
      throw ParseError("manifest " + path + " line " + std::to_string(line_no) +
                       ": expected {\"image\", \"bbox\":[r0,c0,r1,c1], \"label\"}");
    ManifestRecord rec;
    rec.image_path = doc["image"].get<std::string>();
    rec.bbox = {doc["bbox"][0].get<int>(), doc["bbox"][1].get<int>(), doc["bbox"][2].get<int>(),
                doc["bbox"][3].get<int>()};
    rec.label = doc["label"].get<int>();
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<ManifestRecord> generate_synthetic_dataset(int count, int height, int width, RngState rng,
                                                       const std::string& out_dir) {
  if (count < 0) throw ParameterError("sample count must be >= 0");
  if (height < 8 || width < 8) throw ParameterError("synthetic images must be at least 8x8");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir + ": " + ec.message());

  auto clip255 = [](double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
  };

  std::vector<ManifestRecord> records;
  records.reserve(count);
  for (int s = 0; s < count; ++s) {
    const int label = static_cast<int>(next_below(rng, 2));
    // Box dims in [max(2, H/4), 2H/3]; max coverage (2/3)^2 < 0.66.
    const int min_h = std::max(2, height / 4), max_h = std::max(min_h, 2 * height / 3);
    const int min_w = std::max(2, width / 4), max_w = std::max(min_w, 2 * width / 3);
    const int bh = min_h + static_cast<int>(next_below(rng, max_h - min_h + 1));
    const int bw = min_w + static_cast<int>(next_below(rng, max_w - min_w + 1));
    const int r0 = static_cast<int>(next_below(rng, height - bh + 1));
    const int c0 = static_cast<int>(next_below(rng, width - bw + 1));
    const BBox box{r0, c0, r0 + bh, c0 + bw};

    GrayImage img;
    img.height = height;
    img.width = width;
    img.pixels.resize(static_cast<std::size_t>(height) * width);
    for (int r = 0; r < height; ++r)
      for (int c = 0; c < width; ++c) {
        const bool object = label == 1 && box.contains(r, c);
        const double v = object ? 200.0 + 10.0 * next_gaussian(rng) : 30.0 + 10.0 * next_gaussian(rng);
        img.pixels[r * width + c] = clip255(v);
      }

    std::ostringstream name;
    name << "img_" << std::setw(5) << std::setfill('0') << s << ".pgm";
    const std::string path = (fs::path(out_dir) / name.str()).string();
    write_pgm(img, path);
    records.push_back({path, box, label});
  }
  write_manifest(records, (fs::path(out_dir) / "manifest.jsonl").string());
  return records;
}

double localization_accuracy(const FeatureVector& scores, const BBox& bbox, int height, int width,
                             bool rank_absolute) {
  if (scores.size() != static_cast<long>(height) * width)
    throw ShapeError("scores length " + std::to_string(scores.size()) + " does not match " +
                     std::to_string(height) + "x" + std::to_string(width) + " grid");
  bbox.validate(height, width);
  const int total = height * width;
  const int n = bbox.area();
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  auto key = [&](int i) { return rank_absolute ? std::abs(scores[i]) : scores[i]; };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double ka = key(a), kb = key(b);
    if (ka != kb) return ka > kb;
    return a < b;  // deterministic tie-break by ascending pixel index
  });
  int inside = 0;
  for (int k = 0; k < n; ++k) {
    const int idx = order[k];
    if (bbox.contains(idx / width, idx % width)) ++inside;
  }
  return static_cast<double>(inside) / n;
}

double localization_accuracy(const AttributionResult& attr, const BBox& bbox, int height, int width,
                             bool rank_absolute) {
  return localization_accuracy(attr.scores, bbox, height, width, rank_absolute);
}

void export_saliency(const AttributionResult& attr, int height, int width, const std::string& path) {
  if (attr.scores.size() != static_cast<long>(height) * width)
    throw ShapeError("scores length does not match image dimensions");
  const FeatureVector mag = attr.scores.cwiseAbs();
  const double lo = mag.minCoeff();
  const double hi = mag.maxCoeff();
  GrayImage img;
  img.height = height;
  img.width = width;
  img.pixels.resize(static_cast<std::size_t>(height) * width, 0);
  if (hi > lo) {
    for (int i = 0; i < mag.size(); ++i)
      img.pixels[i] = static_cast<std::uint8_t>(std::lround(255.0 * (mag[i] - lo) / (hi - lo)));
  }
  write_pgm(img, path);
}

namespace {

AttributionResult run_method(const MethodConfig& mc, const ModelFunction& model, const Network& net,
                             const FeatureVector& x, const EvalConfig& cfg) {
  if (mc.id == "gradient_x_input") return gradient_x_input(model, x);
  if (mc.id == "perturbation_1") return perturbation_1(model, x, mc.v);
  if (mc.id == "perturbation_patch") {
    if (!mc.patches) throw ParameterError("perturbation_patch needs a patch layout");
    return perturbation_patch(model, x, *mc.patches, mc.v);
  }
  if (mc.id == "deeplift_rescale")
    return deeplift_rescale(net, x, FeatureVector::Zero(x.size()), cfg.output_index);
  if (mc.id == "epsilon_lrp") return epsilon_lrp(net, x, mc.epsilon, cfg.output_index);
  if (mc.id == "integrated_gradients")
    return integrated_gradients(model, x, FeatureVector::Zero(x.size()), mc.steps);
  if (mc.id == "ig1") return ig1(model, x, FeatureVector::Zero(x.size()), mc.steps);
  if (mc.id == "ig2") return ig2(model, x, mc.sigma, mc.seed, mc.steps);
  if (mc.id == "ig3") return ig3(model, x, mc.sigma, mc.seed, mc.num_baselines, mc.steps);
  throw ParameterError("unknown attribution method \"" + mc.id + "\"");
}

}  // namespace

json EvalReport::to_json() const {
  json doc;
  doc["samples_used"] = samples_used;
  doc["samples_skipped"] = samples_skipped;
  doc["skipped_reasons"] = skipped_reasons;
  json js = json::array();
  for (const MethodSummary& s : summaries) {
    json jm;
    jm["method"] = s.method;
    json by_alpha = json::array();
    for (const auto& [alpha, mean] : s.mean_ratio)
      by_alpha.push_back({{"alpha", alpha}, {"mean_ratio", mean}, {"samples", s.sample_count.at(alpha)}});
    jm["by_alpha"] = std::move(by_alpha);
    js.push_back(std::move(jm));
  }
  doc["methods"] = std::move(js);
  json jr = json::array();
  for (const SampleRow& r : rows)
    jr.push_back({{"sample_id", r.sample_id}, {"method", r.method}, {"alpha", r.alpha}, {"ratio", r.ratio}});
  doc["rows"] = std::move(jr);
  return doc;
}

std::string EvalReport::to_csv() const {
  std::ostringstream os;
  os << "sample_id,method,alpha,ratio\n";
  for (const SampleRow& r : rows) os << r.sample_id << "," << r.method << "," << r.alpha << "," << r.ratio << "\n";
  return os.str();
}

EvalReport evaluate_methods(const std::vector<ManifestRecord>& manifest, const Network& model,
                            const std::vector<MethodConfig>& methods, const EvalConfig& cfg) {
  EvalReport report;
  const ModelFunction fn{model, cfg.output_index};
  std::map<std::string, std::map<double, std::pair<double, int>>> sums;  // method -> alpha -> (sum, count)

  for (const ManifestRecord& rec : manifest) {
    if (rec.label != 1) {
      ++report.samples_skipped;
      report.skipped_reasons.push_back(rec.image_path + ": label 0 (no object to localize)");
      continue;
    }
    try {
      const GrayImage img = read_pgm(rec.image_path);
      if (static_cast<long>(img.height) * img.width != model.input_dim())
        throw ShapeError("image size " + std::to_string(img.height * img.width) +
                         " does not match model input dim " + std::to_string(model.input_dim()));
      rec.bbox.validate(img.height, img.width);
      FeatureVector x(img.pixels.size());
      for (std::size_t i = 0; i < img.pixels.size(); ++i) x[i] = cfg.pixel_scale * img.pixels[i];
      const double alpha = rec.bbox.coverage(img.height, img.width);

      // Run all methods first so a late failure skips the sample atomically.
      std::vector<std::pair<std::string, double>> ratios;
      for (const MethodConfig& mc : methods) {
        const AttributionResult attr = run_method(mc, fn, model, x, cfg);
        ratios.emplace_back(mc.id,
                            localization_accuracy(attr, rec.bbox, img.height, img.width, !cfg.rank_signed));
      }
      for (const auto& [method, ratio] : ratios) {
        report.rows.push_back({rec.image_path, method, alpha, ratio});
        for (double threshold : cfg.alpha_thresholds) {
          if (alpha <= threshold) {
            auto& [sum, cnt] = sums[method][threshold];
            sum += ratio;
            ++cnt;
          }
        }
      }
      ++report.samples_used;
    } catch (const Error& e) {
      ++report.samples_skipped;
      report.skipped_reasons.push_back(rec.image_path + ": " + e.what());
    }
  }

  for (const MethodConfig& mc : methods) {
    MethodSummary summary;
    summary.method = mc.id;
    for (double threshold : cfg.alpha_thresholds) {
      const auto& [sum, cnt] = sums[mc.id][threshold];
      summary.mean_ratio[threshold] = cnt > 0 ? sum / cnt : 0.0;
      summary.sample_count[threshold] = cnt;
    }
    report.summaries.push_back(std::move(summary));
  }
  return report;
}

}  // namespace tattr
