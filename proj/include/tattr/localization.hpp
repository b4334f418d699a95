#pragma once

#include <map>
#include <string>
#include <vector>

#include "tattr/attribution.hpp"
#include "tattr/pgm.hpp"
#include "tattr/random.hpp"
#include "tattr/train.hpp"

namespace tattr {

/// Axis-aligned pixel box, inclusive-exclusive.
struct BBox {
  int row0 = 0;
  int col0 = 0;
  int row1 = 0;
  int col1 = 0;

  int area() const { return (row1 - row0) * (col1 - col0); }
  bool contains(int r, int c) const { return r >= row0 && r < row1 && c >= col0 && c < col1; }
  /// Throws ValidationError unless the box is non-empty and inside the grid.
  void validate(int height, int width) const;
  double coverage(int height, int width) const { return static_cast<double>(area()) / (height * width); }
};

struct ManifestRecord {
  std::string image_path;
  BBox bbox;
  int label = 0;
};

/// Line-delimited JSON manifest: {"image": ..., "bbox": [r0,c0,r1,c1], "label": 0|1}.
void write_manifest(const std::vector<ManifestRecord>& records, const std::string& path);
std::vector<ManifestRecord> read_manifest(const std::string& path);

/// Synthetic localization dataset: label-1 images carry a bright rectangle
/// (intensity around 200) over N(30,10^2) noise clipped to [0,255]; label-0
/// images are pure noise. Boxes are sized so coverage stays below 0.66.
/// Writes count PGM files plus manifest.jsonl into out_dir; byte-identical
/// across reruns with the same seed.
std::vector<ManifestRecord> generate_synthetic_dataset(int count, int height, int width, RngState rng,
                                                       const std::string& out_dir);

/// Localization accuracy m/n: select the top n = bbox area pixels by score
/// (absolute values by default, ties broken by ascending pixel index) and
/// return the fraction landing inside the box.
double localization_accuracy(const FeatureVector& scores, const BBox& bbox, int height, int width,
                             bool rank_absolute = true);
double localization_accuracy(const AttributionResult& attr, const BBox& bbox, int height, int width,
                             bool rank_absolute = true);

/// |scores| min-max normalized to [0,255] and written as binary PGM; constant
/// scores produce an all-zero image.
void export_saliency(const AttributionResult& attr, int height, int width, const std::string& path);

/// One attribution method invocation inside the evaluation harness.
struct MethodConfig {
  std::string id;
  int steps = 50;
  double sigma = 63.75;
  std::uint64_t seed = 1;
  int num_baselines = 20;
  double epsilon = 0.01;
  double v = 0.0;
  std::optional<PatchSpec> patches;
};

struct EvalConfig {
  std::vector<double> alpha_thresholds = {0.33, 0.66};
  double pixel_scale = 1.0;  // applied to pixel values before the model sees them
  bool rank_signed = false;  // rank raw scores instead of |scores|
  int output_index = 0;
};

struct SampleRow {
  std::string sample_id;
  std::string method;
  double alpha = 0.0;
  double ratio = 0.0;
};

struct MethodSummary {
  std::string method;
  std::map<double, double> mean_ratio;  // alpha threshold -> mean m/n
  std::map<double, int> sample_count;   // alpha threshold -> contributing samples
};

struct EvalReport {
  std::vector<SampleRow> rows;
  std::vector<MethodSummary> summaries;
  int samples_used = 0;
  int samples_skipped = 0;  // label-0, unreadable, or failed samples
  std::vector<std::string> skipped_reasons;

  nlohmann::json to_json() const;
  std::string to_csv() const;  // header + one row per (sample, method)
};

/// Runs each configured method on every label-1 manifest sample and reports
/// mean localization accuracy per alpha threshold. A method failure skips the
/// sample and records the reason; samples_used + samples_skipped equals the
/// manifest size.
EvalReport evaluate_methods(const std::vector<ManifestRecord>& manifest, const Network& model,
                            const std::vector<MethodConfig>& methods, const EvalConfig& cfg);

}  // namespace tattr
