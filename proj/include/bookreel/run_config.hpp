#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "bookreel/evaluation.hpp"
#include "bookreel/similarity.hpp"

namespace bookreel {

struct RunPaths {
  std::string catalog_dir = "catalog";
  std::string store_dir = "stores";
  std::string dialog_model = "models/dialog.json";
  std::string visual_model = "models/visual.json";
  std::string output_dir = "out";

  friend bool operator==(const RunPaths&, const RunPaths&) = default;
};

struct EmbedderConfig {
  std::string name = "baseline";
  int dim = 64;
  std::uint64_t seed = 7;

  friend bool operator==(const EmbedderConfig&, const EmbedderConfig&) = default;
};

struct TrainConfig {
  CueKind cue_kind = CueKind::dialog;
  /// Empty means the aligned unit's own kind.
  std::string unit_kind;
  Hyperparams hyperparams{0.1, 500, 1e-4, 1};

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct RetrievalConfig {
  std::string model = "dialog";
  /// "top_k" or "threshold".
  std::string mode = "top_k";
  int top_k = 10;
  double threshold = 0.5;
  /// "all" or a movie id.
  std::string scope = "all";
  /// "model" (trained classifier) or "cosine".
  std::string scorer = "model";

  friend bool operator==(const RetrievalConfig&, const RetrievalConfig&) = default;
};

struct StitchConfig {
  std::int64_t pad_ms = 0;
  std::int64_t gap_merge_ms = 0;
  std::string video_template = "{movie}.mp4";

  friend bool operator==(const StitchConfig&, const StitchConfig&) = default;
};

/// Everything a CLI invocation can be configured with; JSON round-trips losslessly.
struct RunConfig {
  RunPaths paths;
  EmbedderConfig embedder;
  TrainConfig train;
  RetrievalConfig retrieval;
  StitchConfig stitch;
  EvalConfig evaluation;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

std::string run_config_json(const RunConfig& config);
/// Missing keys keep their defaults.
RunConfig parse_run_config(std::string_view json);

}  // namespace bookreel
