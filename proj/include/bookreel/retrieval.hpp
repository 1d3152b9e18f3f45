#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bookreel/catalog.hpp"
#include "bookreel/embedding.hpp"
#include "bookreel/similarity.hpp"

namespace bookreel {

enum class ModelTag { dialog, visual, hybrid };

std::string_view to_string(ModelTag tag);
ModelTag parse_model_tag(std::string_view s);

/// Keep the best `k` shots (clamped to the candidate count).
struct TopK {
  int k = 10;
};
/// Keep shots whose score reaches `t`: the raw score for dialog and visual
/// lists, the normalized fused score for hybrid lists.
struct Threshold {
  double t = 0.5;
};
using ShortlistMode = std::variant<TopK, Threshold>;

inline constexpr TopK kAllCandidates{std::numeric_limits<int>::max()};

struct Query {
  std::string id;
  std::string text;
  EmbeddingVector vector;
  ShortlistMode mode = TopK{};
  /// nullopt searches every movie.
  std::optional<MovieId> scope;
};

struct ScoredMatch {
  std::string query_id;
  std::string shot_id;
  MovieId movie;
  ModelTag model = ModelTag::dialog;
  double raw_score = 0.0;
  double norm_score = 0.0;
  int rank = 0;
  /// Tie-break key; not serialized.
  std::int64_t shot_start_ms = 0;

  friend bool operator==(const ScoredMatch&, const ScoredMatch&) = default;
};

/// Cue to shot correspondence: a cue belongs to the shot containing its midpoint.
struct CueShotMap {
  std::map<std::string, std::string, std::less<>> cue_to_shot;
  std::vector<std::string> dropped;

  const std::string* shot_for(std::string_view cue_id) const {
    auto it = cue_to_shot.find(cue_id);
    return it == cue_to_shot.end() ? nullptr : &it->second;
  }
  /// Cue ids per shot, in cue order.
  std::map<std::string, std::vector<std::string>, std::less<>> cues_by_shot() const;
};

CueShotMap build_cue_shot_map(const Catalog& catalog);

/// Scores a (query, candidate) vector pair; higher is more similar.
using PairScorer = std::function<double(const EmbeddingVector&, const EmbeddingVector&)>;

PairScorer cosine_scorer();
PairScorer model_scorer(SimilarityModel model);

/// Scores the query against every in-scope cue and keeps, per shot, the best
/// cue score. Ranked by (score desc, start_ms asc, shot id asc).
std::vector<ScoredMatch> query_dialog(const Query& q, const PairScorer& scorer,
                                      const EmbeddingStore& dialog_store, const CueShotMap& map,
                                      const Catalog& catalog);

/// Same contract over shots that carry a story vector. `notice` receives
/// "no visual candidates" when the store is empty.
std::vector<ScoredMatch> query_visual(const Query& q, const PairScorer& scorer,
                                      const EmbeddingStore& story_store, const Catalog& catalog,
                                      std::string* notice = nullptr);

/// Min-max normalizes each list (constant or single-element lists map to 1),
/// sums per shot with 0 for a missing modality and ranks the sum. The fused
/// list's norm_score is the sum halved.
std::vector<ScoredMatch> fuse_hybrid(std::span<const ScoredMatch> dialog_results,
                                     std::span<const ScoredMatch> visual_results,
                                     const ShortlistMode& mode);

/// Bundles everything a query needs; all members are read-only after construction.
class RetrievalEngine {
 public:
  RetrievalEngine(const Catalog& catalog, const EmbeddingStore& dialog_store,
                  const EmbeddingStore& story_store, PairScorer dialog_scorer,
                  PairScorer visual_scorer);

  std::vector<ScoredMatch> run(const Query& q, ModelTag model) const;
  const CueShotMap& cue_map() const { return map_; }

 private:
  const Catalog& catalog_;
  const EmbeddingStore& dialog_store_;
  const EmbeddingStore& story_store_;
  CueShotMap map_;
  PairScorer dialog_scorer_;
  PairScorer visual_scorer_;
};

/// One JSON object per line: query_id, shot_id, movie, model, raw_score, norm_score, rank.
std::string results_jsonl(std::span<const ScoredMatch> results);
std::vector<ScoredMatch> parse_results_jsonl(std::string_view text);

}  // namespace bookreel
