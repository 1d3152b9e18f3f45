#include "bookreel/retrieval.hpp"

#include <algorithm>
#include <memory>
#include <unordered_map>

#include <json.hpp>

#include "bookreel/log.hpp"

namespace bookreel {
namespace {

struct Candidate {
  const Shot* shot;
  double raw;
};

bool ranks_before(double sa, std::int64_t ta, const std::string& ia, double sb, std::int64_t tb,
                  const std::string& ib) {
  if (sa != sb) return sa > sb;
  if (ta != tb) return ta < tb;
  return ia < ib;
}

void check_query_dim(const Query& q, const EmbeddingStore& store) {
  if (!store.empty() && q.vector.size() != store.dim()) {
    throw DimensionError("query vector dim " + std::to_string(q.vector.size()) +
                         " does not match store dim " + std::to_string(store.dim()));
  }
}

std::size_t shortlist_length(const std::vector<ScoredMatch>& sorted, const ShortlistMode& mode,
                             bool threshold_on_norm) {
  if (const auto* top = std::get_if<TopK>(&mode)) {
    return std::min(sorted.size(), static_cast<std::size_t>(std::max(top->k, 0)));
  }
  const double t = std::get<Threshold>(mode).t;
  std::size_t n = 0;
  while (n < sorted.size() &&
         (threshold_on_norm ? sorted[n].norm_score : sorted[n].raw_score) >= t) {
    ++n;
  }
  return n;
}

void finish(std::vector<ScoredMatch>& list, const ShortlistMode& mode, bool threshold_on_norm) {
  std::sort(list.begin(), list.end(), [](const ScoredMatch& a, const ScoredMatch& b) {
    return ranks_before(a.raw_score, a.shot_start_ms, a.shot_id, b.raw_score, b.shot_start_ms,
                        b.shot_id);
  });
  list.resize(shortlist_length(list, mode, threshold_on_norm));
  for (std::size_t i = 0; i < list.size(); ++i) list[i].rank = static_cast<int>(i + 1);
}

/// Min-max to [0, 1]; a constant list maps to 1.
std::vector<double> min_max(const std::vector<double>& xs) {
  if (xs.empty()) return {};
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  const double min = *lo;
  const double range = *hi - *lo;
  std::vector<double> out(xs.size(), 1.0);
  if (range > 0.0) {
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (xs[i] - min) / range;
  }
  return out;
}

std::vector<ScoredMatch> rank_single(const Query& q, ModelTag model,
                                     const std::vector<Candidate>& candidates) {
  std::vector<double> raw;
  raw.reserve(candidates.size());
  for (const auto& c : candidates) raw.push_back(c.raw);
  const std::vector<double> norm = min_max(raw);
  std::vector<ScoredMatch> list;
  list.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Shot& s = *candidates[i].shot;
    list.push_back(ScoredMatch{q.id, s.id, s.movie, model, raw[i], norm[i], 0, s.start_ms});
  }
  finish(list, q.mode, false);
  return list;
}

}  // namespace

std::string_view to_string(ModelTag tag) {
  switch (tag) {
    case ModelTag::dialog: return "dialog";
    case ModelTag::visual: return "visual";
    case ModelTag::hybrid: return "hybrid";
  }
  return "dialog";
}

ModelTag parse_model_tag(std::string_view s) {
  if (s == "dialog") return ModelTag::dialog;
  if (s == "visual") return ModelTag::visual;
  if (s == "hybrid") return ModelTag::hybrid;
  throw ValidationError("unknown model '" + std::string(s) + "' (dialog, visual, hybrid)");
}

std::map<std::string, std::vector<std::string>, std::less<>> CueShotMap::cues_by_shot() const {
  std::map<std::string, std::vector<std::string>, std::less<>> out;
  for (const auto& [cue, shot] : cue_to_shot) out[shot].push_back(cue);
  return out;
}

CueShotMap build_cue_shot_map(const Catalog& catalog) {
  std::map<MovieId, std::vector<const Shot*>> shots_by_movie;
  for (const auto& s : catalog.shots()) shots_by_movie[s.movie].push_back(&s);

  CueShotMap map;
  for (const auto& cue : catalog.cues()) {
    // Doubled coordinates keep the midpoint test exact for odd durations.
    const std::int64_t mid2 = cue.start_ms + cue.end_ms;
    const Shot* hit = nullptr;
    if (auto it = shots_by_movie.find(cue.movie); it != shots_by_movie.end()) {
      const auto& shots = it->second;
      auto after = std::upper_bound(shots.begin(), shots.end(), mid2,
                                    [](std::int64_t m, const Shot* s) { return m < 2 * s->start_ms; });
      if (after != shots.begin()) {
        const Shot* s = *std::prev(after);
        if (mid2 < 2 * s->end_ms) hit = s;
      }
    }
    if (hit != nullptr) {
      map.cue_to_shot.emplace(cue.id, hit->id);
    } else {
      log::warn("cue " + cue.id + " [" + std::to_string(cue.start_ms) + "," +
                std::to_string(cue.end_ms) + ") lies in no shot; dropped");
      map.dropped.push_back(cue.id);
    }
  }
  return map;
}

PairScorer cosine_scorer() {
  return [](const EmbeddingVector& a, const EmbeddingVector& b) { return cosine(a, b); };
}

PairScorer model_scorer(SimilarityModel model) {
  auto shared = std::make_shared<const SimilarityModel>(std::move(model));
  return [shared](const EmbeddingVector& a, const EmbeddingVector& b) {
    return score(*shared, a, b);
  };
}

std::vector<ScoredMatch> query_dialog(const Query& q, const PairScorer& scorer,
                                      const EmbeddingStore& dialog_store, const CueShotMap& map,
                                      const Catalog& catalog) {
  check_query_dim(q, dialog_store);
  std::unordered_map<std::string, std::size_t> slot;
  std::vector<Candidate> candidates;
  for (const auto& cue : catalog.cues()) {
    if (q.scope && cue.movie != *q.scope) continue;
    const std::string* shot_id = map.shot_for(cue.id);
    const EmbeddingVector* vec = dialog_store.find(cue.id);
    if (shot_id == nullptr || vec == nullptr) continue;
    const double s = scorer(q.vector, *vec);
    auto [it, inserted] = slot.emplace(*shot_id, candidates.size());
    if (inserted) {
      candidates.push_back(Candidate{catalog.find_shot(*shot_id), s});
    } else {
      candidates[it->second].raw = std::max(candidates[it->second].raw, s);
    }
  }
  return rank_single(q, ModelTag::dialog, candidates);
}

std::vector<ScoredMatch> query_visual(const Query& q, const PairScorer& scorer,
                                      const EmbeddingStore& story_store, const Catalog& catalog,
                                      std::string* notice) {
  if (story_store.empty()) {
    if (notice != nullptr) *notice = "no visual candidates";
    log::info("no visual candidates: story store is empty");
    return {};
  }
  check_query_dim(q, story_store);
  std::vector<Candidate> candidates;
  for (const auto& shot : catalog.shots()) {
    if (q.scope && shot.movie != *q.scope) continue;
    const EmbeddingVector* vec = story_store.find(shot.id);
    if (vec == nullptr) continue;
    candidates.push_back(Candidate{&shot, scorer(q.vector, *vec)});
  }
  if (candidates.empty() && notice != nullptr) *notice = "no visual candidates";
  return rank_single(q, ModelTag::visual, candidates);
}

std::vector<ScoredMatch> fuse_hybrid(std::span<const ScoredMatch> dialog_results,
                                     std::span<const ScoredMatch> visual_results,
                                     const ShortlistMode& mode) {
  std::map<std::string, ScoredMatch> fused;
  for (auto list : {dialog_results, visual_results}) {
    std::vector<double> raw;
    raw.reserve(list.size());
    for (const auto& m : list) raw.push_back(m.raw_score);
    const std::vector<double> norm = min_max(raw);
    for (std::size_t i = 0; i < list.size(); ++i) {
      auto [it, inserted] = fused.try_emplace(list[i].shot_id, list[i]);
      if (inserted) {
        it->second.model = ModelTag::hybrid;
        it->second.raw_score = norm[i];
      } else {
        it->second.raw_score += norm[i];
      }
    }
  }
  std::vector<ScoredMatch> out;
  out.reserve(fused.size());
  for (auto& [id, m] : fused) {
    m.norm_score = m.raw_score / 2.0;
    out.push_back(std::move(m));
  }
  finish(out, mode, true);
  return out;
}

RetrievalEngine::RetrievalEngine(const Catalog& catalog, const EmbeddingStore& dialog_store,
                                 const EmbeddingStore& story_store, PairScorer dialog_scorer,
                                 PairScorer visual_scorer)
    : catalog_(catalog),
      dialog_store_(dialog_store),
      story_store_(story_store),
      map_(build_cue_shot_map(catalog)),
      dialog_scorer_(std::move(dialog_scorer)),
      visual_scorer_(std::move(visual_scorer)) {}

std::vector<ScoredMatch> RetrievalEngine::run(const Query& q, ModelTag model) const {
  switch (model) {
    case ModelTag::dialog:
      return query_dialog(q, dialog_scorer_, dialog_store_, map_, catalog_);
    case ModelTag::visual:
      return query_visual(q, visual_scorer_, story_store_, catalog_);
    case ModelTag::hybrid: {
      Query all = q;
      all.mode = kAllCandidates;
      const auto d = query_dialog(all, dialog_scorer_, dialog_store_, map_, catalog_);
      const auto v = query_visual(all, visual_scorer_, story_store_, catalog_);
      return fuse_hybrid(d, v, q.mode);
    }
  }
  return {};
}

std::string results_jsonl(std::span<const ScoredMatch> results) {
  std::string out;
  for (const auto& m : results) {
    nlohmann::ordered_json j;
    j["query_id"] = m.query_id;
    j["shot_id"] = m.shot_id;
    j["movie"] = m.movie.str();
    j["model"] = to_string(m.model);
    j["raw_score"] = m.raw_score;
    j["norm_score"] = m.norm_score;
    j["rank"] = m.rank;
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<ScoredMatch> parse_results_jsonl(std::string_view text) {
  std::vector<ScoredMatch> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ScoredMatch m;
      m.query_id = j.at("query_id").get<std::string>();
      m.shot_id = j.at("shot_id").get<std::string>();
      m.movie = MovieId(j.at("movie").get<std::string>());
      m.model = parse_model_tag(j.at("model").get<std::string>());
      m.raw_score = j.at("raw_score").get<double>();
      m.norm_score = j.at("norm_score").get<double>();
      m.rank = j.at("rank").get<int>();
      out.push_back(std::move(m));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("results line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace bookreel
