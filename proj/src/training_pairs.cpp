#include "bookreel/training_pairs.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <unordered_map>

#include "bookreel/random.hpp"

namespace bookreel {

std::vector<LabeledPair> build_training_pairs(const Catalog& catalog, const CatalogStores& stores,
                                              const CueShotMap& map,
                                              std::span<const std::string> alignment_ids,
                                              const PairSamplingOptions& options) {
  const bool dialog = options.cue_kind == CueKind::dialog;
  const EmbeddingStore& partner_store = dialog ? stores.dialog : stores.story;

  // Partner ids per movie, sorted, restricted to ids with vectors.
  std::map<MovieId, std::vector<std::string>> partners_by_movie;
  if (dialog) {
    for (const auto& cue : catalog.cues()) {
      if (map.shot_for(cue.id) != nullptr && partner_store.find(cue.id) != nullptr) {
        partners_by_movie[cue.movie].push_back(cue.id);
      }
    }
  } else {
    for (const auto& shot : catalog.shots()) {
      if (partner_store.find(shot.id) != nullptr) partners_by_movie[shot.movie].push_back(shot.id);
    }
  }
  for (auto& [m, ids] : partners_by_movie) std::sort(ids.begin(), ids.end());
  const auto cues_by_shot = map.cues_by_shot();

  std::unordered_map<std::string, const AlignmentPair*> by_id;
  for (const auto& a : catalog.alignments()) by_id.emplace(a.id(), &a);

  std::vector<std::string> ids(alignment_ids.begin(), alignment_ids.end());
  std::sort(ids.begin(), ids.end());

  std::mt19937_64 rng(options.seed);
  std::vector<LabeledPair> out;
  for (const auto& aid : ids) {
    auto found = by_id.find(aid);
    if (found == by_id.end()) throw ValidationError("unknown alignment id '" + aid + "'");
    const AlignmentPair& pair = *found->second;
    if (pair.cue_kind != options.cue_kind) continue;
    const BookUnit& unit = *catalog.find_book_unit(pair.book_unit);
    const Shot& shot = *catalog.find_shot(pair.shot);

    std::vector<std::string> partners;
    if (dialog) {
      if (auto it = cues_by_shot.find(shot.id); it != cues_by_shot.end()) {
        for (const auto& c : it->second) {
          if (partner_store.find(c) != nullptr) partners.push_back(c);
        }
      }
    } else if (partner_store.find(shot.id) != nullptr) {
      partners.push_back(shot.id);
    }

    std::vector<const std::string*> negatives_pool;
    for (const auto& [m, pids] : partners_by_movie) {
      if (m == unit.movie) continue;
      for (const auto& p : pids) negatives_pool.push_back(&p);
    }

    for (const auto& uid : resolve_units(catalog, unit, options.unit_kind)) {
      const EmbeddingVector* bvec = stores.book.find(uid);
      if (bvec == nullptr) continue;
      for (const auto& p : partners) {
        out.push_back(LabeledPair{*bvec, partner_store.at(p), PairLabel::match,
                                  "pos|" + aid + "|" + uid + "|" + p});
        if (negatives_pool.empty()) continue;
        const std::string& neg = *negatives_pool[uniform_index(rng, negatives_pool.size())];
        out.push_back(LabeledPair{*bvec, partner_store.at(neg), PairLabel::non_match,
                                  "neg|" + aid + "|" + uid + "|" + p + "|" + neg});
      }
    }
  }
  return out;
}

}  // namespace bookreel
