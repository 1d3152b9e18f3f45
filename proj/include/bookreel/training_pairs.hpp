#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bookreel/catalog.hpp"
#include "bookreel/embedding.hpp"
#include "bookreel/retrieval.hpp"
#include "bookreel/similarity.hpp"

namespace bookreel {

struct PairSamplingOptions {
  CueKind cue_kind = CueKind::dialog;
  /// Override of the aligned unit's granularity.
  std::optional<UnitKind> unit_kind;
  std::uint64_t seed = 0;
};

/// Positives pair each aligned book unit with its shot's partners: the cues
/// mapped into the shot (dialog) or the shot's story vector (visual). Every
/// positive draws one negative partner uniformly from other movies.
std::vector<LabeledPair> build_training_pairs(const Catalog& catalog, const CatalogStores& stores,
                                              const CueShotMap& map,
                                              std::span<const std::string> alignment_ids,
                                              const PairSamplingOptions& options);

}  // namespace bookreel
