#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bookreel/catalog.hpp"
#include "bookreel/embedding.hpp"
#include "bookreel/retrieval.hpp"

namespace bookreel {

/// Alignment ids partitioned 60/20/20 within each movie.
struct Split {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
  std::uint64_t seed = 0;
  CueKind cue_kind = CueKind::dialog;

  friend bool operator==(const Split&, const Split&) = default;
};

inline constexpr double kTrainFraction = 0.6;
inline constexpr double kValidationFraction = 0.2;
inline constexpr std::size_t kMinPairsPerMovie = 5;

/// Seeded shuffle of each movie's pairs followed by a rounded 60/20/20 cut.
/// Movies without pairs of `cue_kind` are skipped; movies with fewer than
/// five throw ValidationError naming the movie.
Split make_split(const Catalog& catalog, CueKind cue_kind, std::uint64_t seed);

enum class MraVariant { all_same_movie, any_correct_movie };

std::string_view to_string(MraVariant v);
MraVariant parse_mra_variant(std::string_view s);

struct MraReport {
  ModelTag model = ModelTag::dialog;
  MraVariant variant = MraVariant::any_correct_movie;
  /// accuracy[k - 1] for k = 1..k_max.
  std::vector<double> accuracy;
  std::int64_t n_queries = 0;

  int k_max() const { return static_cast<int>(accuracy.size()); }
  double at(int k) const { return accuracy.at(static_cast<std::size_t>(k - 1)); }
};

/// A held-out book unit with its ground-truth movie.
struct EvalQuery {
  std::string id;
  MovieId movie;
  EmbeddingVector vector;
};

/// Distinct query units behind the test alignments, in id order.
std::vector<EvalQuery> test_queries(const Catalog& catalog, const EmbeddingStore& book_store,
                                    const Split& split, std::optional<UnitKind> unit_kind = {});

using RankFn = std::function<std::vector<ScoredMatch>(const Query&)>;

/// Runs each query in top_k(k) mode for k = 1..k_max. all_same_movie succeeds
/// when the returned list is non-empty and every result is from the query's
/// movie; any_correct_movie when at least one is. `ranked_out`, if given,
/// receives every query's top_k(k_max) list.
MraReport evaluate_mra(std::span<const EvalQuery> queries, const RankFn& rank, ModelTag model,
                       MraVariant variant, int k_max = 10,
                       std::optional<MovieId> scope = std::nullopt,
                       std::vector<ScoredMatch>* ranked_out = nullptr);

/// any non-decreasing and all non-increasing in k.
bool is_monotone(const MraReport& report);

/// `model,variant,k,accuracy,n_queries`, rows sorted by (model, variant, k).
std::string cmc_csv(std::span<const MraReport> reports);
void emit_cmc(std::span<const MraReport> reports, const std::filesystem::path& path);

struct EvalConfig {
  std::uint64_t seed = 1;
  CueKind cue_kind = CueKind::dialog;
  std::vector<MraVariant> variants{MraVariant::all_same_movie, MraVariant::any_correct_movie};
  int k_max = 10;
  std::optional<MovieId> scope;
  std::optional<UnitKind> unit_kind;

  friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

std::string eval_config_json(const EvalConfig& config);
EvalConfig parse_eval_config(std::string_view json);

}  // namespace bookreel
