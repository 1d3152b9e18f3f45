#include "bookreel/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>

#include <json.hpp>

#include "bookreel/hash.hpp"
#include "bookreel/random.hpp"

namespace bookreel {

Split make_split(const Catalog& catalog, CueKind cue_kind, std::uint64_t seed) {
  std::map<MovieId, std::vector<std::string>> by_movie;
  for (const auto& a : catalog.alignments()) {
    if (a.cue_kind != cue_kind) continue;
    by_movie[catalog.find_shot(a.shot)->movie].push_back(a.id());
  }
  Split split;
  split.seed = seed;
  split.cue_kind = cue_kind;
  for (auto& [movie, ids] : by_movie) {
    if (ids.size() < kMinPairsPerMovie) {
      throw ValidationError("movie '" + movie.str() + "' has only " + std::to_string(ids.size()) +
                            " " + std::string(to_string(cue_kind)) +
                            " alignments; need at least 5 to split");
    }
    std::sort(ids.begin(), ids.end());
    // Per-movie stream so adding a movie never reshuffles another.
    const std::uint64_t salt = fnv1a64(movie.str());
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
    std::mt19937_64 rng(seq);
    seeded_shuffle(ids, rng);
    const double n = static_cast<double>(ids.size());
    const auto n_train = static_cast<std::size_t>(std::floor(kTrainFraction * n + 0.5));
    const auto n_val = static_cast<std::size_t>(std::floor(kValidationFraction * n + 0.5));
    split.train.insert(split.train.end(), ids.begin(), ids.begin() + n_train);
    split.validation.insert(split.validation.end(), ids.begin() + n_train,
                            ids.begin() + n_train + n_val);
    split.test.insert(split.test.end(), ids.begin() + n_train + n_val, ids.end());
  }
  return split;
}

std::string_view to_string(MraVariant v) {
  return v == MraVariant::all_same_movie ? "all_same_movie" : "any_correct_movie";
}

MraVariant parse_mra_variant(std::string_view s) {
  if (s == "all_same_movie" || s == "all") return MraVariant::all_same_movie;
  if (s == "any_correct_movie" || s == "any") return MraVariant::any_correct_movie;
  throw ValidationError("unknown MRA variant '" + std::string(s) + "'");
}

std::vector<EvalQuery> test_queries(const Catalog& catalog, const EmbeddingStore& book_store,
                                    const Split& split, std::optional<UnitKind> unit_kind) {
  std::set<std::string> wanted(split.test.begin(), split.test.end());
  std::map<std::string, MovieId> units;
  for (const auto& a : catalog.alignments()) {
    if (!wanted.count(a.id())) continue;
    const BookUnit& u = *catalog.find_book_unit(a.book_unit);
    for (const auto& id : resolve_units(catalog, u, unit_kind)) units.emplace(id, u.movie);
  }
  std::vector<EvalQuery> out;
  for (const auto& [id, movie] : units) {
    const EmbeddingVector* v = book_store.find(id);
    if (v == nullptr) throw ValidationError("book store has no vector for query unit '" + id + "'");
    out.push_back(EvalQuery{id, movie, *v});
  }
  return out;
}

MraReport evaluate_mra(std::span<const EvalQuery> queries, const RankFn& rank, ModelTag model,
                       MraVariant variant, int k_max, std::optional<MovieId> scope,
                       std::vector<ScoredMatch>* ranked_out) {
  if (queries.empty()) throw ValidationError("evaluation needs a non-empty test split");
  if (k_max < 1) throw ValidationError("k_max must be >= 1");
  std::vector<std::int64_t> successes(static_cast<std::size_t>(k_max), 0);
  for (const auto& eq : queries) {
    Query q{eq.id, {}, eq.vector, TopK{1}, scope};
    for (int k = 1; k <= k_max; ++k) {
      q.mode = TopK{k};
      const auto results = rank(q);
      const auto correct = static_cast<std::size_t>(std::count_if(
          results.begin(), results.end(), [&](const ScoredMatch& m) { return m.movie == eq.movie; }));
      const bool ok = variant == MraVariant::any_correct_movie
                          ? correct > 0
                          : (!results.empty() && correct == results.size());
      if (ok) ++successes[static_cast<std::size_t>(k - 1)];
      if (k == k_max && ranked_out != nullptr) {
        ranked_out->insert(ranked_out->end(), results.begin(), results.end());
      }
    }
  }
  MraReport report;
  report.model = model;
  report.variant = variant;
  report.n_queries = static_cast<std::int64_t>(queries.size());
  for (auto s : successes) {
    report.accuracy.push_back(static_cast<double>(s) / static_cast<double>(report.n_queries));
  }
  return report;
}

bool is_monotone(const MraReport& r) {
  for (std::size_t i = 1; i < r.accuracy.size(); ++i) {
    if (r.variant == MraVariant::any_correct_movie && r.accuracy[i] < r.accuracy[i - 1]) return false;
    if (r.variant == MraVariant::all_same_movie && r.accuracy[i] > r.accuracy[i - 1]) return false;
  }
  return true;
}

std::string cmc_csv(std::span<const MraReport> reports) {
  if (!reports.empty()) {
    for (const auto& r : reports) {
      if (r.k_max() != reports.front().k_max()) {
        throw ValidationError("CMC reports disagree on k range");
      }
    }
  }
  std::vector<const MraReport*> sorted;
  for (const auto& r : reports) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(), [](const MraReport* a, const MraReport* b) {
    return std::pair(to_string(a->model), to_string(a->variant)) <
           std::pair(to_string(b->model), to_string(b->variant));
  });
  std::string out = "model,variant,k,accuracy,n_queries\n";
  char buf[128];
  for (const MraReport* r : sorted) {
    for (int k = 1; k <= r->k_max(); ++k) {
      std::snprintf(buf, sizeof buf, "%s,%s,%d,%.6f,%lld\n", std::string(to_string(r->model)).c_str(),
                    std::string(to_string(r->variant)).c_str(), k, r->at(k),
                    static_cast<long long>(r->n_queries));
      out += buf;
    }
  }
  return out;
}

void emit_cmc(std::span<const MraReport> reports, const std::filesystem::path& path) {
  write_file(path, cmc_csv(reports));
}

std::string eval_config_json(const EvalConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["cue_kind"] = to_string(c.cue_kind);
  std::vector<std::string> variants;
  for (auto v : c.variants) variants.emplace_back(to_string(v));
  j["variants"] = variants;
  j["k_max"] = c.k_max;
  j["scope"] = c.scope ? nlohmann::ordered_json(c.scope->str()) : nlohmann::ordered_json("all");
  j["unit_kind"] = c.unit_kind ? nlohmann::ordered_json(to_string(*c.unit_kind))
                               : nlohmann::ordered_json("aligned");
  return j.dump(2) + "\n";
}

namespace {

EvalConfig eval_config_from(const nlohmann::json& j) {
  EvalConfig c;
  c.seed = j.value("seed", c.seed);
  if (j.contains("cue_kind")) c.cue_kind = parse_cue_kind(j.at("cue_kind").get<std::string>());
  if (j.contains("variants")) {
    c.variants.clear();
    for (const auto& v : j.at("variants")) c.variants.push_back(parse_mra_variant(v.get<std::string>()));
  } else if (j.contains("variant")) {
    c.variants = {parse_mra_variant(j.at("variant").get<std::string>())};
  }
  c.k_max = j.value("k_max", c.k_max);
  const std::string scope = j.value("scope", std::string("all"));
  if (scope != "all") c.scope = MovieId(scope);
  const std::string unit = j.value("unit_kind", std::string("aligned"));
  if (unit != "aligned") c.unit_kind = parse_unit_kind(unit);
  return c;
}

}  // namespace

EvalConfig parse_eval_config(std::string_view text) {
  try {
    return eval_config_from(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("eval config: ") + e.what());
  }
}

}  // namespace bookreel
