#include <doctest.h>

#include <random>

#include "bookreel/error.hpp"
#include "bookreel/catalog.hpp"
#include "bookreel/retrieval.hpp"
#include "support/oracles.hpp"
#include "support/synth.hpp"

using namespace bookreel;

namespace {

struct Fixture {
  Catalog catalog = ingest(testing::fixture_corpus_inputs(BOOKREEL_FIXTURES "/corpus")).catalog;
  CatalogStores stores = embed_catalog(catalog, BaselineEmbedder());
  RetrievalEngine engine{catalog, stores.dialog, stores.story, cosine_scorer(), cosine_scorer()};

  Query query(const std::string& text, ShortlistMode mode = TopK{5}) const {
    return Query{"q", text, BaselineEmbedder().embed(text), mode, std::nullopt};
  }
};

ScoredMatch item(const std::string& shot, std::int64_t start, double raw) {
  ScoredMatch m;
  m.shot_id = shot;
  m.movie = MovieId("m");
  m.raw_score = raw;
  m.shot_start_ms = start;
  return m;
}

std::vector<testing::OracleItem> to_oracle(const std::vector<ScoredMatch>& list) {
  std::vector<testing::OracleItem> out;
  for (const auto& m : list) out.push_back({m.shot_id, m.shot_start_ms, m.raw_score});
  return out;
}

}  // namespace

TEST_CASE("fixture cue to shot map") {
  const Fixture f;
  const auto& map = f.engine.cue_map();
  CHECK(map.cue_to_shot.size() == 22);
  CHECK(map.dropped.size() == 2);
  const auto by_shot = map.cues_by_shot();
  CHECK(by_shot.at("f00") == std::vector<std::string>{"forest_tale:c000000", "forest_tale:c000001"});
  CHECK(by_shot.at("s05") == std::vector<std::string>{"sea_voyage:c000006"});
}

TEST_CASE("midpoint containment with half-open shots") {
  const MovieId m("m");
  const auto catalog = Catalog::assemble(
      {}, {},
      {SubtitleCue{"m:c000000", m, 1, 0, 1, "a"}, SubtitleCue{"m:c000001", m, 2, 500, 1500, "b"},
       SubtitleCue{"m:c000002", m, 3, 1998, 2001, "c"},
       SubtitleCue{"m:c000003", m, 4, 1999, 2001, "d"}},
      {Shot{"a", m, 0, 1000, std::nullopt}, Shot{"b", m, 1000, 2000, std::nullopt}}, {});
  const auto map = build_cue_shot_map(catalog);
  CHECK(*map.shot_for("m:c000000") == "a");
  CHECK(*map.shot_for("m:c000001") == "b");
  CHECK(*map.shot_for("m:c000002") == "b");
  CHECK(map.shot_for("m:c000003") == nullptr);
  CHECK(map.dropped == std::vector<std::string>{"m:c000003"});
}

TEST_CASE("a cue's own text retrieves its shot first") {
  const Fixture f;
  for (const auto& cue : f.catalog.cues()) {
    const std::string* shot = f.engine.cue_map().shot_for(cue.id);
    if (!shot) continue;
    const auto results = f.engine.run(f.query(cue.text), ModelTag::dialog);
    REQUIRE_FALSE(results.empty());
    CHECK(results[0].shot_id == *shot);
    CHECK(results[0].norm_score == 1.0);
    CHECK(results[0].raw_score == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(results[0].rank == 1);
  }
}

TEST_CASE("top-k larger than the candidate count is clamped") {
  const Fixture f;
  CHECK(f.engine.run(f.query("owl", TopK{1000}), ModelTag::dialog).size() == 20);
  CHECK(f.engine.run(f.query("owl", TopK{1000}), ModelTag::visual).size() == 14);
  CHECK(f.engine.run(f.query("owl", TopK{0}), ModelTag::dialog).empty());
}

TEST_CASE("disjoint vocabularies keep the top five in the query's movie") {
  const Fixture f;
  const std::string text = f.catalog.find_book_unit("forest_tale:p000000")->text + " " +
                           f.catalog.find_book_unit("forest_tale:p000001")->text;
  const auto q = f.query(text, TopK{5});
  const auto results = f.engine.run(q, ModelTag::dialog);
  REQUIRE(results.size() == 5);
  const auto oracle = testing::oracle_dialog_cosine(f.catalog, f.stores.dialog, q.vector);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(results[i].movie.str() == "forest_tale");
    CHECK(results[i].shot_id == oracle[i].first);
    CHECK(results[i].raw_score == doctest::Approx(oracle[i].second).epsilon(1e-9));
    CHECK(oracle[i].second > 0.0);
  }
}

TEST_CASE("dialog scores agree with the brute-force oracle") {
  const Fixture f;
  for (const auto* text : {"owl pine", "harbor gull rope storm", "nothing matches here", "fox"}) {
    const auto q = f.query(text, kAllCandidates);
    const auto results = f.engine.run(q, ModelTag::dialog);
    const auto oracle = testing::oracle_dialog_cosine(f.catalog, f.stores.dialog, q.vector);
    REQUIRE(results.size() == oracle.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
      CHECK(results[i].shot_id == oracle[i].first);
    }
  }
}

TEST_CASE("visual never returns story-less shots") {
  const Fixture f;
  const auto results = f.engine.run(f.query("owl", kAllCandidates), ModelTag::visual);
  for (const auto& r : results) CHECK(f.catalog.find_shot(r.shot_id)->story_text.has_value());
  std::string notice;
  const EmbeddingStore empty(64, "t");
  CHECK(query_visual(f.query("owl"), cosine_scorer(), empty, f.catalog, &notice).empty());
  CHECK(notice == "no visual candidates");
}

TEST_CASE("scope restricts every model") {
  const Fixture f;
  for (auto model : {ModelTag::dialog, ModelTag::visual, ModelTag::hybrid}) {
    auto q = f.query("owl harbor", kAllCandidates);
    q.scope = MovieId("sea_voyage");
    const auto results = f.engine.run(q, model);
    CHECK_FALSE(results.empty());
    for (const auto& r : results) CHECK(r.movie.str() == "sea_voyage");
  }
}

TEST_CASE("fusion worked example") {
  const std::vector<ScoredMatch> dialog{item("x", 0, 0.9), item("y", 10, 0.5), item("z", 20, 0.1)};
  const std::vector<ScoredMatch> visual{item("y", 10, 0.7), item("w", 5, 0.3)};
  const auto fused = fuse_hybrid(dialog, visual, kAllCandidates);
  REQUIRE(fused.size() == 4);
  CHECK(fused[0].shot_id == "y");
  CHECK(fused[0].raw_score == 1.5);
  CHECK(fused[0].norm_score == 0.75);
  CHECK(fused[1].shot_id == "x");
  CHECK(fused[1].raw_score == 1.0);
  CHECK(fused[2].shot_id == "w");
  CHECK(fused[3].shot_id == "z");
  CHECK(fused[3].rank == 4);
  CHECK(fused[3].model == ModelTag::hybrid);
}

TEST_CASE("fusion of single-element and empty lists") {
  const std::vector<ScoredMatch> one{item("x", 0, -3.0)};
  const auto fused = fuse_hybrid(one, {}, kAllCandidates);
  REQUIRE(fused.size() == 1);
  CHECK(fused[0].raw_score == 1.0);
  CHECK(fuse_hybrid({}, {}, kAllCandidates).empty());
}

TEST_CASE("fusion matches the naive oracle on random lists") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ScoredMatch> a;
    std::vector<ScoredMatch> b;
    for (int s = 0; s < 12; ++s) {
      const std::string id = "shot" + std::to_string(s);
      if (rng() % 3) a.push_back(item(id, s * 100, static_cast<double>(rng() % 7) / 7.0));
      if (rng() % 3) b.push_back(item(id, s * 100, static_cast<double>(rng() % 5) / 5.0));
    }
    const auto fused = fuse_hybrid(a, b, kAllCandidates);
    const auto oracle = testing::oracle_fuse(to_oracle(a), to_oracle(b));
    REQUIRE(fused.size() == oracle.size());
    for (std::size_t i = 0; i < fused.size(); ++i) {
      CHECK(fused[i].shot_id == oracle[i].first);
      CHECK(fused[i].raw_score == oracle[i].second);
      CHECK(fused[i].raw_score >= 0.0);
      CHECK(fused[i].raw_score <= 2.0);
    }
  }
}

TEST_CASE("top-k lists are prefixes of each other") {
  const Fixture f;
  for (auto model : {ModelTag::dialog, ModelTag::visual, ModelTag::hybrid}) {
    const auto full = f.engine.run(f.query("owl lantern harbor", kAllCandidates), model);
    for (int k = 1; k <= static_cast<int>(full.size()); ++k) {
      const auto top = f.engine.run(f.query("owl lantern harbor", TopK{k}), model);
      REQUIRE(top.size() == static_cast<std::size_t>(k));
      CHECK(std::equal(top.begin(), top.end(), full.begin()));
    }
  }
}

TEST_CASE("raising the threshold only removes results") {
  const Fixture f;
  for (auto model : {ModelTag::dialog, ModelTag::visual, ModelTag::hybrid}) {
    std::size_t previous = SIZE_MAX;
    for (double t = -1.0; t <= 2.0; t += 0.05) {
      const auto r = f.engine.run(f.query("owl pine moss", Threshold{t}), model);
      CHECK(r.size() <= previous);
      for (const auto& m : r) CHECK((model == ModelTag::hybrid ? m.norm_score : m.raw_score) >= t);
      previous = r.size();
    }
  }
}

TEST_CASE("query dimension must match the store") {
  const Fixture f;
  Query q{"q", "x", Eigen::VectorXf::Zero(3), TopK{5}, std::nullopt};
  CHECK_THROWS_AS(f.engine.run(q, ModelTag::dialog), DimensionError);
}

TEST_CASE("results jsonl round trip") {
  const Fixture f;
  auto results = f.engine.run(f.query("owl harbor", TopK{8}), ModelTag::hybrid);
  const auto text = results_jsonl(results);
  auto back = parse_results_jsonl(text);
  for (auto& r : results) r.shot_start_ms = 0;
  CHECK(back == results);
  CHECK(results_jsonl(back) == text);
  CHECK(text.find("\"query_id\":\"q\"") != std::string::npos);
}
