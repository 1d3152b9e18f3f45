#include <doctest.h>

#include <random>

#include "bookreel/error.hpp"
#include "bookreel/catalog.hpp"
#include "bookreel/embedding.hpp"
#include "bookreel/hash.hpp"
#include "support/synth.hpp"

using namespace bookreel;

TEST_CASE("fnv1a reference values") {
  // Published FNV-1a 64 test vectors.
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("tokenizer") {
  CHECK(tokenize("Hello, World! it's 42") ==
        std::vector<std::string>{"hello", "world", "it", "s", "42"});
  CHECK(tokenize("  ...  ").empty());
  CHECK(tokenize("caf\xC3\xA9 ok") == std::vector<std::string>{"caf\xC3\xA9", "ok"});
}

TEST_CASE("frozen baseline vector") {
  const auto v = baseline_embed("quidditch match", 8, 7);
  const std::vector<float> want{0.0f, -0.70710677f, 0.0f, -0.70710677f, 0.0f, 0.0f, 0.0f, 0.0f};
  REQUIRE(v.size() == 8);
  for (int i = 0; i < 8; ++i) CHECK(v[i] == want[static_cast<std::size_t>(i)]);
}

TEST_CASE("no tokens gives the zero vector") {
  const auto v = baseline_embed("?! ...", 16, 7);
  CHECK(v.size() == 16);
  CHECK(v.isZero());
}

TEST_CASE("case and punctuation do not matter") {
  CHECK(baseline_embed("The Owl, the PINE.", 32, 3) == baseline_embed("the owl the pine", 32, 3));
}

TEST_CASE("vectors are unit length") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    const int words = 1 + static_cast<int>(rng() % 30);
    for (int w = 0; w < words; ++w) text += "w" + std::to_string(rng() % 50) + " ";
    const auto v = baseline_embed(text, 64, rng());
    const double n = v.cast<double>().norm();
    CHECK(n == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("seed changes the vector, name round-trips") {
  CHECK(baseline_embed("owl pine moss", 64, 1) != baseline_embed("owl pine moss", 64, 2));
  BaselineEmbedder e(32, 5);
  CHECK(e.name() == "baseline-fnv1a/dim=32/seed=5");
  auto back = embedder_from_tag(e.name());
  REQUIRE(back);
  CHECK(back->dim() == 32);
  CHECK(back->embed("owl") == e.embed("owl"));
  CHECK(embedder_from_tag("sentence-transformers/all-MiniLM") == nullptr);
}

TEST_CASE("store validation") {
  EmbeddingStore store(4, "t");
  store.insert("a", Eigen::VectorXf::Ones(4));
  CHECK_THROWS_AS(store.insert("b", Eigen::VectorXf::Ones(3)), DimensionError);
  CHECK_THROWS_AS(store.insert("a", Eigen::VectorXf::Ones(4)), ValidationError);
  Eigen::VectorXf bad = Eigen::VectorXf::Zero(4);
  bad[2] = std::numeric_limits<float>::quiet_NaN();
  CHECK_THROWS_AS(store.insert("c", bad), ValidationError);
  CHECK_THROWS_AS(store.at("zzz"), ValidationError);
  CHECK(store.find("a") != nullptr);
}

TEST_CASE("catalog embedding covers units, cues and storied shots") {
  const auto catalog =
      ingest(testing::fixture_corpus_inputs(BOOKREEL_FIXTURES "/corpus")).catalog;
  const auto stores = embed_catalog(catalog, BaselineEmbedder());
  CHECK(stores.book.size() == 72);
  CHECK(stores.dialog.size() == 24);
  CHECK(stores.story.size() == 14);
  CHECK(stores.book.dim() == 64);
  CHECK(stores.story.find("f07") == nullptr);
  CHECK(stores.book.source_tag() == "baseline-fnv1a/dim=64/seed=7");
}
