#include <doctest.h>

#include "bookreel/error.hpp"
#include "bookreel/run_config.hpp"

using namespace bookreel;

TEST_CASE("defaults round trip") {
  const RunConfig c;
  CHECK(parse_run_config(run_config_json(c)) == c);
  CHECK(run_config_json(parse_run_config(run_config_json(c))) == run_config_json(c));
}

TEST_CASE("every field survives a round trip") {
  RunConfig c;
  c.paths.catalog_dir = "cat";
  c.paths.output_dir = "o";
  c.embedder.dim = 128;
  c.embedder.seed = 3;
  c.train.cue_kind = CueKind::visual;
  c.train.unit_kind = "sentence";
  c.train.hyperparams = Hyperparams{0.05, 200, 1e-3, 11};
  c.retrieval.model = "hybrid";
  c.retrieval.mode = "threshold";
  c.retrieval.threshold = 0.8;
  c.retrieval.scope = "movie_1";
  c.retrieval.scorer = "cosine";
  c.stitch = StitchConfig{250, 500, "/videos/{movie}.mkv"};
  c.evaluation.k_max = 5;
  c.evaluation.scope = MovieId("movie_1");
  CHECK(parse_run_config(run_config_json(c)) == c);
}

TEST_CASE("missing keys keep defaults") {
  const auto c = parse_run_config("{\"retrieval\": {\"top_k\": 3}}");
  CHECK(c.retrieval.top_k == 3);
  CHECK(c.retrieval.model == "dialog");
  CHECK(c.embedder.dim == 64);
}

TEST_CASE("malformed json is a validation error") {
  CHECK_THROWS_AS(parse_run_config("{not json"), ValidationError);
}
