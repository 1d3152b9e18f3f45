#include <doctest.h>

#include "bookreel/error.hpp"
#include "bookreel/catalog.hpp"
#include "support/synth.hpp"

using namespace bookreel;
using bookreel::testing::TempDir;

namespace {

Shot shot(const std::string& id, std::int64_t s, std::int64_t e) {
  return Shot{id, MovieId("m"), s, e, std::nullopt};
}

BookUnit sentence(std::int64_t ordinal, std::string text) {
  return BookUnit{book_unit_id(MovieId("m"), UnitKind::sentence, ordinal), MovieId("m"),
                  UnitKind::sentence, ordinal, 0, std::move(text)};
}

}  // namespace

TEST_CASE("fixture corpus statistics") {
  const auto result = ingest(testing::fixture_corpus_inputs(BOOKREEL_FIXTURES "/corpus"));
  const auto stats = result.catalog.stats();
  CHECK(stats.movies == 2);
  CHECK(stats.totals.sentences == 60);
  CHECK(stats.totals.paragraphs == 12);
  CHECK(stats.totals.shots == 20);
  CHECK(stats.totals.cues == 24);
  CHECK(stats.totals.dialog_aligns == 12);
  CHECK(stats.totals.visual_aligns == 6);
  REQUIRE(stats.per_movie.size() == 2);
  CHECK(stats.per_movie[0].movie.str() == "forest_tale");
  CHECK(stats.per_movie[0].sentences == 30);
  CHECK(stats.per_movie[1].cues == 12);
  CHECK(result.catalog.find_book_unit("sea_voyage:p000005") != nullptr);
  CHECK(result.catalog.find_shot("f03")->start_ms == 30000);
}

TEST_CASE("empty ingest gives an empty catalog") {
  const auto result = ingest(IngestInputs{});
  CHECK(result.catalog.movies().empty());
  CHECK(result.catalog.stats().totals.sentences == 0);
}

TEST_CASE("checksum is deterministic and content sensitive") {
  const auto a = ingest(testing::fixture_corpus_inputs(BOOKREEL_FIXTURES "/corpus")).catalog;
  const auto b = ingest(testing::fixture_corpus_inputs(BOOKREEL_FIXTURES "/corpus")).catalog;
  CHECK(a.checksum() == b.checksum());
  CHECK(a.checksum_hex().size() == 16);

  auto shots = a.shots();
  shots[0].end_ms -= 1;
  const auto c = Catalog::assemble({}, a.book_units(), a.cues(), shots, a.alignments());
  CHECK(c.checksum() != a.checksum());
}

TEST_CASE("write and read back") {
  TempDir dir;
  const auto a = ingest(testing::fixture_corpus_inputs(BOOKREEL_FIXTURES "/corpus")).catalog;
  write_catalog(a, dir.path());
  const auto b = read_catalog(dir.path());
  CHECK(b.checksum() == a.checksum());
  CHECK(b.book_units() == a.book_units());
  CHECK(b.cues() == a.cues());
  CHECK(b.shots() == a.shots());
  CHECK(b.alignments() == a.alignments());
}

TEST_CASE("tampered catalog fails its checksum") {
  TempDir dir;
  const auto a = ingest(testing::fixture_corpus_inputs(BOOKREEL_FIXTURES "/corpus")).catalog;
  write_catalog(a, dir.path());
  auto shots = read_file(dir / "shots.jsonl");
  shots.replace(shots.find("8000"), 4, "7999");
  write_file(dir / "shots.jsonl", shots);
  CHECK_THROWS_AS(read_catalog(dir.path()), ValidationError);
}

TEST_CASE("dangling alignment names the offender") {
  try {
    Catalog::assemble({MovieId("m")}, {sentence(0, "A.")}, {}, {shot("m_0", 0, 10)},
                      {AlignmentPair{"m:s000000", "m_9", CueKind::dialog},
                       AlignmentPair{"m:s000042", "m_0", CueKind::dialog}});
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("m_9") != std::string::npos);
    CHECK(msg.find("m:s000042") != std::string::npos);
  }
}

TEST_CASE("overlapping shots and bad intervals are rejected") {
  CHECK_THROWS_AS(Catalog::assemble({}, {}, {}, {shot("a", 0, 10), shot("b", 5, 20)}, {}),
                  ValidationError);
  CHECK_THROWS_AS(Catalog::assemble({}, {}, {}, {shot("a", 10, 10)}, {}), ValidationError);
  CHECK_NOTHROW(Catalog::assemble({}, {}, {}, {shot("a", 0, 10), shot("b", 10, 20)}, {}));
}

TEST_CASE("duplicate ids and empty text are rejected") {
  CHECK_THROWS_AS(Catalog::assemble({}, {}, {}, {shot("a", 0, 10), shot("a", 20, 30)}, {}),
                  ValidationError);
  CHECK_THROWS_AS(Catalog::assemble({}, {sentence(0, "")}, {}, {}, {}), ValidationError);
}

TEST_CASE("cross-movie alignment is rejected") {
  Shot other{"o_0", MovieId("o"), 0, 10, std::nullopt};
  CHECK_THROWS_AS(Catalog::assemble({}, {sentence(0, "A.")}, {}, {other},
                                    {AlignmentPair{"m:s000000", "o_0", CueKind::dialog}}),
                  ValidationError);
}

TEST_CASE("unit resolution across granularities") {
  const auto catalog = ingest(testing::fixture_corpus_inputs(BOOKREEL_FIXTURES "/corpus")).catalog;
  const auto* para = catalog.find_book_unit("forest_tale:p000001");
  REQUIRE(para);
  CHECK(resolve_units(catalog, *para, UnitKind::sentence) ==
        std::vector<std::string>{"forest_tale:s000005", "forest_tale:s000006", "forest_tale:s000007",
                                 "forest_tale:s000008", "forest_tale:s000009"});
  CHECK(resolve_units(catalog, *para, std::nullopt) == std::vector<std::string>{para->id});
  const auto* sent = catalog.find_book_unit("forest_tale:s000007");
  CHECK(resolve_units(catalog, *sent, UnitKind::paragraph) ==
        std::vector<std::string>{"forest_tale:p000001"});
}

TEST_CASE("synthetic corpus ingests cleanly") {
  TempDir dir;
  testing::SynthSpec spec;
  spec.movies = 3;
  const auto catalog = ingest(testing::write_synth_corpus(spec, dir.path())).catalog;
  const auto stats = catalog.stats();
  CHECK(stats.movies == 3);
  CHECK(stats.totals.paragraphs == 120);
  CHECK(stats.totals.sentences == 360);
  CHECK(stats.totals.dialog_aligns == 75);
  CHECK(stats.totals.visual_aligns == 30);
}
