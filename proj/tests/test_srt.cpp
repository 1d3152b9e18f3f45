#include <doctest.h>

#include <random>

#include "bookreel/error.hpp"
#include "bookreel/srt.hpp"
#include "support/srt_conformance.hpp"

using namespace bookreel;

TEST_CASE("fixture suite conforms") {
  int checked = 0;
  const auto failures = testing::srt_conformance_failures(BOOKREEL_FIXTURES "/srt", &checked);
  for (const auto& f : failures) MESSAGE(f);
  CHECK(checked >= 8);
  CHECK(failures.empty());
}

TEST_CASE("timecodes") {
  CHECK(parse_timecode("00:00:01,500") == 1500);
  CHECK(parse_timecode("10:59:59,999") == 39599999);
  CHECK_FALSE(parse_timecode("00:60:00,000"));
  CHECK_FALSE(parse_timecode("0:00:01,500"));
  CHECK_FALSE(parse_timecode("00:00:01.500"));
  CHECK(format_timecode(3723004) == "01:02:03,004");
  CHECK(format_timecode(0) == "00:00:00,000");
}

TEST_CASE("error carries kind, index and offset") {
  const std::string bytes = "1\n00:00:02,000 --> 00:00:02,000\nZero length.\n";
  try {
    parse_srt(bytes, MovieId("m"));
    FAIL("expected an error");
  } catch (const SrtError& e) {
    CHECK(e.kind() == SrtErrorKind::inverted_interval);
    CHECK(e.cue_index() == 1);
    CHECK(e.byte_offset() == 2);
  }
}

TEST_CASE("cue at end of file without text") {
  CHECK_THROWS_AS(parse_srt("1\n00:00:01,000 --> 00:00:02,000\n", MovieId("m")), SrtError);
  CHECK_THROWS_AS(parse_srt("1\n", MovieId("m")), SrtError);
}

TEST_CASE("empty input has no cues") {
  CHECK(parse_srt("", MovieId("m")).cues.empty());
  CHECK(parse_srt("\xEF\xBB\xBF\r\n\r\n", MovieId("m")).cues.empty());
}

TEST_CASE("serialize then parse is the identity on random cue lists") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<SubtitleCue> cues;
    std::int64_t t = static_cast<std::int64_t>(rng() % 5000);
    const int n = static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      SubtitleCue c;
      c.movie = MovieId("m");
      c.index = i + 1;
      c.start_ms = t;
      c.end_ms = t + 1 + static_cast<std::int64_t>(rng() % 90000);
      c.text = "word" + std::to_string(rng() % 1000) + " and more";
      c.id = "m:c" + std::string(6 - std::to_string(i).size(), '0') + std::to_string(i);
      t = c.start_ms + static_cast<std::int64_t>(rng() % 4000);
      cues.push_back(c);
    }
    const auto parsed = parse_srt(serialize_srt(cues), MovieId("m"));
    CHECK(parsed.cues == cues);
  }
}
