#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bookreel/catalog.hpp"
#include "bookreel/retrieval.hpp"

namespace bookreel {

struct Segment {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::vector<std::string> shot_ids;

  std::int64_t duration_ms() const { return end_ms - start_ms; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Chronological, non-overlapping clip list for a single movie.
struct Timeline {
  MovieId movie;
  std::vector<Segment> segments;
  std::int64_t total_ms = 0;

  friend bool operator==(const Timeline&, const Timeline&) = default;
};

struct StitchOptions {
  std::int64_t pad_ms = 0;
  /// Segments whose gap is at most this many ms are merged; overlaps always merge.
  std::int64_t gap_merge_ms = 0;
};

/// Pads each piece (clamped at 0), sorts by start and merges. Pieces may carry
/// several ids; merged segments keep them in chronological order.
Timeline merge_segments(const MovieId& movie, std::vector<Segment> pieces,
                        const StitchOptions& options);

/// Timeline of the distinct shots behind `matches`. Throws ValidationError on
/// matches from more than one movie or unknown shots.
Timeline build_timeline(std::span<const ScoredMatch> matches, const Catalog& catalog,
                        const StitchOptions& options = {});

/// Seconds with millisecond precision, e.g. 1500 -> "1.500".
std::string format_seconds(std::int64_t ms);

/// Header comment, then `file` / `inpoint` / `outpoint` per segment.
/// `{movie}` in the template expands to the movie id.
std::string concat_playlist(const Timeline& timeline, std::string_view video_path_template);
/// Header row, then `start_ms<TAB>end_ms<TAB>id,id,...` per segment.
std::string edl_tsv(const Timeline& timeline);

void emit_concat(const Timeline& timeline, std::string_view video_path_template,
                 const std::filesystem::path& out_path);
void emit_edl(const Timeline& timeline, const std::filesystem::path& out_path);

}  // namespace bookreel
