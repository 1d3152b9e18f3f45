#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bookreel/corpus.hpp"

namespace bookreel {

/// Per-movie counts laid out like the corpus statistics table.
struct MovieStats {
  MovieId movie;
  std::int64_t sentences = 0;
  std::int64_t paragraphs = 0;
  std::int64_t shots = 0;
  std::int64_t cues = 0;
  std::int64_t dialog_aligns = 0;
  std::int64_t visual_aligns = 0;
  std::int64_t audio_aligns = 0;
};

struct CatalogStats {
  std::int64_t movies = 0;
  MovieStats totals;
  std::vector<MovieStats> per_movie;
};

struct CatalogSources {
  std::vector<std::string> books;
  std::vector<std::string> srts;
  std::vector<std::string> shots;
  std::vector<std::string> aligns;
};

/// Immutable, referentially consistent corpus. Collections are sorted by movie;
/// book units and alignments by id, cues and shots by start time.
class Catalog {
 public:
  Catalog() = default;

  /// Validates and sorts; throws ValidationError listing every offender.
  static Catalog assemble(std::vector<MovieId> extra_movies, std::vector<BookUnit> units,
                          std::vector<SubtitleCue> cues, std::vector<Shot> shots,
                          std::vector<AlignmentPair> alignments, CatalogSources sources = {});

  const std::vector<MovieId>& movies() const { return movies_; }
  const std::vector<BookUnit>& book_units() const { return units_; }
  const std::vector<SubtitleCue>& cues() const { return cues_; }
  const std::vector<Shot>& shots() const { return shots_; }
  const std::vector<AlignmentPair>& alignments() const { return alignments_; }
  const CatalogSources& sources() const { return sources_; }

  const BookUnit* find_book_unit(std::string_view id) const;
  const Shot* find_shot(std::string_view id) const;
  const SubtitleCue* find_cue(std::string_view id) const;

  /// FNV-1a over the canonical JSONL of all collections (paths excluded).
  std::uint64_t checksum() const { return checksum_; }
  std::string checksum_hex() const;

  CatalogStats stats() const;

  /// Canonical JSONL bodies, one per collection.
  std::string movies_jsonl() const;
  std::string book_units_jsonl() const;
  std::string cues_jsonl() const;
  std::string shots_jsonl() const;
  std::string alignments_jsonl() const;

 private:
  std::vector<MovieId> movies_;
  std::vector<BookUnit> units_;
  std::vector<SubtitleCue> cues_;
  std::vector<Shot> shots_;
  std::vector<AlignmentPair> alignments_;
  CatalogSources sources_;
  std::unordered_map<std::string, std::size_t> unit_index_;
  std::unordered_map<std::string, std::size_t> shot_index_;
  std::unordered_map<std::string, std::size_t> cue_index_;
  std::uint64_t checksum_ = 0;
};

struct IngestInputs {
  /// Book text and SRT files are keyed by movie through their file stem.
  std::vector<std::filesystem::path> books;
  std::vector<std::filesystem::path> srts;
  /// JSONL, see `parse_shots_jsonl`.
  std::vector<std::filesystem::path> shots;
  std::vector<std::filesystem::path> aligns;
};

struct IngestResult {
  Catalog catalog;
  std::vector<std::string> warnings;
};

IngestResult ingest(const IngestInputs& inputs);

/// `{"id": str, "movie": str, "start_ms": int, "end_ms": int, "story_text": str|null}` per line.
std::vector<Shot> parse_shots_jsonl(std::string_view text, const std::string& origin);
/// `{"book_unit": str, "shot": str, "cue_kind": "dialog"|"visual"|"audio"}` per line.
std::vector<AlignmentPair> parse_alignments_jsonl(std::string_view text, const std::string& origin);

/// Writes `{movies,book_units,cues,shots,alignments}.jsonl` and `meta.json` under `dir`.
void write_catalog(const Catalog& catalog, const std::filesystem::path& dir);
/// Re-validates and checks the stored checksum.
Catalog read_catalog(const std::filesystem::path& dir);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace bookreel

namespace bookreel {

/// Ids of the units that stand for `unit` at granularity `as`: the unit itself
/// when `as` is empty or matches, the member sentences of a paragraph, or the
/// enclosing paragraph of a sentence.
std::vector<std::string> resolve_units(const Catalog& catalog, const BookUnit& unit,
                                       std::optional<UnitKind> as);

}  // namespace bookreel
