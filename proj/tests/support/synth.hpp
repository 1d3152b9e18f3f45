#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "bookreel/catalog.hpp"

namespace bookreel::testing {

/// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "bookreel");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

/// Synthetic corpus where each shot has a small "topic" of words and the
/// book paragraph aligned to it reuses those words.
struct SynthSpec {
  int movies = 2;
  int shots_per_movie = 30;
  int paragraphs_per_movie = 40;
  int sentences_per_paragraph = 3;
  int dialog_aligns_per_movie = 25;
  int visual_aligns_per_movie = 10;
  int vocab_per_movie = 80;
  /// Size of a vocabulary every movie draws from; 0 keeps movies disjoint.
  int shared_vocab = 0;
  /// Probability that any generated word comes from the shared vocabulary.
  double shared_rate = 0.0;
  std::uint64_t seed = 2024;
};

IngestInputs write_synth_corpus(const SynthSpec& spec, const std::filesystem::path& dir);

inline IngestInputs fixture_corpus_inputs(const std::filesystem::path& root) {
  IngestInputs in;
  in.books = {root / "books/forest_tale.txt", root / "books/sea_voyage.txt"};
  in.srts = {root / "srts/forest_tale.srt", root / "srts/sea_voyage.srt"};
  in.shots = {root / "shots.jsonl"};
  in.aligns = {root / "aligns.jsonl"};
  return in;
}

}  // namespace bookreel::testing
