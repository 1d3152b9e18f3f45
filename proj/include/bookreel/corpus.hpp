#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bookreel {

/// Short lowercase movie slug, `[a-z0-9_]+`.
class MovieId {
 public:
  MovieId() = default;
  /// Throws ValidationError when `slug` is not a valid identifier.
  explicit MovieId(std::string slug);

  static bool is_valid(std::string_view slug);

  const std::string& str() const { return slug_; }
  bool empty() const { return slug_.empty(); }

  friend auto operator<=>(const MovieId&, const MovieId&) = default;

 private:
  std::string slug_;
};

enum class UnitKind { sentence, paragraph };
enum class CueKind { dialog, visual, audio };

std::string_view to_string(UnitKind kind);
std::string_view to_string(CueKind kind);
UnitKind parse_unit_kind(std::string_view s);
CueKind parse_cue_kind(std::string_view s);

struct BookUnit {
  std::string id;
  MovieId movie;
  UnitKind kind = UnitKind::sentence;
  std::int64_t ordinal = 0;
  /// Ordinal of the enclosing paragraph (a paragraph's own ordinal for paragraphs).
  std::int64_t paragraph = 0;
  std::string text;

  friend bool operator==(const BookUnit&, const BookUnit&) = default;
};

struct SubtitleCue {
  std::string id;
  MovieId movie;
  std::int64_t index = 0;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string text;

  friend bool operator==(const SubtitleCue&, const SubtitleCue&) = default;
};

struct Shot {
  std::string id;
  MovieId movie;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::optional<std::string> story_text;

  friend bool operator==(const Shot&, const Shot&) = default;
};

struct AlignmentPair {
  std::string book_unit;
  std::string shot;
  CueKind cue_kind = CueKind::dialog;

  /// Canonical identifier, unique within a catalog.
  std::string id() const;

  friend bool operator==(const AlignmentPair&, const AlignmentPair&) = default;
};

/// `<movie>:s000012` / `<movie>:p000003`; zero padding keeps lexical order equal to ordinal order.
std::string book_unit_id(const MovieId& movie, UnitKind kind, std::int64_t ordinal);
std::string cue_id(const MovieId& movie, std::int64_t position);

}  // namespace bookreel
