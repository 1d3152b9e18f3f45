#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bookreel/corpus.hpp"
#include "bookreel/error.hpp"

namespace bookreel {

enum class SrtErrorKind { malformed_index, malformed_timecode, inverted_interval, missing_text };

std::string_view to_string(SrtErrorKind kind);

class SrtError : public Error {
 public:
  /// `cue_index` is the index as read, or nullopt when the index line itself is bad.
  SrtError(SrtErrorKind kind, std::optional<std::int64_t> cue_index, std::size_t byte_offset,
           const std::string& detail);

  SrtErrorKind kind() const { return kind_; }
  std::optional<std::int64_t> cue_index() const { return cue_index_; }
  std::size_t byte_offset() const { return byte_offset_; }

 private:
  SrtErrorKind kind_;
  std::optional<std::int64_t> cue_index_;
  std::size_t byte_offset_;
};

struct SrtParseResult {
  std::vector<SubtitleCue> cues;
  std::vector<std::string> warnings;
};

/// Parses SRT bytes (optional UTF-8 BOM, LF or CRLF). Cues come back sorted by
/// start time (stable for ties) with ids assigned by sorted position.
SrtParseResult parse_srt(std::string_view bytes, const MovieId& movie);

/// Canonical LF serialization; no BOM.
std::string serialize_srt(std::span<const SubtitleCue> cues);

/// `HH:MM:SS,mmm`
std::optional<std::int64_t> parse_timecode(std::string_view text);
std::string format_timecode(std::int64_t ms);

}  // namespace bookreel
