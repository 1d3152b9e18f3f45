#include "bookreel/srt.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "bookreel/log.hpp"

namespace bookreel {
namespace {

struct Line {
  std::string_view text;
  std::size_t offset;
};

std::string_view trim(std::string_view s) {
  const auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && is_ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_ws(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<Line> split_lines(std::string_view bytes, std::size_t base_offset) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) nl = bytes.size();
    std::string_view text = bytes.substr(pos, nl - pos);
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    lines.push_back(Line{text, base_offset + pos});
    pos = nl + 1;
  }
  return lines;
}

bool parse_digits(std::string_view s, std::int64_t& out) {
  if (s.empty() || s.size() > 12) return false;
  std::int64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace

std::string_view to_string(SrtErrorKind kind) {
  switch (kind) {
    case SrtErrorKind::malformed_index: return "malformed_index";
    case SrtErrorKind::malformed_timecode: return "malformed_timecode";
    case SrtErrorKind::inverted_interval: return "inverted_interval";
    case SrtErrorKind::missing_text: return "missing_text";
  }
  return "malformed_index";
}

SrtError::SrtError(SrtErrorKind kind, std::optional<std::int64_t> cue_index,
                   std::size_t byte_offset, const std::string& detail)
    : Error("srt " + std::string(to_string(kind)) + " at cue " +
            (cue_index ? std::to_string(*cue_index) : std::string("?")) + ", byte offset " +
            std::to_string(byte_offset) + ": " + detail),
      kind_(kind),
      cue_index_(cue_index),
      byte_offset_(byte_offset) {}

std::optional<std::int64_t> parse_timecode(std::string_view text) {
  // HH:MM:SS,mmm
  if (text.size() != 12 || text[2] != ':' || text[5] != ':' || text[8] != ',') return std::nullopt;
  std::int64_t h = 0, m = 0, s = 0, ms = 0;
  if (!parse_digits(text.substr(0, 2), h) || !parse_digits(text.substr(3, 2), m) ||
      !parse_digits(text.substr(6, 2), s) || !parse_digits(text.substr(9, 3), ms)) {
    return std::nullopt;
  }
  if (m > 59 || s > 59) return std::nullopt;
  return ((h * 60 + m) * 60 + s) * 1000 + ms;
}

std::string format_timecode(std::int64_t ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld,%03lld",
                static_cast<long long>(ms / 3600000), static_cast<long long>(ms / 60000 % 60),
                static_cast<long long>(ms / 1000 % 60), static_cast<long long>(ms % 1000));
  return buf;
}

SrtParseResult parse_srt(std::string_view bytes, const MovieId& movie) {
  std::size_t base = 0;
  if (bytes.starts_with("\xEF\xBB\xBF")) {
    bytes.remove_prefix(3);
    base = 3;
  }
  const std::vector<Line> lines = split_lines(bytes, base);

  SrtParseResult result;
  std::map<std::int64_t, std::size_t> seen_index;
  std::size_t i = 0;
  while (i < lines.size()) {
    if (trim(lines[i].text).empty()) {
      ++i;
      continue;
    }
    const Line& index_line = lines[i];
    std::int64_t index = 0;
    if (!parse_digits(trim(index_line.text), index) || index <= 0) {
      throw SrtError(SrtErrorKind::malformed_index, std::nullopt, index_line.offset,
                     "expected a positive integer, got '" + std::string(index_line.text) + "'");
    }
    ++i;

    if (i >= lines.size() || trim(lines[i].text).empty()) {
      const std::size_t at = i < lines.size() ? lines[i].offset : base + bytes.size();
      throw SrtError(SrtErrorKind::malformed_timecode, index, at, "missing timecode line");
    }
    const Line& time_line = lines[i];
    const std::string_view tl = trim(time_line.text);
    const std::size_t arrow = tl.find("-->");
    std::optional<std::int64_t> start;
    std::optional<std::int64_t> end;
    if (arrow != std::string_view::npos) {
      start = parse_timecode(trim(tl.substr(0, arrow)));
      end = parse_timecode(trim(tl.substr(arrow + 3)));
    }
    if (!start || !end) {
      throw SrtError(SrtErrorKind::malformed_timecode, index, time_line.offset,
                     "expected 'HH:MM:SS,mmm --> HH:MM:SS,mmm', got '" + std::string(tl) + "'");
    }
    if (*start >= *end) {
      throw SrtError(SrtErrorKind::inverted_interval, index, time_line.offset,
                     "start " + format_timecode(*start) + " is not before end " +
                         format_timecode(*end));
    }
    ++i;

    std::string text;
    while (i < lines.size() && !trim(lines[i].text).empty()) {
      if (!text.empty()) text.push_back(' ');
      text += trim(lines[i].text);
      ++i;
    }
    if (text.empty()) {
      throw SrtError(SrtErrorKind::missing_text, index, time_line.offset, "cue has no text");
    }

    if (auto it = seen_index.find(index); it != seen_index.end()) {
      std::string w = "duplicate cue index " + std::to_string(index) + " at byte offset " +
                      std::to_string(index_line.offset) + " (first at " +
                      std::to_string(it->second) + "); keeping both";
      log::warn(movie.str() + ": " + w);
      result.warnings.push_back(std::move(w));
    } else {
      seen_index.emplace(index, index_line.offset);
    }
    result.cues.push_back(SubtitleCue{{}, movie, index, *start, *end, std::move(text)});
  }

  std::stable_sort(result.cues.begin(), result.cues.end(),
                   [](const SubtitleCue& a, const SubtitleCue& b) { return a.start_ms < b.start_ms; });
  for (std::size_t k = 0; k < result.cues.size(); ++k) {
    result.cues[k].id = cue_id(movie, static_cast<std::int64_t>(k));
  }
  return result;
}

std::string serialize_srt(std::span<const SubtitleCue> cues) {
  std::string out;
  for (const auto& cue : cues) {
    out += std::to_string(cue.index);
    out += '\n';
    out += format_timecode(cue.start_ms);
    out += " --> ";
    out += format_timecode(cue.end_ms);
    out += '\n';
    out += cue.text;
    out += "\n\n";
  }
  return out;
}

}  // namespace bookreel
