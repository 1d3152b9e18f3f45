#include "bookreel/corpus.hpp"

#include <cstdio>

#include "bookreel/error.hpp"

namespace bookreel {

MovieId::MovieId(std::string slug) : slug_(std::move(slug)) {
  if (!is_valid(slug_)) {
    throw ValidationError("invalid movie id '" + slug_ + "' (expected [a-z0-9_]+)");
  }
}

bool MovieId::is_valid(std::string_view slug) {
  if (slug.empty()) return false;
  for (char c : slug) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
    if (!ok) return false;
  }
  return true;
}

std::string_view to_string(UnitKind kind) {
  return kind == UnitKind::sentence ? "sentence" : "paragraph";
}

std::string_view to_string(CueKind kind) {
  switch (kind) {
    case CueKind::dialog: return "dialog";
    case CueKind::visual: return "visual";
    case CueKind::audio: return "audio";
  }
  return "dialog";
}

UnitKind parse_unit_kind(std::string_view s) {
  if (s == "sentence") return UnitKind::sentence;
  if (s == "paragraph") return UnitKind::paragraph;
  throw ValidationError("unknown unit kind '" + std::string(s) + "'");
}

CueKind parse_cue_kind(std::string_view s) {
  if (s == "dialog") return CueKind::dialog;
  if (s == "visual") return CueKind::visual;
  if (s == "audio") return CueKind::audio;
  throw ValidationError("unknown cue kind '" + std::string(s) + "'");
}

std::string AlignmentPair::id() const {
  return std::string(to_string(cue_kind)) + ":" + book_unit + "~" + shot;
}

std::string book_unit_id(const MovieId& movie, UnitKind kind, std::int64_t ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof buf, ":%c%06lld", kind == UnitKind::sentence ? 's' : 'p',
                static_cast<long long>(ordinal));
  return movie.str() + buf;
}

std::string cue_id(const MovieId& movie, std::int64_t position) {
  char buf[32];
  std::snprintf(buf, sizeof buf, ":c%06lld", static_cast<long long>(position));
  return movie.str() + buf;
}

}  // namespace bookreel
