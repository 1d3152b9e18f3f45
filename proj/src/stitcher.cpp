#include "bookreel/stitcher.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "bookreel/error.hpp"

namespace bookreel {

Timeline merge_segments(const MovieId& movie, std::vector<Segment> pieces,
                        const StitchOptions& options) {
  if (options.pad_ms < 0 || options.gap_merge_ms < 0) {
    throw ValidationError("pad_ms and gap_merge_ms must be non-negative");
  }
  for (auto& p : pieces) {
    p.start_ms = std::max<std::int64_t>(0, p.start_ms - options.pad_ms);
    p.end_ms += options.pad_ms;
  }
  std::sort(pieces.begin(), pieces.end(), [](const Segment& a, const Segment& b) {
    return std::tie(a.start_ms, a.end_ms, a.shot_ids) < std::tie(b.start_ms, b.end_ms, b.shot_ids);
  });

  Timeline t;
  t.movie = movie;
  for (auto& p : pieces) {
    if (!t.segments.empty() && p.start_ms - t.segments.back().end_ms <= options.gap_merge_ms) {
      Segment& last = t.segments.back();
      last.end_ms = std::max(last.end_ms, p.end_ms);
      last.shot_ids.insert(last.shot_ids.end(), p.shot_ids.begin(), p.shot_ids.end());
    } else {
      t.segments.push_back(std::move(p));
    }
  }
  for (const auto& s : t.segments) t.total_ms += s.duration_ms();
  return t;
}

Timeline build_timeline(std::span<const ScoredMatch> matches, const Catalog& catalog,
                        const StitchOptions& options) {
  if (matches.empty()) return Timeline{};
  const MovieId movie = matches.front().movie;
  std::set<std::string> seen;
  std::vector<Segment> pieces;
  for (const auto& m : matches) {
    if (m.movie != movie) {
      throw ValidationError("cannot stitch across movies: '" + movie.str() + "' and '" +
                            m.movie.str() + "'");
    }
    if (!seen.insert(m.shot_id).second) continue;
    const Shot* shot = catalog.find_shot(m.shot_id);
    if (shot == nullptr) throw ValidationError("unknown shot '" + m.shot_id + "'");
    if (shot->movie != movie) {
      throw ValidationError("shot '" + shot->id + "' belongs to '" + shot->movie.str() + "'");
    }
    pieces.push_back(Segment{shot->start_ms, shot->end_ms, {shot->id}});
  }
  return merge_segments(movie, std::move(pieces), options);
}

std::string format_seconds(std::int64_t ms) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld.%03lld", static_cast<long long>(ms / 1000),
                static_cast<long long>(ms % 1000));
  return buf;
}

namespace {

std::string expand_template(std::string_view tmpl, const MovieId& movie) {
  std::string out;
  static constexpr std::string_view kKey = "{movie}";
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const std::size_t hit = tmpl.find(kKey, pos);
    if (hit == std::string_view::npos) {
      out += tmpl.substr(pos);
      break;
    }
    out += tmpl.substr(pos, hit - pos);
    out += movie.str();
    pos = hit + kKey.size();
  }
  return out;
}

std::string quote_concat_path(std::string_view path) {
  std::string out = "'";
  for (char c : path) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  out += "'";
  return out;
}

}  // namespace

std::string concat_playlist(const Timeline& timeline, std::string_view video_path_template) {
  std::string out = "# bookreel timeline movie=" + timeline.movie.str() +
                    " segments=" + std::to_string(timeline.segments.size()) +
                    " total_ms=" + std::to_string(timeline.total_ms) + "\n";
  const std::string path = quote_concat_path(expand_template(video_path_template, timeline.movie));
  for (const auto& s : timeline.segments) {
    out += "file " + path + "\n";
    out += "inpoint " + format_seconds(s.start_ms) + "\n";
    out += "outpoint " + format_seconds(s.end_ms) + "\n";
  }
  return out;
}

std::string edl_tsv(const Timeline& timeline) {
  std::string out = "start_ms\tend_ms\tshot_ids\n";
  for (const auto& s : timeline.segments) {
    out += std::to_string(s.start_ms) + "\t" + std::to_string(s.end_ms) + "\t";
    for (std::size_t i = 0; i < s.shot_ids.size(); ++i) {
      if (i > 0) out += ",";
      out += s.shot_ids[i];
    }
    out += "\n";
  }
  return out;
}

void emit_concat(const Timeline& timeline, std::string_view video_path_template,
                 const std::filesystem::path& out_path) {
  write_file(out_path, concat_playlist(timeline, video_path_template));
}

void emit_edl(const Timeline& timeline, const std::filesystem::path& out_path) {
  write_file(out_path, edl_tsv(timeline));
}

}  // namespace bookreel
