#include "bookreel/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bookreel/error.hpp"
#include "bookreel/hash.hpp"
#include "bookreel/segment.hpp"
#include "bookreel/srt.hpp"

namespace bookreel {
namespace {

using ordered_json = nlohmann::ordered_json;

std::string join_offenders(const std::vector<std::string>& items) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(items.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    out += "\n  ";
    out += items[i];
  }
  if (items.size() > shown) out += "\n  ... and " + std::to_string(items.size() - shown) + " more";
  return out;
}

template <typename T, typename Key>
std::unordered_map<std::string, std::size_t> index_by_id(const std::vector<T>& items, Key key,
                                                         std::vector<std::string>& dups) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!index.emplace(key(items[i]), i).second) dups.push_back(key(items[i]));
  }
  return index;
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  });
}

std::vector<std::string_view> jsonl_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

template <typename Fn>
void for_each_json_line(std::string_view text, const std::string& origin, Fn fn) {
  const auto lines = jsonl_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const std::string where = origin + ":" + std::to_string(i + 1);
    try {
      fn(nlohmann::json::parse(lines[i]));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(where + ": " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
}

MovieId movie_from_stem(const std::filesystem::path& path) {
  const std::string stem = path.stem().string();
  if (!MovieId::is_valid(stem)) {
    throw ValidationError(path.string() + ": file stem '" + stem +
                          "' is not a valid movie id ([a-z0-9_]+)");
  }
  return MovieId(stem);
}

std::vector<std::string> path_strings(const std::vector<std::filesystem::path>& paths) {
  std::vector<std::string> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.push_back(p.string());
  return out;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

Catalog Catalog::assemble(std::vector<MovieId> extra_movies, std::vector<BookUnit> units,
                          std::vector<SubtitleCue> cues, std::vector<Shot> shots,
                          std::vector<AlignmentPair> alignments, CatalogSources sources) {
  Catalog c;
  std::vector<std::string> problems;

  std::set<MovieId> movies(extra_movies.begin(), extra_movies.end());
  for (const auto& u : units) movies.insert(u.movie);
  for (const auto& q : cues) movies.insert(q.movie);
  for (const auto& s : shots) movies.insert(s.movie);
  if (movies.count(MovieId{})) problems.push_back("record with empty movie id");
  movies.erase(MovieId{});
  c.movies_.assign(movies.begin(), movies.end());

  std::sort(units.begin(), units.end(), [](const BookUnit& a, const BookUnit& b) {
    return std::tie(a.movie, a.id) < std::tie(b.movie, b.id);
  });
  std::stable_sort(cues.begin(), cues.end(), [](const SubtitleCue& a, const SubtitleCue& b) {
    return std::tie(a.movie, a.start_ms, a.id) < std::tie(b.movie, b.start_ms, b.id);
  });
  std::sort(shots.begin(), shots.end(), [](const Shot& a, const Shot& b) {
    return std::tie(a.movie, a.start_ms, a.id) < std::tie(b.movie, b.start_ms, b.id);
  });

  std::map<std::pair<MovieId, UnitKind>, std::int64_t> last_ordinal;
  for (const auto& u : units) {
    if (blank(u.text)) problems.push_back("book unit " + u.id + ": empty text");
    auto key = std::make_pair(u.movie, u.kind);
    auto it = last_ordinal.find(key);
    if (it != last_ordinal.end() && u.ordinal <= it->second) {
      problems.push_back("book unit " + u.id + ": ordinal not strictly increasing");
    }
    last_ordinal[key] = u.ordinal;
  }
  for (const auto& q : cues) {
    if (q.start_ms < 0 || q.start_ms >= q.end_ms) {
      problems.push_back("cue " + q.id + ": invalid interval");
    }
    if (blank(q.text)) problems.push_back("cue " + q.id + ": empty text");
  }
  for (std::size_t i = 0; i < shots.size(); ++i) {
    const Shot& s = shots[i];
    if (s.id.empty()) problems.push_back("shot with empty id");
    if (s.start_ms < 0 || s.start_ms >= s.end_ms) {
      problems.push_back("shot " + s.id + ": invalid interval [" + std::to_string(s.start_ms) +
                         "," + std::to_string(s.end_ms) + ")");
    }
    if (i > 0 && shots[i - 1].movie == s.movie && shots[i - 1].end_ms > s.start_ms) {
      problems.push_back("shots " + shots[i - 1].id + " and " + s.id + " overlap");
    }
  }

  std::vector<std::string> dups;
  c.unit_index_ = index_by_id(units, [](const BookUnit& u) { return u.id; }, dups);
  c.cue_index_ = index_by_id(cues, [](const SubtitleCue& q) { return q.id; }, dups);
  c.shot_index_ = index_by_id(shots, [](const Shot& s) { return s.id; }, dups);
  for (const auto& d : dups) problems.push_back("duplicate id " + d);

  std::vector<std::pair<MovieId, AlignmentPair>> keyed;
  std::set<std::string> seen_align;
  for (auto& a : alignments) {
    auto u = c.unit_index_.find(a.book_unit);
    auto s = c.shot_index_.find(a.shot);
    if (u == c.unit_index_.end() || s == c.shot_index_.end()) {
      std::string what = "dangling alignment " + a.id() + ":";
      if (u == c.unit_index_.end()) what += " unknown book unit '" + a.book_unit + "'";
      if (s == c.shot_index_.end()) what += " unknown shot '" + a.shot + "'";
      problems.push_back(std::move(what));
      continue;
    }
    const MovieId& um = units[u->second].movie;
    if (um != shots[s->second].movie) {
      problems.push_back("alignment " + a.id() + ": book unit movie '" + um.str() +
                         "' differs from shot movie '" + shots[s->second].movie.str() + "'");
      continue;
    }
    if (!seen_align.insert(a.id()).second) {
      problems.push_back("duplicate alignment " + a.id());
      continue;
    }
    keyed.emplace_back(um, std::move(a));
  }
  if (!problems.empty()) {
    throw ValidationError("catalog validation failed (" + std::to_string(problems.size()) +
                          " problems):" + join_offenders(problems));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second.id() < b.second.id();
  });
  for (auto& [m, a] : keyed) c.alignments_.push_back(std::move(a));

  c.units_ = std::move(units);
  c.cues_ = std::move(cues);
  c.shots_ = std::move(shots);
  c.sources_ = std::move(sources);

  Fnv1a64 h;
  for (const std::string& body : {c.movies_jsonl(), c.book_units_jsonl(), c.cues_jsonl(),
                                  c.shots_jsonl(), c.alignments_jsonl()}) {
    h.update(body);
    h.update_byte(0);
  }
  c.checksum_ = h.value();
  return c;
}

const BookUnit* Catalog::find_book_unit(std::string_view id) const {
  auto it = unit_index_.find(std::string(id));
  return it == unit_index_.end() ? nullptr : &units_[it->second];
}

const Shot* Catalog::find_shot(std::string_view id) const {
  auto it = shot_index_.find(std::string(id));
  return it == shot_index_.end() ? nullptr : &shots_[it->second];
}

const SubtitleCue* Catalog::find_cue(std::string_view id) const {
  auto it = cue_index_.find(std::string(id));
  return it == cue_index_.end() ? nullptr : &cues_[it->second];
}

std::string Catalog::checksum_hex() const { return hex64(checksum_); }

CatalogStats Catalog::stats() const {
  std::map<MovieId, MovieStats> rows;
  for (const auto& m : movies_) rows[m].movie = m;
  for (const auto& u : units_) {
    (u.kind == UnitKind::sentence ? rows[u.movie].sentences : rows[u.movie].paragraphs)++;
  }
  for (const auto& q : cues_) rows[q.movie].cues++;
  for (const auto& s : shots_) rows[s.movie].shots++;
  for (const auto& a : alignments_) {
    MovieStats& r = rows[find_shot(a.shot)->movie];
    switch (a.cue_kind) {
      case CueKind::dialog: r.dialog_aligns++; break;
      case CueKind::visual: r.visual_aligns++; break;
      case CueKind::audio: r.audio_aligns++; break;
    }
  }
  CatalogStats out;
  out.movies = static_cast<std::int64_t>(movies_.size());
  for (auto& [m, r] : rows) {
    out.totals.sentences += r.sentences;
    out.totals.paragraphs += r.paragraphs;
    out.totals.shots += r.shots;
    out.totals.cues += r.cues;
    out.totals.dialog_aligns += r.dialog_aligns;
    out.totals.visual_aligns += r.visual_aligns;
    out.totals.audio_aligns += r.audio_aligns;
    out.per_movie.push_back(r);
  }
  return out;
}

std::string Catalog::movies_jsonl() const {
  std::string out;
  for (const auto& m : movies_) out += ordered_json{{"id", m.str()}}.dump() + "\n";
  return out;
}

std::string Catalog::book_units_jsonl() const {
  std::string out;
  for (const auto& u : units_) {
    ordered_json j;
    j["id"] = u.id;
    j["movie"] = u.movie.str();
    j["kind"] = to_string(u.kind);
    j["ordinal"] = u.ordinal;
    j["paragraph"] = u.paragraph;
    j["text"] = u.text;
    out += j.dump() + "\n";
  }
  return out;
}

std::string Catalog::cues_jsonl() const {
  std::string out;
  for (const auto& q : cues_) {
    ordered_json j;
    j["id"] = q.id;
    j["movie"] = q.movie.str();
    j["index"] = q.index;
    j["start_ms"] = q.start_ms;
    j["end_ms"] = q.end_ms;
    j["text"] = q.text;
    out += j.dump() + "\n";
  }
  return out;
}

std::string Catalog::shots_jsonl() const {
  std::string out;
  for (const auto& s : shots_) {
    ordered_json j;
    j["id"] = s.id;
    j["movie"] = s.movie.str();
    j["start_ms"] = s.start_ms;
    j["end_ms"] = s.end_ms;
    j["story_text"] = s.story_text ? ordered_json(*s.story_text) : ordered_json(nullptr);
    out += j.dump() + "\n";
  }
  return out;
}

std::string Catalog::alignments_jsonl() const {
  std::string out;
  for (const auto& a : alignments_) {
    ordered_json j;
    j["book_unit"] = a.book_unit;
    j["shot"] = a.shot;
    j["cue_kind"] = to_string(a.cue_kind);
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<Shot> parse_shots_jsonl(std::string_view text, const std::string& origin) {
  std::vector<Shot> shots;
  for_each_json_line(text, origin, [&](const nlohmann::json& j) {
    Shot s;
    s.id = j.at("id").get<std::string>();
    s.movie = MovieId(j.at("movie").get<std::string>());
    s.start_ms = j.at("start_ms").get<std::int64_t>();
    s.end_ms = j.at("end_ms").get<std::int64_t>();
    if (auto it = j.find("story_text"); it != j.end() && !it->is_null()) {
      s.story_text = it->get<std::string>();
    }
    shots.push_back(std::move(s));
  });
  return shots;
}

std::vector<AlignmentPair> parse_alignments_jsonl(std::string_view text,
                                                  const std::string& origin) {
  std::vector<AlignmentPair> out;
  for_each_json_line(text, origin, [&](const nlohmann::json& j) {
    out.push_back(AlignmentPair{j.at("book_unit").get<std::string>(),
                                j.at("shot").get<std::string>(),
                                parse_cue_kind(j.at("cue_kind").get<std::string>())});
  });
  return out;
}

IngestResult ingest(const IngestInputs& inputs) {
  IngestResult result;
  std::vector<MovieId> movies;
  std::vector<BookUnit> units;
  std::vector<SubtitleCue> cues;
  std::vector<Shot> shots;
  std::vector<AlignmentPair> aligns;

  std::set<MovieId> book_movies;
  for (const auto& path : inputs.books) {
    const MovieId movie = movie_from_stem(path);
    if (!book_movies.insert(movie).second) {
      throw ValidationError("more than one book file for movie '" + movie.str() + "'");
    }
    auto parsed = segment_book(read_file(path), movie);
    units.insert(units.end(), std::make_move_iterator(parsed.begin()),
                 std::make_move_iterator(parsed.end()));
    movies.push_back(movie);
  }
  std::set<MovieId> srt_movies;
  for (const auto& path : inputs.srts) {
    const MovieId movie = movie_from_stem(path);
    if (!srt_movies.insert(movie).second) {
      throw ValidationError("more than one subtitle file for movie '" + movie.str() + "'");
    }
    SrtParseResult parsed;
    try {
      parsed = parse_srt(read_file(path), movie);
    } catch (const SrtError& e) {
      throw ValidationError(path.string() + ": " + e.what());
    }
    for (auto& w : parsed.warnings) result.warnings.push_back(path.string() + ": " + w);
    cues.insert(cues.end(), std::make_move_iterator(parsed.cues.begin()),
                std::make_move_iterator(parsed.cues.end()));
    movies.push_back(movie);
  }
  for (const auto& path : inputs.shots) {
    auto parsed = parse_shots_jsonl(read_file(path), path.string());
    shots.insert(shots.end(), std::make_move_iterator(parsed.begin()),
                 std::make_move_iterator(parsed.end()));
  }
  for (const auto& path : inputs.aligns) {
    auto parsed = parse_alignments_jsonl(read_file(path), path.string());
    aligns.insert(aligns.end(), std::make_move_iterator(parsed.begin()),
                  std::make_move_iterator(parsed.end()));
  }

  CatalogSources sources{path_strings(inputs.books), path_strings(inputs.srts),
                         path_strings(inputs.shots), path_strings(inputs.aligns)};
  result.catalog = Catalog::assemble(std::move(movies), std::move(units), std::move(cues),
                                     std::move(shots), std::move(aligns), std::move(sources));
  return result;
}

void write_catalog(const Catalog& catalog, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "movies.jsonl", catalog.movies_jsonl());
  write_file(dir / "book_units.jsonl", catalog.book_units_jsonl());
  write_file(dir / "cues.jsonl", catalog.cues_jsonl());
  write_file(dir / "shots.jsonl", catalog.shots_jsonl());
  write_file(dir / "alignments.jsonl", catalog.alignments_jsonl());

  const CatalogStats st = catalog.stats();
  ordered_json meta;
  meta["checksum"] = catalog.checksum_hex();
  meta["counts"] = {{"movies", st.movies},
                    {"sentences", st.totals.sentences},
                    {"paragraphs", st.totals.paragraphs},
                    {"shots", st.totals.shots},
                    {"cues", st.totals.cues},
                    {"dialog_aligns", st.totals.dialog_aligns},
                    {"visual_aligns", st.totals.visual_aligns},
                    {"audio_aligns", st.totals.audio_aligns}};
  const auto& src = catalog.sources();
  meta["sources"] = {{"books", src.books}, {"srts", src.srts}, {"shots", src.shots},
                     {"aligns", src.aligns}};
  write_file(dir / "meta.json", meta.dump(2) + "\n");
}

Catalog read_catalog(const std::filesystem::path& dir) {
  if (!std::filesystem::exists(dir / "meta.json")) {
    throw IoError("no catalog at " + dir.string() + " (meta.json missing)");
  }
  const auto meta = nlohmann::json::parse(read_file(dir / "meta.json"));

  std::vector<MovieId> movies;
  for_each_json_line(read_file(dir / "movies.jsonl"), "movies.jsonl", [&](const auto& j) {
    movies.emplace_back(j.at("id").template get<std::string>());
  });
  std::vector<BookUnit> units;
  for_each_json_line(read_file(dir / "book_units.jsonl"), "book_units.jsonl", [&](const auto& j) {
    units.push_back(BookUnit{j.at("id").template get<std::string>(),
                             MovieId(j.at("movie").template get<std::string>()),
                             parse_unit_kind(j.at("kind").template get<std::string>()),
                             j.at("ordinal").template get<std::int64_t>(),
                             j.at("paragraph").template get<std::int64_t>(),
                             j.at("text").template get<std::string>()});
  });
  std::vector<SubtitleCue> cues;
  for_each_json_line(read_file(dir / "cues.jsonl"), "cues.jsonl", [&](const auto& j) {
    cues.push_back(SubtitleCue{j.at("id").template get<std::string>(),
                               MovieId(j.at("movie").template get<std::string>()),
                               j.at("index").template get<std::int64_t>(),
                               j.at("start_ms").template get<std::int64_t>(),
                               j.at("end_ms").template get<std::int64_t>(),
                               j.at("text").template get<std::string>()});
  });
  auto shots = parse_shots_jsonl(read_file(dir / "shots.jsonl"), "shots.jsonl");
  auto aligns = parse_alignments_jsonl(read_file(dir / "alignments.jsonl"), "alignments.jsonl");

  CatalogSources sources;
  if (auto it = meta.find("sources"); it != meta.end()) {
    sources.books = it->value("books", std::vector<std::string>{});
    sources.srts = it->value("srts", std::vector<std::string>{});
    sources.shots = it->value("shots", std::vector<std::string>{});
    sources.aligns = it->value("aligns", std::vector<std::string>{});
  }
  Catalog c = Catalog::assemble(std::move(movies), std::move(units), std::move(cues),
                                std::move(shots), std::move(aligns), std::move(sources));
  const std::string stored = meta.value("checksum", std::string{});
  if (stored != c.checksum_hex()) {
    throw ValidationError("catalog checksum mismatch in " + dir.string() + ": meta says " +
                          stored + ", content hashes to " + c.checksum_hex());
  }
  return c;
}

}  // namespace bookreel

namespace bookreel {

std::vector<std::string> resolve_units(const Catalog& catalog, const BookUnit& unit,
                                       std::optional<UnitKind> as) {
  if (!as || *as == unit.kind) return {unit.id};
  if (*as == UnitKind::paragraph) {
    const std::string pid = book_unit_id(unit.movie, UnitKind::paragraph, unit.paragraph);
    if (catalog.find_book_unit(pid) == nullptr) return {};
    return {pid};
  }
  std::vector<std::string> out;
  for (const auto& u : catalog.book_units()) {
    if (u.movie == unit.movie && u.kind == UnitKind::sentence && u.paragraph == unit.ordinal) {
      out.push_back(u.id);
    }
  }
  return out;
}

}  // namespace bookreel
