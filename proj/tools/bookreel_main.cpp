// bookreel: book-to-movie shot retrieval pipeline.
//
//   ingest -> embed -> train -> query / eval -> stitch
//
// Every stage reads and writes plain files so external tools can replace a
// stage (e.g. supply embedding stores computed elsewhere).

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bookreel/catalog.hpp"
#include "bookreel/embedding.hpp"
#include "bookreel/evaluation.hpp"
#include "bookreel/hash.hpp"
#include "bookreel/log.hpp"
#include "bookreel/retrieval.hpp"
#include "bookreel/run_config.hpp"
#include "bookreel/similarity.hpp"
#include "bookreel/srt.hpp"
#include "bookreel/stitcher.hpp"
#include "bookreel/store.hpp"
#include "bookreel/training_pairs.hpp"

namespace fs = std::filesystem;
using namespace bookreel;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitMissingArtifact = 2;

class MissingArtifact : public Error {
 public:
  MissingArtifact(std::string stage, const fs::path& path)
      : Error("missing " + stage + " artifact at " + path.string()),
        stage_(std::move(stage)),
        path_(path.string()) {}
  const std::string& stage() const { return stage_; }
  const std::string& path() const { return path_; }

 private:
  std::string stage_;
  std::string path_;
};

struct Output {
  bool json = false;

  void info(const std::string& human, const nlohmann::ordered_json& machine) const {
    if (json) {
      std::cout << machine.dump() << "\n";
    } else {
      std::cout << human;
    }
  }
};

void require(const fs::path& path, const std::string& stage) {
  if (!fs::exists(path)) throw MissingArtifact(stage, path);
}

Catalog load_catalog(const std::string& dir) {
  require(fs::path(dir) / "meta.json", "ingest");
  return read_catalog(dir);
}

LoadedStores load_stores(const std::string& dir) {
  require(fs::path(dir) / kManifestFile, "embed");
  return read_stores(dir);
}

SimilarityModel load_model(const std::string& path) {
  require(path, "train");
  return parse_model_json(read_file(path));
}

std::optional<UnitKind> optional_unit_kind(const std::string& s) {
  if (s.empty() || s == "aligned") return std::nullopt;
  return parse_unit_kind(s);
}

std::optional<MovieId> parse_scope(const std::string& s) {
  if (s.empty() || s == "all") return std::nullopt;
  return MovieId(s);
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

// ---------------------------------------------------------------------------
// ingest

struct IngestArgs {
  std::vector<std::string> books, srts, shots, aligns;
};

int cmd_ingest(const RunConfig& cfg, const IngestArgs& args, const Output& out) {
  IngestInputs inputs;
  auto add = [](std::vector<fs::path>& dst, const std::vector<std::string>& src) {
    for (const auto& s : src) {
      if (!fs::exists(s)) throw IoError("input file not found: " + s);
      dst.emplace_back(s);
    }
  };
  add(inputs.books, args.books);
  add(inputs.srts, args.srts);
  add(inputs.shots, args.shots);
  add(inputs.aligns, args.aligns);

  IngestResult result = ingest(inputs);
  write_catalog(result.catalog, cfg.paths.catalog_dir);
  const CatalogStats st = result.catalog.stats();

  std::ostringstream human;
  human << "catalog " << cfg.paths.catalog_dir << " checksum " << result.catalog.checksum_hex()
        << "\n";
  human << "movie\tsentences\tparagraphs\tshots\tsubtitle_cues\tdialog_aligns\tvisual_aligns\n";
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  auto row = [&](const std::string& name, const MovieStats& r) {
    human << name << "\t" << r.sentences << "\t" << r.paragraphs << "\t" << r.shots << "\t"
          << r.cues << "\t" << r.dialog_aligns << "\t" << r.visual_aligns << "\n";
    rows.push_back({{"movie", name},
                    {"sentences", r.sentences},
                    {"paragraphs", r.paragraphs},
                    {"shots", r.shots},
                    {"cues", r.cues},
                    {"dialog_aligns", r.dialog_aligns},
                    {"visual_aligns", r.visual_aligns}});
  };
  for (const auto& r : st.per_movie) row(r.movie.str(), r);
  row("total", st.totals);
  for (const auto& w : result.warnings) log::warn(w);
  out.info(human.str(), {{"command", "ingest"},
                         {"catalog", cfg.paths.catalog_dir},
                         {"checksum", result.catalog.checksum_hex()},
                         {"movies", st.movies},
                         {"stats", rows},
                         {"warnings", result.warnings}});
  return 0;
}

// ---------------------------------------------------------------------------
// embed

int cmd_embed(const RunConfig& cfg, const Output& out) {
  const Catalog catalog = load_catalog(cfg.paths.catalog_dir);
  if (cfg.embedder.name != "baseline") {
    throw ValidationError("unknown embedder '" + cfg.embedder.name +
                          "'; only 'baseline' is built in (external stores can be dropped in)");
  }
  const BaselineEmbedder embedder(cfg.embedder.dim, cfg.embedder.seed);
  const CatalogStores stores = embed_catalog(catalog, embedder);
  const StoreManifest m = write_stores(stores, cfg.paths.store_dir, catalog.checksum_hex());
  std::ostringstream human;
  human << "stores " << cfg.paths.store_dir << " (" << m.source_tag << "): book " << m.book_count
        << ", dialog " << m.dialog_count << ", story " << m.story_count << "\n";
  out.info(human.str(), {{"command", "embed"},
                         {"store_dir", cfg.paths.store_dir},
                         {"source_tag", m.source_tag},
                         {"dim", m.dim},
                         {"book", m.book_count},
                         {"dialog", m.dialog_count},
                         {"story", m.story_count}});
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct StorePaths {
  std::string book, dialog, story;
};

CatalogStores load_store_files(const RunConfig& cfg, const StorePaths& sp) {
  const fs::path dir = cfg.paths.store_dir;
  const fs::path book = sp.book.empty() ? dir / kBookStoreFile : fs::path(sp.book);
  const fs::path dialog = sp.dialog.empty() ? dir / kDialogStoreFile : fs::path(sp.dialog);
  const fs::path story = sp.story.empty() ? dir / kStoryStoreFile : fs::path(sp.story);
  require(book, "embed");
  require(dialog, "embed");
  require(story, "embed");
  CatalogStores s;
  s.book = read_store(book);
  s.dialog = read_store(dialog, s.book.dim());
  s.story = read_store(story, s.book.dim());
  return s;
}

int cmd_train(const RunConfig& cfg, const StorePaths& sp, const std::string& model_out,
              const Output& out) {
  const Catalog catalog = load_catalog(cfg.paths.catalog_dir);
  const CatalogStores stores = load_store_files(cfg, sp);
  const std::uint64_t seed = cfg.train.hyperparams.seed;
  const Split split = make_split(catalog, cfg.train.cue_kind, seed);
  const CueShotMap map = build_cue_shot_map(catalog);
  auto pairs = build_training_pairs(
      catalog, stores, map, split.train,
      PairSamplingOptions{cfg.train.cue_kind, optional_unit_kind(cfg.train.unit_kind), seed});
  const std::size_t n_pairs = pairs.size();
  SimilarityModel model = train(std::move(pairs), cfg.train.hyperparams);
  model.cue_kind = std::string(to_string(cfg.train.cue_kind));
  write_file(model_out, model_json(model));

  const double final_loss = model.training_log.empty() ? 0.0 : model.training_log.back();
  std::ostringstream human;
  human << "model " << model_out << ": " << model.cue_kind << ", " << n_pairs << " pairs from "
        << split.train.size() << " train alignments, final loss " << final_loss << "\n";
  out.info(human.str(), {{"command", "train"},
                         {"model", model_out},
                         {"cue_kind", model.cue_kind},
                         {"pairs", n_pairs},
                         {"train_alignments", split.train.size()},
                         {"final_loss", final_loss}});
  return 0;
}

// ---------------------------------------------------------------------------
// query / eval share scorer construction

PairScorer make_scorer(const RunConfig& cfg, ModelTag which) {
  if (cfg.retrieval.scorer == "cosine") return cosine_scorer();
  if (cfg.retrieval.scorer != "model") {
    throw ValidationError("unknown scorer '" + cfg.retrieval.scorer + "' (model, cosine)");
  }
  const std::string& path =
      which == ModelTag::dialog ? cfg.paths.dialog_model : cfg.paths.visual_model;
  return model_scorer(load_model(path));
}

bool needs(ModelTag requested, ModelTag modality) {
  return requested == ModelTag::hybrid || requested == modality;
}

struct QueryArgs {
  std::string text;
  std::string file;
  std::string unit;
  std::string id;
  std::string out;
};

int cmd_query(const RunConfig& cfg, const QueryArgs& args, bool threshold_given,
              const Output& /*out*/) {
  const Catalog catalog = load_catalog(cfg.paths.catalog_dir);
  const LoadedStores loaded = load_stores(cfg.paths.store_dir);
  const ModelTag model = parse_model_tag(cfg.retrieval.model);

  PairScorer dialog = needs(model, ModelTag::dialog) ? make_scorer(cfg, ModelTag::dialog) : nullptr;
  PairScorer visual = needs(model, ModelTag::visual) ? make_scorer(cfg, ModelTag::visual) : nullptr;
  const RetrievalEngine engine(catalog, loaded.stores.dialog, loaded.stores.story, dialog, visual);

  ShortlistMode mode = TopK{cfg.retrieval.top_k};
  if (threshold_given || cfg.retrieval.mode == "threshold") {
    if (!(cfg.retrieval.threshold > 0.0 && cfg.retrieval.threshold < 1.0)) {
      throw ValidationError("threshold must lie in (0, 1)");
    }
    mode = Threshold{cfg.retrieval.threshold};
  } else if (cfg.retrieval.top_k < 1) {
    throw ValidationError("--top-k must be >= 1");
  }

  std::vector<Query> queries;
  const auto scope = parse_scope(cfg.retrieval.scope);
  if (!args.unit.empty()) {
    queries.push_back(Query{args.id.empty() ? args.unit : args.id, "",
                            loaded.stores.book.at(args.unit), mode, scope});
  } else {
    std::vector<std::string> texts;
    if (!args.file.empty()) {
      std::istringstream in(read_file(args.file));
      std::string line;
      while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) texts.push_back(line);
      }
    } else {
      texts.push_back(args.text);
    }
    const auto embedder = embedder_from_tag(loaded.manifest.source_tag);
    if (!embedder) {
      throw ValidationError("stores were produced by '" + loaded.manifest.source_tag +
                            "'; free-text queries need the built-in embedder (use --unit)");
    }
    for (const auto& t : texts) {
      std::string id = args.id.empty() || texts.size() > 1 ? "q-" + hex64(fnv1a64(t)) : args.id;
      queries.push_back(Query{std::move(id), t, embedder->embed(t), mode, scope});
    }
  }

  std::string body;
  for (const auto& q : queries) body += results_jsonl(engine.run(q, model));
  if (args.out.empty()) {
    std::cout << body;
  } else {
    write_file(args.out, body);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string models = "dialog,visual,hybrid";
  std::string variants;
  std::string out;
  std::string results_out;
  std::string eval_config;
};

int cmd_eval(RunConfig cfg, const EvalArgs& args, const Output& out) {
  EvalConfig ec = cfg.evaluation;
  if (!args.eval_config.empty()) ec = parse_eval_config(read_file(args.eval_config));
  if (!args.variants.empty()) {
    ec.variants.clear();
    if (args.variants == "both") {
      ec.variants = {MraVariant::all_same_movie, MraVariant::any_correct_movie};
    } else {
      for (const auto& v : split_csv(args.variants)) ec.variants.push_back(parse_mra_variant(v));
    }
  }

  const Catalog catalog = load_catalog(cfg.paths.catalog_dir);
  const LoadedStores loaded = load_stores(cfg.paths.store_dir);
  std::vector<ModelTag> models;
  for (const auto& m : split_csv(args.models)) models.push_back(parse_model_tag(m));

  bool want_dialog = false;
  bool want_visual = false;
  for (auto m : models) {
    want_dialog = want_dialog || needs(m, ModelTag::dialog);
    want_visual = want_visual || needs(m, ModelTag::visual);
  }
  auto checked_scorer = [&](ModelTag which) -> PairScorer {
    if (cfg.retrieval.scorer != "model") return make_scorer(cfg, which);
    const std::string& path =
        which == ModelTag::dialog ? cfg.paths.dialog_model : cfg.paths.visual_model;
    SimilarityModel m = load_model(path);
    if (m.hyperparams.seed != ec.seed) {
      throw ValidationError("model " + path + " was trained on the split with seed " +
                            std::to_string(m.hyperparams.seed) + " but eval uses seed " +
                            std::to_string(ec.seed));
    }
    return model_scorer(std::move(m));
  };
  PairScorer dialog = want_dialog ? checked_scorer(ModelTag::dialog) : nullptr;
  PairScorer visual = want_visual ? checked_scorer(ModelTag::visual) : nullptr;
  const RetrievalEngine engine(catalog, loaded.stores.dialog, loaded.stores.story, dialog, visual);

  const Split split = make_split(catalog, ec.cue_kind, ec.seed);
  const auto queries = test_queries(catalog, loaded.stores.book, split, ec.unit_kind);

  std::vector<MraReport> reports;
  std::vector<ScoredMatch> ranked;
  for (auto m : models) {
    for (std::size_t vi = 0; vi < ec.variants.size(); ++vi) {
      const RankFn rank = [&engine, m](const Query& q) { return engine.run(q, m); };
      reports.push_back(evaluate_mra(queries, rank, m, ec.variants[vi], ec.k_max, ec.scope,
                                     vi == 0 && !args.results_out.empty() ? &ranked : nullptr));
      if (!is_monotone(reports.back())) {
        throw Error("internal: non-monotone CMC for " + std::string(to_string(m)));
      }
    }
  }
  const std::string csv = cmc_csv(reports);
  if (!args.results_out.empty()) write_file(args.results_out, results_jsonl(ranked));
  if (args.out.empty()) {
    std::cout << csv;
    return 0;
  }
  write_file(args.out, csv);
  std::ostringstream human;
  human << "cmc " << args.out << ": " << queries.size() << " queries, " << reports.size()
        << " curves\n";
  for (const auto& r : reports) {
    human << "  " << to_string(r.model) << " " << to_string(r.variant) << " rank-1 " << r.at(1)
          << " rank-" << r.k_max() << " " << r.at(r.k_max()) << "\n";
  }
  out.info(human.str(), {{"command", "eval"},
                         {"cmc", args.out},
                         {"queries", queries.size()},
                         {"rows", reports.size() * static_cast<std::size_t>(ec.k_max)}});
  return 0;
}

// ---------------------------------------------------------------------------
// stitch

struct StitchArgs {
  std::string results;
  std::string movie;
};

int cmd_stitch(const RunConfig& cfg, const StitchArgs& args, const Output& out) {
  require(args.results, "query");
  const Catalog catalog = load_catalog(cfg.paths.catalog_dir);
  std::vector<ScoredMatch> matches = parse_results_jsonl(read_file(args.results));
  if (!args.movie.empty()) {
    const MovieId movie(args.movie);
    std::erase_if(matches, [&](const ScoredMatch& m) { return m.movie != movie; });
  }
  const Timeline t =
      build_timeline(matches, catalog, StitchOptions{cfg.stitch.pad_ms, cfg.stitch.gap_merge_ms});
  const fs::path dir = cfg.paths.output_dir;
  emit_concat(t, cfg.stitch.video_template, dir / "concat.txt");
  emit_edl(t, dir / "edl.tsv");
  std::ostringstream human;
  human << "timeline " << t.movie.str() << ": " << t.segments.size() << " segments, "
        << t.total_ms << " ms -> " << (dir / "concat.txt").string() << ", "
        << (dir / "edl.tsv").string() << "\n";
  out.info(human.str(), {{"command", "stitch"},
                         {"movie", t.movie.str()},
                         {"segments", t.segments.size()},
                         {"total_ms", t.total_ms},
                         {"concat", (dir / "concat.txt").string()},
                         {"edl", (dir / "edl.tsv").string()}});
  return 0;
}

std::optional<std::string> prescan_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (a.starts_with("--config=")) return a.substr(9);
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  log::init_from_env();
  RunConfig cfg;
  bool json_output = false;

  CLI::App app{"bookreel: retrieve and stitch movie shots that match book text"};
  app.set_version_flag("--version", BOOKREEL_VERSION);
  app.require_subcommand(1);
  app.add_flag("--json", json_output, "Print machine-readable JSON lines instead of text");
  app.add_option("--config", "RunConfig JSON supplying defaults; flags override it")
      ->check(CLI::ExistingFile);

  // Load config before binding so parsed flags overwrite config values.
  try {
    if (auto path = prescan_config(argc, argv); path && fs::exists(*path)) {
      cfg = parse_run_config(read_file(*path));
    }
  } catch (const std::exception& e) {
    std::cerr << "bookreel: error: config: " << one_line(e.what()) << "\n";
    return kExitFailure;
  }

  // ingest
  IngestArgs ingest_args;
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse books, subtitles, shots and alignments into a catalog");
  ingest_cmd->add_option("--books", ingest_args.books, "Book text files, one per movie (stem = movie id)");
  ingest_cmd->add_option("--srts", ingest_args.srts, "SRT subtitle files (stem = movie id)");
  ingest_cmd->add_option("--shots", ingest_args.shots, "Shot metadata JSONL files");
  ingest_cmd->add_option("--aligns", ingest_args.aligns, "Alignment JSONL files");
  ingest_cmd->add_option("--out", cfg.paths.catalog_dir, "Catalog directory to write")->capture_default_str();

  // embed
  auto* embed_cmd = app.add_subcommand("embed", "Embed every catalog text unit into binary stores");
  embed_cmd->add_option("--catalog", cfg.paths.catalog_dir, "Catalog directory")->capture_default_str();
  embed_cmd->add_option("--embedder", cfg.embedder.name, "Embedder name (baseline)")->capture_default_str();
  embed_cmd->add_option("--dim", cfg.embedder.dim, "Embedding dimension")->capture_default_str();
  embed_cmd->add_option("--seed", cfg.embedder.seed, "Hash seed")->capture_default_str();
  embed_cmd->add_option("--out", cfg.paths.store_dir, "Store directory to write")->capture_default_str();

  // train
  StorePaths store_paths;
  std::string model_out;
  std::string train_cue_kind = std::string(to_string(cfg.train.cue_kind));
  auto* train_cmd = app.add_subcommand("train", "Fit the pair similarity classifier on the train split");
  train_cmd->add_option("--catalog", cfg.paths.catalog_dir, "Catalog directory")->capture_default_str();
  train_cmd->add_option("--stores", cfg.paths.store_dir, "Store directory (default source for the three stores)")->capture_default_str();
  train_cmd->add_option("--book-store", store_paths.book, "Book unit store file");
  train_cmd->add_option("--dialog-store", store_paths.dialog, "Subtitle cue store file");
  train_cmd->add_option("--story-store", store_paths.story, "Shot story store file");
  train_cmd->add_option("--cue-kind", train_cue_kind, "Alignment cue kind: dialog or visual")
      ->check(CLI::IsMember({"dialog", "visual"}))->capture_default_str();
  train_cmd->add_option("--seed", cfg.train.hyperparams.seed, "Split and negative-sampling seed")->capture_default_str();
  train_cmd->add_option("--unit-kind", cfg.train.unit_kind, "Book unit granularity: sentence, paragraph (default: as aligned)");
  train_cmd->add_option("--lr", cfg.train.hyperparams.learning_rate, "Learning rate")->capture_default_str();
  train_cmd->add_option("--epochs", cfg.train.hyperparams.epochs, "Full-batch epochs")->capture_default_str();
  train_cmd->add_option("--l2", cfg.train.hyperparams.l2_lambda, "L2 penalty")->capture_default_str();
  train_cmd->add_option("--out", model_out, "Model JSON to write")->required();

  // query
  QueryArgs query_args;
  auto* query_cmd = app.add_subcommand("query", "Rank shots for a piece of text");
  query_cmd->add_option("--catalog", cfg.paths.catalog_dir, "Catalog directory")->capture_default_str();
  query_cmd->add_option("--stores", cfg.paths.store_dir, "Store directory")->capture_default_str();
  query_cmd->add_option("--dialog-model", cfg.paths.dialog_model, "Dialog model JSON")->capture_default_str();
  query_cmd->add_option("--visual-model", cfg.paths.visual_model, "Visual model JSON")->capture_default_str();
  auto* text_opt = query_cmd->add_option("--text", query_args.text, "Query text");
  auto* file_opt = query_cmd->add_option("--file", query_args.file, "File with one query per line");
  auto* unit_opt = query_cmd->add_option("--unit", query_args.unit, "Book unit id whose stored vector is the query");
  text_opt->excludes(file_opt)->excludes(unit_opt);
  file_opt->excludes(unit_opt);
  query_cmd->add_option("--id", query_args.id, "Query id written into results");
  query_cmd->add_option("--model", cfg.retrieval.model, "dialog, visual or hybrid")
      ->check(CLI::IsMember({"dialog", "visual", "hybrid"}))->capture_default_str();
  auto* topk_opt = query_cmd->add_option("--top-k", cfg.retrieval.top_k, "Keep the k best shots")->capture_default_str();
  auto* thr_opt = query_cmd->add_option("--threshold", cfg.retrieval.threshold, "Keep shots scoring at least t, 0 < t < 1");
  topk_opt->excludes(thr_opt);
  query_cmd->add_option("--scope", cfg.retrieval.scope, "'all' or a movie id")->capture_default_str();
  query_cmd->add_option("--scorer", cfg.retrieval.scorer, "model or cosine")
      ->check(CLI::IsMember({"model", "cosine"}))->capture_default_str();
  query_cmd->add_option("--out", query_args.out, "Write result JSONL here instead of stdout");

  // eval
  EvalArgs eval_args;
  std::string eval_cue_kind;
  std::string eval_unit_kind;
  std::string eval_scope;
  auto* eval_cmd = app.add_subcommand("eval", "Movie retrieval accuracy on the test split, as CMC CSV");
  eval_cmd->add_option("--catalog", cfg.paths.catalog_dir, "Catalog directory")->capture_default_str();
  eval_cmd->add_option("--stores", cfg.paths.store_dir, "Store directory")->capture_default_str();
  eval_cmd->add_option("--dialog-model", cfg.paths.dialog_model, "Dialog model JSON")->capture_default_str();
  eval_cmd->add_option("--visual-model", cfg.paths.visual_model, "Visual model JSON")->capture_default_str();
  eval_cmd->add_option("--seed", cfg.evaluation.seed, "Split seed (must match training)")->capture_default_str();
  eval_cmd->add_option("--cue-kind", eval_cue_kind, "Alignment cue kind of the test queries");
  eval_cmd->add_option("--models", eval_args.models, "Comma list of dialog, visual, hybrid")->capture_default_str();
  eval_cmd->add_option("--variants", eval_args.variants, "both, all_same_movie, any_correct_movie (comma list)");
  eval_cmd->add_option("--k-max", cfg.evaluation.k_max, "Largest rank cutoff")->capture_default_str();
  eval_cmd->add_option("--scope", eval_scope, "'all' or a movie id");
  eval_cmd->add_option("--unit-kind", eval_unit_kind, "Query granularity: sentence, paragraph, aligned");
  eval_cmd->add_option("--scorer", cfg.retrieval.scorer, "model or cosine")
      ->check(CLI::IsMember({"model", "cosine"}))->capture_default_str();
  eval_cmd->add_option("--eval-config", eval_args.eval_config, "Evaluation config JSON");
  eval_cmd->add_option("--out", eval_args.out, "CMC CSV path (stdout when omitted)");
  eval_cmd->add_option("--results-out", eval_args.results_out, "Ranked lists (top k-max) as JSONL");

  // stitch
  StitchArgs stitch_args;
  auto* stitch_cmd = app.add_subcommand("stitch", "Turn ranked results into a concat playlist and EDL");
  stitch_cmd->add_option("--catalog", cfg.paths.catalog_dir, "Catalog directory")->capture_default_str();
  stitch_cmd->add_option("--results", stitch_args.results, "Result JSONL from query")->required();
  stitch_cmd->add_option("--movie", stitch_args.movie, "Keep only results from this movie");
  stitch_cmd->add_option("--pad-ms", cfg.stitch.pad_ms, "Padding added to both ends of each shot")->capture_default_str();
  stitch_cmd->add_option("--gap-merge-ms", cfg.stitch.gap_merge_ms, "Merge segments separated by at most this gap")->capture_default_str();
  stitch_cmd->add_option("--video-template", cfg.stitch.video_template, "Video path; {movie} expands to the movie id")->capture_default_str();
  stitch_cmd->add_option("--out", cfg.paths.output_dir, "Directory for concat.txt and edl.tsv")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const Output out{json_output};
  auto fail = [&](const std::string& kind, const std::string& msg, int code,
                  const std::string& stage = {}) {
    if (json_output) {
      nlohmann::ordered_json j{{"error", kind}, {"message", one_line(msg)}};
      if (!stage.empty()) j["stage"] = stage;
      std::cerr << j.dump() << "\n";
    } else {
      std::cerr << "bookreel: error: " << kind << ": " << one_line(msg) << "\n";
    }
    return code;
  };

  try {
    if (*ingest_cmd) return cmd_ingest(cfg, ingest_args, out);
    if (*embed_cmd) return cmd_embed(cfg, out);
    if (*train_cmd) {
      cfg.train.cue_kind = parse_cue_kind(train_cue_kind);
      return cmd_train(cfg, store_paths, model_out, out);
    }
    if (*query_cmd) {
      if (!*text_opt && !*file_opt && !*unit_opt) {
        return fail("usage", "query needs one of --text, --file, --unit", kExitFailure);
      }
      return cmd_query(cfg, query_args, static_cast<bool>(*thr_opt), out);
    }
    if (*eval_cmd) {
      if (!eval_cue_kind.empty()) cfg.evaluation.cue_kind = parse_cue_kind(eval_cue_kind);
      if (!eval_unit_kind.empty()) cfg.evaluation.unit_kind = optional_unit_kind(eval_unit_kind);
      if (!eval_scope.empty()) cfg.evaluation.scope = parse_scope(eval_scope);
      return cmd_eval(cfg, eval_args, out);
    }
    if (*stitch_cmd) return cmd_stitch(cfg, stitch_args, out);
  } catch (const MissingArtifact& e) {
    return fail("missing_artifact", std::string(e.what()) + " (run `bookreel " + e.stage() + "` first)",
                kExitMissingArtifact, e.stage());
  } catch (const SrtError& e) {
    return fail("srt", e.what(), kExitFailure);
  } catch (const StoreError& e) {
    return fail("store", e.what(), kExitFailure);
  } catch (const ValidationError& e) {
    return fail("validation", e.what(), kExitFailure);
  } catch (const DimensionError& e) {
    return fail("dimension", e.what(), kExitFailure);
  } catch (const IoError& e) {
    return fail("io", e.what(), kExitFailure);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kExitFailure);
  }
  return kExitFailure;
}
