#include "support/pipeline.hpp"

#include <random>

#include "bookreel/training_pairs.hpp"
#include "support/oracles.hpp"
#include "bookreel/error.hpp"
#include "support/synth.hpp"

namespace bookreel::testing {

TrainedModels train_models(const Catalog& catalog, const CatalogStores& stores, std::uint64_t seed) {
  const CueShotMap map = build_cue_shot_map(catalog);
  Hyperparams hp;
  hp.seed = seed;
  TrainedModels out;
  for (auto kind : {CueKind::dialog, CueKind::visual}) {
    const Split split = make_split(catalog, kind, seed);
    auto pairs = build_training_pairs(catalog, stores, map, split.train,
                                      PairSamplingOptions{kind, std::nullopt, seed});
    auto model = train(std::move(pairs), hp);
    model.cue_kind = std::string(to_string(kind));
    (kind == CueKind::dialog ? out.dialog : out.visual) = std::move(model);
  }
  return out;
}

std::vector<MraReport> evaluate_all(const Catalog& catalog, const CatalogStores& stores,
                                    const RetrievalEngine& engine, std::uint64_t seed, int k_max) {
  const Split split = make_split(catalog, CueKind::dialog, seed);
  const auto queries = test_queries(catalog, stores.book, split);
  std::vector<MraReport> reports;
  for (auto model : {ModelTag::dialog, ModelTag::visual, ModelTag::hybrid}) {
    const RankFn rank = [&engine, model](const Query& q) { return engine.run(q, model); };
    for (auto variant : {MraVariant::all_same_movie, MraVariant::any_correct_movie}) {
      reports.push_back(evaluate_mra(queries, rank, model, variant, k_max));
    }
  }
  return reports;
}

std::vector<MraReport> run_synthetic_benchmark(std::uint64_t seed) {
  SynthSpec spec;
  spec.seed = seed;
  spec.shots_per_movie = 100;
  spec.paragraphs_per_movie = 150;
  spec.dialog_aligns_per_movie = 100;
  spec.visual_aligns_per_movie = 50;
  // Small enough that the two vocabularies rarely share a hash bucket at dim 64.
  spec.vocab_per_movie = 12;
  TempDir dir("bookreel-bench");
  const Catalog catalog = ingest(write_synth_corpus(spec, dir.path())).catalog;
  const auto stores = embed_catalog(catalog, BaselineEmbedder());
  const auto models = train_models(catalog, stores, 1);
  const RetrievalEngine engine(catalog, stores.dialog, stores.story, model_scorer(models.dialog),
                               model_scorer(models.visual));
  return evaluate_all(catalog, stores, engine, 1, 10);
}

const MraReport& find_report(const std::vector<MraReport>& reports, ModelTag model,
                             MraVariant variant) {
  for (const auto& r : reports) {
    if (r.model == model && r.variant == variant) return r;
  }
  throw Error("no report for " + std::string(to_string(model)));
}

bool dominates(const std::vector<double>& any, const std::vector<double>& all) {
  if (any.size() != all.size()) return false;
  for (std::size_t i = 0; i < any.size(); ++i) {
    if (any[i] < all[i]) return false;
  }
  return true;
}

MraTrial run_mra_trial(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SynthSpec spec;
  spec.seed = seed;
  spec.movies = 2 + static_cast<int>(rng() % 4);
  spec.shots_per_movie = 6 + static_cast<int>(rng() % 10);
  spec.paragraphs_per_movie = 20;
  spec.sentences_per_paragraph = 2;
  spec.dialog_aligns_per_movie = 5 + static_cast<int>(rng() % 8);
  spec.visual_aligns_per_movie = 2;
  spec.vocab_per_movie = 10 + static_cast<int>(rng() % 30);
  spec.shared_vocab = 20;
  spec.shared_rate = 0.2 + 0.6 * static_cast<double>(rng() % 100) / 100.0;

  TempDir dir("bookreel-mra");
  const Catalog catalog = ingest(write_synth_corpus(spec, dir.path())).catalog;
  const auto stores = embed_catalog(catalog, BaselineEmbedder(16, seed));
  const RetrievalEngine engine(catalog, stores.dialog, stores.story, cosine_scorer(), cosine_scorer());
  const Split split = make_split(catalog, CueKind::dialog, seed);
  const auto queries = test_queries(catalog, stores.book, split);
  const int k_max = 10;

  std::vector<std::pair<std::string, std::string>> truth;
  for (const auto& q : queries) truth.emplace_back(q.id, q.movie.str());

  MraTrial trial;
  trial.queries = static_cast<int>(queries.size());
  for (auto model : {ModelTag::dialog, ModelTag::visual, ModelTag::hybrid}) {
    const RankFn rank = [&engine, model](const Query& q) { return engine.run(q, model); };
    std::vector<double> all_same;
    for (auto variant : {MraVariant::all_same_movie, MraVariant::any_correct_movie}) {
      std::vector<ScoredMatch> ranked;
      const auto report = evaluate_mra(queries, rank, model, variant, k_max, std::nullopt, &ranked);
      const auto expected = oracle_mra(results_jsonl(ranked), truth,
                                       variant == MraVariant::all_same_movie, k_max);
      if (report.accuracy != expected) ++trial.mismatches;
      if (!is_monotone(report)) trial.monotone = false;
      if (variant == MraVariant::all_same_movie) {
        all_same = report.accuracy;
      } else if (!dominates(report.accuracy, all_same)) {
        trial.monotone = false;
      }
    }
  }
  return trial;
}

}  // namespace bookreel::testing

#include "support/process.hpp"

namespace bookreel::testing {

CliRun run_cli_pipeline(const std::string& cli, const IngestInputs& inputs,
                        const std::filesystem::path& work, const std::string& query_text,
                        const std::string& stitch_movie) {
  const std::string w = work.string();
  auto join = [](const std::vector<std::filesystem::path>& paths) {
    std::string out;
    for (const auto& p : paths) out += " " + quoted(p.string());
    return out;
  };
  const std::string common = " --catalog " + quoted(w + "/catalog") + " --stores " + quoted(w + "/stores");
  const std::string models =
      " --dialog-model " + quoted(w + "/dialog.json") + " --visual-model " + quoted(w + "/visual.json");
  const std::vector<std::string> commands{
      "ingest --books" + join(inputs.books) + " --srts" + join(inputs.srts) + " --shots" +
          join(inputs.shots) + " --aligns" + join(inputs.aligns) + " --out " + quoted(w + "/catalog"),
      "embed --catalog " + quoted(w + "/catalog") + " --out " + quoted(w + "/stores"),
      "train" + common + " --cue-kind dialog --out " + quoted(w + "/dialog.json"),
      "train" + common + " --cue-kind visual --out " + quoted(w + "/visual.json"),
      "query" + common + models + " --model hybrid --top-k 5 --text " + quoted(query_text) +
          " --out " + quoted(w + "/results.jsonl"),
      "eval" + common + models + " --out " + quoted(w + "/cmc.csv") + " --results-out " +
          quoted(w + "/ranked.jsonl"),
      "stitch --catalog " + quoted(w + "/catalog") + " --results " + quoted(w + "/results.jsonl") +
          " --movie " + stitch_movie + " --pad-ms 250 --gap-merge-ms 500 --out " + quoted(w + "/timeline"),
  };
  CliRun run;
  for (const auto& c : commands) {
    const auto r = run_command(quoted(cli) + " " + c + " 2>&1");
    if (r.exit_code != 0) {
      run.failure = c + " -> exit " + std::to_string(r.exit_code) + ": " + r.out;
      return run;
    }
  }
  for (const char* name : {"catalog/meta.json", "catalog/book_units.jsonl", "catalog/cues.jsonl",
                           "catalog/shots.jsonl", "catalog/alignments.jsonl", "stores/book.bkrl",
                           "stores/dialog.bkrl", "stores/story.bkrl", "stores/manifest.json",
                           "dialog.json", "visual.json", "results.jsonl", "cmc.csv", "ranked.jsonl",
                           "timeline/concat.txt", "timeline/edl.tsv"}) {
    run.artifacts[name] = read_file(work / name);
  }
  return run;
}

}  // namespace bookreel::testing
