#include "bookreel/run_config.hpp"

#include <json.hpp>

namespace bookreel {

std::string run_config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["paths"] = {{"catalog_dir", c.paths.catalog_dir},
                {"store_dir", c.paths.store_dir},
                {"dialog_model", c.paths.dialog_model},
                {"visual_model", c.paths.visual_model},
                {"output_dir", c.paths.output_dir}};
  j["embedder"] = {{"name", c.embedder.name}, {"dim", c.embedder.dim}, {"seed", c.embedder.seed}};
  j["train"] = {{"cue_kind", to_string(c.train.cue_kind)},
                {"unit_kind", c.train.unit_kind},
                {"learning_rate", c.train.hyperparams.learning_rate},
                {"epochs", c.train.hyperparams.epochs},
                {"l2_lambda", c.train.hyperparams.l2_lambda},
                {"seed", c.train.hyperparams.seed}};
  j["retrieval"] = {{"model", c.retrieval.model},         {"mode", c.retrieval.mode},
                    {"top_k", c.retrieval.top_k},         {"threshold", c.retrieval.threshold},
                    {"scope", c.retrieval.scope},         {"scorer", c.retrieval.scorer}};
  j["stitch"] = {{"pad_ms", c.stitch.pad_ms},
                 {"gap_merge_ms", c.stitch.gap_merge_ms},
                 {"video_template", c.stitch.video_template}};
  j["evaluation"] = nlohmann::ordered_json::parse(eval_config_json(c.evaluation));
  return j.dump(2) + "\n";
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig c;
  try {
    const auto j = nlohmann::json::parse(text);
    if (auto p = j.find("paths"); p != j.end()) {
      c.paths.catalog_dir = p->value("catalog_dir", c.paths.catalog_dir);
      c.paths.store_dir = p->value("store_dir", c.paths.store_dir);
      c.paths.dialog_model = p->value("dialog_model", c.paths.dialog_model);
      c.paths.visual_model = p->value("visual_model", c.paths.visual_model);
      c.paths.output_dir = p->value("output_dir", c.paths.output_dir);
    }
    if (auto e = j.find("embedder"); e != j.end()) {
      c.embedder.name = e->value("name", c.embedder.name);
      c.embedder.dim = e->value("dim", c.embedder.dim);
      c.embedder.seed = e->value("seed", c.embedder.seed);
    }
    if (auto t = j.find("train"); t != j.end()) {
      if (t->contains("cue_kind")) c.train.cue_kind = parse_cue_kind(t->at("cue_kind").get<std::string>());
      c.train.unit_kind = t->value("unit_kind", c.train.unit_kind);
      auto& hp = c.train.hyperparams;
      hp.learning_rate = t->value("learning_rate", hp.learning_rate);
      hp.epochs = t->value("epochs", hp.epochs);
      hp.l2_lambda = t->value("l2_lambda", hp.l2_lambda);
      hp.seed = t->value("seed", hp.seed);
    }
    if (auto r = j.find("retrieval"); r != j.end()) {
      c.retrieval.model = r->value("model", c.retrieval.model);
      c.retrieval.mode = r->value("mode", c.retrieval.mode);
      c.retrieval.top_k = r->value("top_k", c.retrieval.top_k);
      c.retrieval.threshold = r->value("threshold", c.retrieval.threshold);
      c.retrieval.scope = r->value("scope", c.retrieval.scope);
      c.retrieval.scorer = r->value("scorer", c.retrieval.scorer);
    }
    if (auto s = j.find("stitch"); s != j.end()) {
      c.stitch.pad_ms = s->value("pad_ms", c.stitch.pad_ms);
      c.stitch.gap_merge_ms = s->value("gap_merge_ms", c.stitch.gap_merge_ms);
      c.stitch.video_template = s->value("video_template", c.stitch.video_template);
    }
    if (auto e = j.find("evaluation"); e != j.end()) c.evaluation = parse_eval_config(e->dump());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("run config: ") + e.what());
  }
  return c;
}

}  // namespace bookreel
