#include "bookreel/similarity.hpp"

#include <algorithm>
#include <bit>

#include <json.hpp>

#include "bookreel/hash.hpp"

namespace bookreel {
namespace {

void hash_vector(Fnv1a64& h, const EmbeddingVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(v[i]);
    for (int k = 0; k < 4; ++k) h.update_byte(static_cast<std::uint8_t>(bits >> (8 * k)));
  }
}

std::string training_checksum(const std::vector<LabeledPair>& sorted_pairs) {
  Fnv1a64 h;
  for (const auto& p : sorted_pairs) {
    h.update(p.provenance);
    h.update_byte(p.label == PairLabel::match ? 1 : 0);
    hash_vector(h, p.book_vec);
    hash_vector(h, p.other_vec);
  }
  return hex64(h.value());
}

void sort_pairs(std::vector<LabeledPair>& pairs) {
  std::stable_sort(pairs.begin(), pairs.end(), [](const LabeledPair& a, const LabeledPair& b) {
    return a.provenance < b.provenance;
  });
}

}  // namespace

TrainingProblem make_problem(std::vector<LabeledPair> pairs, double l2_lambda) {
  sort_pairs(pairs);
  bool has_match = false;
  bool has_non_match = false;
  for (const auto& p : pairs) {
    (p.label == PairLabel::match ? has_match : has_non_match) = true;
  }
  if (!has_match || !has_non_match) {
    throw ValidationError("degenerate training set: need at least one match and one non-match");
  }
  const Eigen::Index dim = pairs.front().book_vec.size();
  TrainingProblem problem;
  problem.features.resize(static_cast<Eigen::Index>(pairs.size()), 2 * dim);
  problem.labels.resize(static_cast<Eigen::Index>(pairs.size()));
  problem.l2_lambda = l2_lambda;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    if (p.book_vec.size() != dim || p.other_vec.size() != dim) {
      throw DimensionError("training pair '" + p.provenance + "' has mismatched dims");
    }
    const auto row = static_cast<Eigen::Index>(i);
    problem.features.row(row) = pair_features(p.book_vec.cast<double>(), p.other_vec.cast<double>());
    problem.labels[row] = p.label == PairLabel::match ? 1.0 : 0.0;
  }
  return problem;
}

double regularized_loss(const Eigen::VectorXd& params, const TrainingProblem& problem) {
  const Eigen::Index p = problem.features.cols();
  const auto w = params.head(p);
  const double bias = params[p];
  const Eigen::VectorXd z = (problem.features * w).array() + bias;
  double total = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) total += softplus(z[i]) - problem.labels[i] * z[i];
  return total / static_cast<double>(z.size()) + 0.5 * problem.l2_lambda * w.squaredNorm();
}

Eigen::VectorXd loss_gradient(const Eigen::VectorXd& params, const TrainingProblem& problem) {
  const Eigen::Index p = problem.features.cols();
  const auto w = params.head(p);
  const Eigen::VectorXd z = (problem.features * w).array() + params[p];
  Eigen::VectorXd residual = z.unaryExpr([](double v) { return sigmoid(v); }) - problem.labels;
  residual /= static_cast<double>(z.size());
  Eigen::VectorXd grad(p + 1);
  grad.head(p) = problem.features.transpose() * residual + problem.l2_lambda * w;
  grad[p] = residual.sum();
  return grad;
}

SimilarityModel train(std::vector<LabeledPair> pairs, const Hyperparams& hp) {
  sort_pairs(pairs);
  const std::string checksum = training_checksum(pairs);
  const TrainingProblem problem = make_problem(std::move(pairs), hp.l2_lambda);

  Eigen::VectorXd params = Eigen::VectorXd::Zero(problem.parameter_count());
  SimilarityModel model;
  model.hyperparams = hp;
  model.training_checksum = checksum;
  model.training_log.reserve(static_cast<std::size_t>(std::max(hp.epochs, 0)));
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    params -= hp.learning_rate * loss_gradient(params, problem);
    model.training_log.push_back(regularized_loss(params, problem));
  }
  const Eigen::Index p = problem.features.cols();
  model.weights = params.head(p);
  model.bias = params[p];
  return model;
}

double score(const SimilarityModel& model, const EmbeddingVector& b, const EmbeddingVector& d) {
  if (b.size() != d.size() || 2 * b.size() != model.weights.size()) {
    throw DimensionError("score: model dim " + std::to_string(model.dim()) + ", vectors " +
                         std::to_string(b.size()) + " and " + std::to_string(d.size()));
  }
  const Eigen::VectorXd f = pair_features(b.cast<double>(), d.cast<double>());
  return sigmoid(model.weights.dot(f) + model.bias);
}

std::string model_json(const SimilarityModel& model) {
  nlohmann::ordered_json j;
  j["dim"] = model.dim();
  j["cue_kind"] = model.cue_kind;
  j["weights"] = std::vector<double>(model.weights.data(), model.weights.data() + model.weights.size());
  j["bias"] = model.bias;
  j["hyperparams"] = {{"learning_rate", model.hyperparams.learning_rate},
                      {"epochs", model.hyperparams.epochs},
                      {"l2_lambda", model.hyperparams.l2_lambda},
                      {"seed", model.hyperparams.seed}};
  j["seed"] = model.hyperparams.seed;
  j["training_data_checksum"] = model.training_checksum;
  j["training_log"] = model.training_log;
  return j.dump() + "\n";
}

SimilarityModel parse_model_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    SimilarityModel m;
    const int dim = j.at("dim").get<int>();
    const auto w = j.at("weights").get<std::vector<double>>();
    if (static_cast<int>(w.size()) != 2 * dim) {
      throw ValidationError("model weights length " + std::to_string(w.size()) +
                            " does not match 2*dim = " + std::to_string(2 * dim));
    }
    m.weights = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    if (!m.weights.allFinite()) throw ValidationError("model weights are not finite");
    m.bias = j.at("bias").get<double>();
    const auto& hp = j.at("hyperparams");
    m.hyperparams.learning_rate = hp.at("learning_rate").get<double>();
    m.hyperparams.epochs = hp.at("epochs").get<int>();
    m.hyperparams.l2_lambda = hp.at("l2_lambda").get<double>();
    m.hyperparams.seed = hp.at("seed").get<std::uint64_t>();
    m.training_checksum = j.value("training_data_checksum", std::string{});
    m.cue_kind = j.value("cue_kind", std::string{});
    m.training_log = j.value("training_log", std::vector<double>{});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("model file: ") + e.what());
  }
}

}  // namespace bookreel
