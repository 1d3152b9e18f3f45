#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bookreel/embedding.hpp"
#include "bookreel/error.hpp"

namespace bookreel {

/// Pair representation fed to the similarity classifier: the elementwise
/// product of the two vectors followed by their elementwise absolute
/// difference. Both halves are symmetric in (b, d).
template <typename DerivedB, typename DerivedD>
Eigen::Matrix<typename DerivedB::Scalar, Eigen::Dynamic, 1> pair_features(
    const Eigen::MatrixBase<DerivedB>& b, const Eigen::MatrixBase<DerivedD>& d) {
  using Scalar = typename DerivedB::Scalar;
  if (b.size() != d.size()) {
    throw DimensionError("pair_features: dim " + std::to_string(b.size()) + " vs " +
                         std::to_string(d.size()));
  }
  const Eigen::Index n = b.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out(2 * n);
  out.head(n) = b.cwiseProduct(d.template cast<Scalar>());
  out.tail(n) = (b - d.template cast<Scalar>()).cwiseAbs();
  return out;
}

/// Cosine similarity in double precision; 0 when either vector has zero norm.
template <typename DerivedB, typename DerivedD>
double cosine(const Eigen::MatrixBase<DerivedB>& b, const Eigen::MatrixBase<DerivedD>& d) {
  if (b.size() != d.size()) {
    throw DimensionError("cosine: dim " + std::to_string(b.size()) + " vs " +
                         std::to_string(d.size()));
  }
  const Eigen::VectorXd bd = b.template cast<double>();
  const Eigen::VectorXd dd = d.template cast<double>();
  const double nb = bd.norm();
  const double nd = dd.norm();
  if (nb == 0.0 || nd == 0.0) return 0.0;
  const double c = bd.dot(dd) / (nb * nd);
  return c > 1.0 ? 1.0 : (c < -1.0 ? -1.0 : c);
}

inline double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// log(1 + exp(z)) without overflow.
inline double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

struct Hyperparams {
  double learning_rate = 0.1;
  int epochs = 500;
  double l2_lambda = 1e-4;
  std::uint64_t seed = 0;

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

enum class PairLabel { non_match = 0, match = 1 };

struct LabeledPair {
  EmbeddingVector book_vec;
  EmbeddingVector other_vec;
  PairLabel label = PairLabel::non_match;
  /// Sort key for training order; alignment id or negative-sampling record.
  std::string provenance;
};

/// Binary logistic classifier over pair features.
struct SimilarityModel {
  Eigen::VectorXd weights;
  double bias = 0.0;
  Hyperparams hyperparams;
  std::vector<double> training_log;
  std::string training_checksum;
  /// Which alignment cue kind produced the training pairs ("dialog", "visual").
  std::string cue_kind;

  int dim() const { return static_cast<int>(weights.size() / 2); }
};

/// Dense design matrix for full-batch training.
struct TrainingProblem {
  Eigen::MatrixXd features;  // one row per pair
  Eigen::VectorXd labels;    // 0 or 1
  double l2_lambda = 0.0;

  Eigen::Index parameter_count() const { return features.cols() + 1; }
};

/// Builds the problem after sorting pairs by provenance. Throws
/// ValidationError("degenerate training set") unless both labels occur.
TrainingProblem make_problem(std::vector<LabeledPair> pairs, double l2_lambda);

/// Mean logistic loss plus (lambda/2)|w|^2; `params` is [weights; bias], bias unregularized.
double regularized_loss(const Eigen::VectorXd& params, const TrainingProblem& problem);
Eigen::VectorXd loss_gradient(const Eigen::VectorXd& params, const TrainingProblem& problem);

/// Full-batch gradient descent from zero initialization. Deterministic for a
/// given multiset of pairs.
SimilarityModel train(std::vector<LabeledPair> pairs, const Hyperparams& hp = {});

/// sigmoid(w . pair_features(b, d) + bias), in (0, 1).
double score(const SimilarityModel& model, const EmbeddingVector& b, const EmbeddingVector& d);

std::string model_json(const SimilarityModel& model);
SimilarityModel parse_model_json(std::string_view text);

}  // namespace bookreel
