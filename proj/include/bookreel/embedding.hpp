#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bookreel/catalog.hpp"

namespace bookreel {

/// Vectors are kept in single precision, matching the on-disk format.
using EmbeddingVector = Eigen::VectorXf;

/// Text to fixed-dimension vector. Implementations must be deterministic and
/// safe to call concurrently once constructed.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::string name() const = 0;
  virtual int dim() const = 0;
  virtual EmbeddingVector embed(std::string_view text) const = 0;
};

/// Lowercased ASCII alphanumeric runs; bytes >= 0x80 count as token characters
/// so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

/// Signed feature hashing: each token goes to bucket `h % dim` with sign from
/// the top bit of its seeded FNV-1a hash; the sum is L2-normalized. No tokens
/// gives the zero vector.
EmbeddingVector baseline_embed(std::string_view text, int dim, std::uint64_t seed);

class BaselineEmbedder final : public Embedder {
 public:
  static constexpr int kDefaultDim = 64;
  static constexpr std::uint64_t kDefaultSeed = 7;

  explicit BaselineEmbedder(int dim = kDefaultDim, std::uint64_t seed = kDefaultSeed);

  std::string name() const override;
  int dim() const override { return dim_; }
  std::uint64_t seed() const { return seed_; }
  EmbeddingVector embed(std::string_view text) const override {
    return baseline_embed(text, dim_, seed_);
  }

 private:
  int dim_;
  std::uint64_t seed_;
};

/// Id-keyed vectors of one dimension. Iteration order is lexical by id.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  EmbeddingStore(int dim, std::string source_tag);

  int dim() const { return dim_; }
  const std::string& source_tag() const { return source_tag_; }
  void set_source_tag(std::string tag) { source_tag_ = std::move(tag); }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Throws DimensionError on dim mismatch, ValidationError on a duplicate id,
  /// non-finite value or id longer than 65535 bytes.
  void insert(std::string id, EmbeddingVector values);
  const EmbeddingVector* find(std::string_view id) const;
  /// Throws ValidationError naming the id when absent.
  const EmbeddingVector& at(std::string_view id) const;

  const std::map<std::string, EmbeddingVector, std::less<>>& entries() const { return entries_; }

 private:
  int dim_ = 0;
  std::string source_tag_;
  std::map<std::string, EmbeddingVector, std::less<>> entries_;
};

/// Rebuilds an embedder from the tag it writes into store manifests; nullptr
/// for tags of external encoders.
std::unique_ptr<Embedder> embedder_from_tag(std::string_view source_tag);

struct CatalogStores {
  EmbeddingStore book;
  EmbeddingStore dialog;
  EmbeddingStore story;
};

/// Every book unit and cue gets a vector; shots only when they carry story text.
CatalogStores embed_catalog(const Catalog& catalog, const Embedder& embedder);

}  // namespace bookreel
