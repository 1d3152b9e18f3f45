#include "bookreel/embedding.hpp"

#include <cmath>

#include "bookreel/error.hpp"
#include "bookreel/hash.hpp"

namespace bookreel {
namespace {

bool is_token_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (is_token_byte(c)) {
      current.push_back(static_cast<char>((c >= 'A' && c <= 'Z') ? c - 'A' + 'a' : c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

EmbeddingVector baseline_embed(std::string_view text, int dim, std::uint64_t seed) {
  if (dim < 2) throw DimensionError("baseline embedder needs dim >= 2");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim);
  const Fnv1a64 seeded(seed);
  for (const auto& token : tokenize(text)) {
    Fnv1a64 h = seeded;
    h.update(token);
    const std::uint64_t v = h.value();
    acc[static_cast<Eigen::Index>(v % static_cast<std::uint64_t>(dim))] += (v >> 63) ? -1.0 : 1.0;
  }
  const double norm = acc.norm();
  if (norm > 0.0) acc /= norm;
  return acc.cast<float>();
}

BaselineEmbedder::BaselineEmbedder(int dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim < 2) throw DimensionError("baseline embedder needs dim >= 2");
}

std::string BaselineEmbedder::name() const {
  return "baseline-fnv1a/dim=" + std::to_string(dim_) + "/seed=" + std::to_string(seed_);
}

std::unique_ptr<Embedder> embedder_from_tag(std::string_view tag) {
  static constexpr std::string_view kPrefix = "baseline-fnv1a/dim=";
  if (!tag.starts_with(kPrefix)) return nullptr;
  tag.remove_prefix(kPrefix.size());
  const std::size_t sep = tag.find("/seed=");
  if (sep == std::string_view::npos) return nullptr;
  try {
    const int dim = std::stoi(std::string(tag.substr(0, sep)));
    const std::uint64_t seed = std::stoull(std::string(tag.substr(sep + 6)));
    return std::make_unique<BaselineEmbedder>(dim, seed);
  } catch (const std::exception&) {
    return nullptr;
  }
}

EmbeddingStore::EmbeddingStore(int dim, std::string source_tag)
    : dim_(dim), source_tag_(std::move(source_tag)) {
  if (dim <= 0) throw DimensionError("store dim must be positive");
}

void EmbeddingStore::insert(std::string id, EmbeddingVector values) {
  if (values.size() != dim_) {
    throw DimensionError("vector '" + id + "' has dim " + std::to_string(values.size()) +
                         ", store dim is " + std::to_string(dim_));
  }
  if (id.size() > 0xFFFF) throw ValidationError("id longer than 65535 bytes");
  if (!values.allFinite()) throw ValidationError("vector '" + id + "' has non-finite values");
  auto [it, inserted] = entries_.emplace(std::move(id), std::move(values));
  if (!inserted) throw ValidationError("duplicate store id '" + it->first + "'");
}

const EmbeddingVector* EmbeddingStore::find(std::string_view id) const {
  auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

const EmbeddingVector& EmbeddingStore::at(std::string_view id) const {
  if (const auto* v = find(id)) return *v;
  throw ValidationError("no vector for '" + std::string(id) + "' in store");
}

CatalogStores embed_catalog(const Catalog& catalog, const Embedder& embedder) {
  const std::string tag = embedder.name();
  CatalogStores out{EmbeddingStore(embedder.dim(), tag), EmbeddingStore(embedder.dim(), tag),
                    EmbeddingStore(embedder.dim(), tag)};
  for (const auto& u : catalog.book_units()) out.book.insert(u.id, embedder.embed(u.text));
  for (const auto& q : catalog.cues()) out.dialog.insert(q.id, embedder.embed(q.text));
  for (const auto& s : catalog.shots()) {
    if (s.story_text) out.story.insert(s.id, embedder.embed(*s.story_text));
  }
  return out;
}

}  // namespace bookreel
