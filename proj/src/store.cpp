#include "bookreel/store.hpp"

#include <bit>
#include <cstring>

#include <json.hpp>

#include "bookreel/catalog.hpp"

#ifndef BOOKREEL_VERSION
#define BOOKREEL_VERSION "dev"
#endif

namespace bookreel {
namespace {

template <typename T>
void put_le(std::string& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>(static_cast<unsigned char>(u >> (8 * i))));
  }
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  template <typename T>
  T get_le(const char* what) {
    need(sizeof(T), what);
    std::make_unsigned_t<T> v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<std::make_unsigned_t<T>>(static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }

  std::string_view take(std::size_t n, const char* what) {
    need(n, what);
    auto s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n, const char* what) {
    if (remaining() < n) {
      throw StoreError(StoreErrorKind::truncated,
                       std::string("file ends while reading ") + what + " at byte " +
                           std::to_string(pos_));
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string_view to_string(StoreErrorKind kind) {
  switch (kind) {
    case StoreErrorKind::io: return "io";
    case StoreErrorKind::not_a_store: return "not_a_store";
    case StoreErrorKind::unsupported_version: return "unsupported_version";
    case StoreErrorKind::dim_mismatch: return "dim_mismatch";
    case StoreErrorKind::truncated: return "truncated";
    case StoreErrorKind::corrupt: return "corrupt";
  }
  return "io";
}

StoreError::StoreError(StoreErrorKind kind, const std::string& detail)
    : Error(kind == StoreErrorKind::not_a_store ? "not an embedding store: " + detail
                                                : "embedding store " +
                                                      std::string(to_string(kind)) + ": " +
                                                      detail),
      kind_(kind) {}

std::string encode_store(const EmbeddingStore& store) {
  std::string out;
  out.reserve(18 + store.size() * (2 + 16 + 4 * static_cast<std::size_t>(store.dim())));
  out += kStoreMagic;
  put_le<std::uint16_t>(out, kStoreVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(store.dim()));
  put_le<std::uint64_t>(out, store.size());
  for (const auto& [id, v] : store.entries()) {
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(id.size()));
    out += id;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v[i]));
    }
  }
  return out;
}

EmbeddingStore decode_store(std::string_view bytes, std::optional<int> expected_dim) {
  if (bytes.size() < kStoreMagic.size() || bytes.substr(0, kStoreMagic.size()) != kStoreMagic) {
    throw StoreError(StoreErrorKind::not_a_store, "magic bytes are not 'BKRL'");
  }
  Reader r(bytes.substr(kStoreMagic.size()));
  const auto version = r.get_le<std::uint16_t>("version");
  if (version != kStoreVersion) {
    throw StoreError(StoreErrorKind::unsupported_version,
                     "format version " + std::to_string(version));
  }
  const auto dim = r.get_le<std::uint32_t>("dim");
  const auto count = r.get_le<std::uint64_t>("count");
  if (dim == 0 || dim > 1u << 20) {
    throw StoreError(StoreErrorKind::corrupt, "header dim " + std::to_string(dim));
  }
  if (expected_dim && static_cast<std::uint32_t>(*expected_dim) != dim) {
    throw StoreError(StoreErrorKind::dim_mismatch, "header dim " + std::to_string(dim) +
                                                       ", expected " +
                                                       std::to_string(*expected_dim));
  }
  // Each entry needs at least 2 + 4*dim bytes; reject absurd counts before allocating.
  if (count > r.remaining() / (2 + 4ull * dim)) {
    throw StoreError(StoreErrorKind::truncated,
                     "header promises " + std::to_string(count) + " entries, file too short");
  }

  EmbeddingStore store(static_cast<int>(dim), "unknown");
  for (std::uint64_t n = 0; n < count; ++n) {
    const auto len = r.get_le<std::uint16_t>("id length");
    std::string id(r.take(len, "id"));
    EmbeddingVector v(static_cast<Eigen::Index>(dim));
    for (std::uint32_t i = 0; i < dim; ++i) {
      v[i] = std::bit_cast<float>(r.get_le<std::uint32_t>("vector"));
    }
    if (!v.allFinite()) {
      throw StoreError(StoreErrorKind::corrupt, "non-finite value in entry '" + id + "'");
    }
    if (store.find(id) != nullptr) {
      throw StoreError(StoreErrorKind::corrupt, "duplicate id '" + id + "'");
    }
    store.insert(std::move(id), std::move(v));
  }
  if (r.remaining() != 0) {
    throw StoreError(StoreErrorKind::corrupt,
                     std::to_string(r.remaining()) + " trailing bytes after last entry");
  }
  return store;
}

void write_store(const EmbeddingStore& store, const std::filesystem::path& path) {
  try {
    write_file(path, encode_store(store));
  } catch (const IoError& e) {
    throw StoreError(StoreErrorKind::io, e.what());
  }
}

EmbeddingStore read_store(const std::filesystem::path& path, std::optional<int> expected_dim) {
  std::string bytes;
  try {
    bytes = read_file(path);
  } catch (const IoError& e) {
    throw StoreError(StoreErrorKind::io, e.what());
  }
  EmbeddingStore store = decode_store(bytes, expected_dim);
  const auto manifest_path = path.parent_path() / kManifestFile;
  if (std::filesystem::exists(manifest_path)) {
    store.set_source_tag(parse_manifest(read_file(manifest_path)).source_tag);
  }
  return store;
}

std::string manifest_json(const StoreManifest& m) {
  nlohmann::ordered_json j;
  j["source_tag"] = m.source_tag;
  j["tool"] = m.tool;
  j["tool_version"] = m.tool_version;
  j["dim"] = m.dim;
  j["catalog_checksum"] = m.catalog_checksum;
  j["counts"] = {{"book", m.book_count}, {"dialog", m.dialog_count}, {"story", m.story_count}};
  j["files"] = {{"book", kBookStoreFile}, {"dialog", kDialogStoreFile}, {"story", kStoryStoreFile}};
  return j.dump(2) + "\n";
}

StoreManifest parse_manifest(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    StoreManifest m;
    m.source_tag = j.at("source_tag").get<std::string>();
    m.tool = j.value("tool", std::string{});
    m.tool_version = j.value("tool_version", std::string{});
    m.dim = j.at("dim").get<int>();
    m.catalog_checksum = j.value("catalog_checksum", std::string{});
    const auto& c = j.at("counts");
    m.book_count = c.at("book").get<std::size_t>();
    m.dialog_count = c.at("dialog").get<std::size_t>();
    m.story_count = c.at("story").get<std::size_t>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw StoreError(StoreErrorKind::corrupt, std::string("manifest: ") + e.what());
  }
}

StoreManifest write_stores(const CatalogStores& stores, const std::filesystem::path& dir,
                           const std::string& catalog_checksum) {
  std::filesystem::create_directories(dir);
  write_store(stores.book, dir / kBookStoreFile);
  write_store(stores.dialog, dir / kDialogStoreFile);
  write_store(stores.story, dir / kStoryStoreFile);
  StoreManifest m{stores.book.source_tag(), "bookreel", BOOKREEL_VERSION, stores.book.dim(),
                  catalog_checksum, stores.book.size(), stores.dialog.size(),
                  stores.story.size()};
  write_file(dir / kManifestFile, manifest_json(m));
  return m;
}

LoadedStores read_stores(const std::filesystem::path& dir) {
  const auto manifest_path = dir / kManifestFile;
  if (!std::filesystem::exists(manifest_path)) {
    throw StoreError(StoreErrorKind::io, "no manifest.json in " + dir.string());
  }
  LoadedStores out;
  out.manifest = parse_manifest(read_file(manifest_path));
  out.stores.book = read_store(dir / kBookStoreFile, out.manifest.dim);
  out.stores.dialog = read_store(dir / kDialogStoreFile, out.manifest.dim);
  out.stores.story = read_store(dir / kStoryStoreFile, out.manifest.dim);
  const auto check = [](const char* name, std::size_t got, std::size_t want) {
    if (got != want) {
      throw StoreError(StoreErrorKind::corrupt, std::string(name) + " store holds " +
                                                    std::to_string(got) +
                                                    " entries, manifest says " +
                                                    std::to_string(want));
    }
  };
  check("book", out.stores.book.size(), out.manifest.book_count);
  check("dialog", out.stores.dialog.size(), out.manifest.dialog_count);
  check("story", out.stores.story.size(), out.manifest.story_count);
  return out;
}

}  // namespace bookreel
