#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "bookreel/embedding.hpp"
#include "bookreel/error.hpp"

namespace bookreel {

// Binary store layout, all integers little-endian:
//   "BKRL" | version u16 | dim u32 | count u64 |
//   count x ( id_len u16 | id bytes | dim x f32 )
inline constexpr std::string_view kStoreMagic = "BKRL";
inline constexpr std::uint16_t kStoreVersion = 1;

enum class StoreErrorKind { io, not_a_store, unsupported_version, dim_mismatch, truncated, corrupt };

std::string_view to_string(StoreErrorKind kind);

class StoreError : public Error {
 public:
  StoreError(StoreErrorKind kind, const std::string& detail);
  StoreErrorKind kind() const { return kind_; }

 private:
  StoreErrorKind kind_;
};

std::string encode_store(const EmbeddingStore& store);
/// `expected_dim`, when given, must equal the header dim.
EmbeddingStore decode_store(std::string_view bytes, std::optional<int> expected_dim = {});

void write_store(const EmbeddingStore& store, const std::filesystem::path& path);
/// Picks up `source_tag` from a sibling `manifest.json` when present.
EmbeddingStore read_store(const std::filesystem::path& path,
                          std::optional<int> expected_dim = {});

/// Sidecar describing a directory of stores (`book.bkrl`, `dialog.bkrl`, `story.bkrl`).
struct StoreManifest {
  std::string source_tag;
  std::string tool;
  std::string tool_version;
  int dim = 0;
  std::string catalog_checksum;
  std::size_t book_count = 0;
  std::size_t dialog_count = 0;
  std::size_t story_count = 0;
};

inline constexpr std::string_view kBookStoreFile = "book.bkrl";
inline constexpr std::string_view kDialogStoreFile = "dialog.bkrl";
inline constexpr std::string_view kStoryStoreFile = "story.bkrl";
inline constexpr std::string_view kManifestFile = "manifest.json";

std::string manifest_json(const StoreManifest& manifest);
StoreManifest parse_manifest(std::string_view json);

/// Writes the three stores and `manifest.json` into `dir`.
StoreManifest write_stores(const CatalogStores& stores, const std::filesystem::path& dir,
                           const std::string& catalog_checksum);

struct LoadedStores {
  CatalogStores stores;
  StoreManifest manifest;
};

/// Reads all three stores and checks them against the manifest.
LoadedStores read_stores(const std::filesystem::path& dir);

}  // namespace bookreel
