#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace bookreel::testing {

/// Parses every `*.srt` in `dir` and compares against its `.expected.json`
/// sibling. Returns one message per mismatch; empty means all conform.
std::vector<std::string> srt_conformance_failures(const std::filesystem::path& dir,
                                                  int* files_checked = nullptr);

}  // namespace bookreel::testing
