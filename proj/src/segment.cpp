#include "bookreel/segment.hpp"

#include <string>

namespace bookreel {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_blank(std::string_view line) {
  for (char c : line) {
    if (!is_space(c)) return false;
  }
  return true;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::vector<std::string_view> split_blocks(std::string_view text) {
  std::vector<std::string_view> blocks;
  std::size_t block_begin = std::string_view::npos;
  std::size_t block_end = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    if (is_blank(line)) {
      if (block_begin != std::string_view::npos) {
        blocks.push_back(text.substr(block_begin, block_end - block_begin));
        block_begin = std::string_view::npos;
      }
    } else {
      if (block_begin == std::string_view::npos) block_begin = pos;
      block_end = nl;
    }
    pos = nl + 1;
  }
  if (block_begin != std::string_view::npos) {
    blocks.push_back(text.substr(block_begin, block_end - block_begin));
  }
  return blocks;
}

std::vector<std::string> split_sentences(std::string_view block) {
  std::vector<std::string> sentences;
  std::size_t begin = 0;
  for (std::size_t i = 0; i < block.size(); ++i) {
    const char c = block[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    while (j < block.size() && is_space(block[j])) ++j;
    const bool end_of_block = j == block.size();
    const bool next_upper = j > i + 1 && j < block.size() && block[j] >= 'A' && block[j] <= 'Z';
    if (end_of_block || next_upper) {
      std::string s = collapse_whitespace(block.substr(begin, i + 1 - begin));
      if (!s.empty()) sentences.push_back(std::move(s));
      begin = i + 1;
    }
  }
  std::string tail = collapse_whitespace(block.substr(begin));
  if (!tail.empty()) sentences.push_back(std::move(tail));
  return sentences;
}

}  // namespace

std::vector<BookUnit> segment_book(std::string_view raw_text, const MovieId& movie) {
  std::vector<BookUnit> sentences;
  std::vector<BookUnit> paragraphs;
  std::int64_t paragraph_ordinal = 0;
  for (std::string_view block : split_blocks(raw_text)) {
    std::vector<std::string> parts = split_sentences(block);
    if (parts.empty()) continue;
    std::string joined;
    for (auto& s : parts) {
      if (!joined.empty()) joined.push_back(' ');
      joined += s;
      const auto ordinal = static_cast<std::int64_t>(sentences.size());
      sentences.push_back(BookUnit{book_unit_id(movie, UnitKind::sentence, ordinal), movie,
                                   UnitKind::sentence, ordinal, paragraph_ordinal, std::move(s)});
    }
    paragraphs.push_back(BookUnit{book_unit_id(movie, UnitKind::paragraph, paragraph_ordinal),
                                  movie, UnitKind::paragraph, paragraph_ordinal,
                                  paragraph_ordinal, std::move(joined)});
    ++paragraph_ordinal;
  }
  sentences.insert(sentences.end(), std::make_move_iterator(paragraphs.begin()),
                   std::make_move_iterator(paragraphs.end()));
  return sentences;
}

}  // namespace bookreel
