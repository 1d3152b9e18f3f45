#pragma once

#include <string_view>
#include <vector>

#include "bookreel/corpus.hpp"

namespace bookreel {

/// Splits book text into paragraphs (maximal blocks between blank lines) and
/// sentences (broken after `.`, `!` or `?` when followed by whitespace and an
/// uppercase ASCII letter, or by the end of the block). Whitespace runs inside
/// a unit collapse to one space. Returns every sentence in document order,
/// followed by every paragraph.
std::vector<BookUnit> segment_book(std::string_view raw_text, const MovieId& movie);

}  // namespace bookreel
