#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace longweave {

std::string trim(std::string_view s);

// Collapse every whitespace run to a single space and trim the ends.
std::string normalize_ws(std::string_view s);

// Whitespace-separated tokens (no normalization of the tokens themselves).
std::vector<std::string> split_ws(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);

std::size_t word_count(std::string_view s);

// True when normalize_ws(haystack) contains normalize_ws(needle).
bool contains_normalized(std::string_view haystack, std::string_view needle);

std::string to_lower(std::string_view s);

// Maximal runs of >= min_words consecutive capitalized tokens, with edge
// punctuation stripped per token ("the Harborview Aquarium Society," ->
// "Harborview Aquarium Society").
std::vector<std::string> capitalized_spans(std::string_view s, std::size_t min_words = 2);

// Contents of straight double-quoted segments.
std::vector<std::string> quoted_spans(std::string_view s);

// Maximal token n-grams (n >= min_tokens) present in both texts, compared on
// whitespace-normalized tokens, case-sensitive.
std::vector<std::string> shared_ngrams(std::string_view a, std::string_view b,
                                       std::size_t min_tokens = 3);

} // namespace longweave
