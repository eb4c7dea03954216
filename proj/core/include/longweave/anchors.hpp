#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace longweave {

// Anchor keywords are verbatim multi-word strings shared by a background
// passage and its inquiry — the signal that lets a reader link the two across
// a long context. They are computed mechanically (capitalized spans, quoted
// spans, and shared word n-grams), never trusted from an LLM.
//
// All matching is over "words": whitespace tokens with non-alphanumeric
// edges stripped, so "Observatory," and "Observatory?" count as the same
// word while internal punctuation ("Jack's") is preserved.

std::vector<std::string> anchor_words(std::string_view text);

// Union of: capitalized spans (>= 2 words) of either text, quoted spans of
// either text, and maximal shared word n-grams (>= 3 words) — each kept only
// if its word sequence occurs contiguously in BOTH texts. Sorted, unique,
// space-joined.
std::vector<std::string> extract_anchors(const std::string& background,
                                         const std::string& inquiry);

// True when the anchor's word sequence occurs contiguously in text.
bool contains_anchor(const std::string& text, const std::string& anchor);

// The linkage gate: at least one anchor spanning >= min_words words, so the
// inquiry shares a substantive verbatim phrase with the background rather
// than a lone name fragment.
bool has_long_anchor(const std::vector<std::string>& anchors, std::size_t min_words = 3);

} // namespace longweave
