#include "longweave/anchors.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "longweave/text.hpp"

namespace longweave {
namespace {

std::string strip_edges(std::string_view tok) {
  std::size_t b = 0, e = tok.size();
  while (b < e && !std::isalnum(static_cast<unsigned char>(tok[b]))) ++b;
  while (e > b && !std::isalnum(static_cast<unsigned char>(tok[e - 1]))) --e;
  return std::string(tok.substr(b, e - b));
}

std::string join_words(const std::vector<std::string>& words, std::size_t b, std::size_t e) {
  std::string out;
  for (std::size_t i = b; i < e; ++i) {
    if (i > b) out.push_back(' ');
    out += words[i];
  }
  return out;
}

bool contains_seq(const std::vector<std::string>& haystack,
                  const std::vector<std::string>& needle) {
  if (needle.empty() || needle.size() > haystack.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
    bool all = true;
    for (std::size_t j = 0; j < needle.size(); ++j) {
      if (haystack[i + j] != needle[j]) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

// maximal runs of words shared by a and b, at least min_len words long
void shared_word_runs(const std::vector<std::string>& a, const std::vector<std::string>& b,
                      std::size_t min_len, std::set<std::string>& out) {
  if (a.size() < min_len || b.size() < min_len) return;
  std::map<std::string, std::vector<std::size_t>> pos_b;
  for (std::size_t j = 0; j < b.size(); ++j) pos_b[b[j]].push_back(j);
  std::size_t i = 0;
  while (i < a.size()) {
    std::size_t best = 0;
    auto it = pos_b.find(a[i]);
    if (it != pos_b.end()) {
      for (std::size_t j : it->second) {
        std::size_t n = 0;
        while (i + n < a.size() && j + n < b.size() && a[i + n] == b[j + n]) ++n;
        best = std::max(best, n);
      }
    }
    if (best >= min_len) {
      out.insert(join_words(a, i, i + best));
      i += best;
    } else {
      ++i;
    }
  }
}

} // namespace

std::vector<std::string> anchor_words(std::string_view text) {
  std::vector<std::string> out;
  for (const std::string& tok : split_ws(text)) {
    std::string w = strip_edges(tok);
    if (!w.empty()) out.push_back(std::move(w));
  }
  return out;
}

std::vector<std::string> extract_anchors(const std::string& background,
                                         const std::string& inquiry) {
  const std::vector<std::string> bw = anchor_words(background);
  const std::vector<std::string> iw = anchor_words(inquiry);

  std::set<std::string> candidates;
  for (const std::string& span : capitalized_spans(background, 2)) candidates.insert(span);
  for (const std::string& span : capitalized_spans(inquiry, 2)) candidates.insert(span);
  for (const std::string& span : quoted_spans(background)) {
    auto words = anchor_words(span);
    if (words.size() >= 1) candidates.insert(join_words(words, 0, words.size()));
  }
  for (const std::string& span : quoted_spans(inquiry)) {
    auto words = anchor_words(span);
    if (words.size() >= 1) candidates.insert(join_words(words, 0, words.size()));
  }
  shared_word_runs(bw, iw, 3, candidates);

  std::vector<std::string> anchors;
  for (const std::string& cand : candidates) {
    const auto words = split_ws(cand);
    if (words.empty()) continue;
    if (contains_seq(bw, words) && contains_seq(iw, words)) anchors.push_back(cand);
  }
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  return anchors;
}

bool contains_anchor(const std::string& text, const std::string& anchor) {
  const auto words = split_ws(anchor);
  if (words.empty()) return false;
  return contains_seq(anchor_words(text), words);
}

bool has_long_anchor(const std::vector<std::string>& anchors, std::size_t min_words) {
  for (const std::string& a : anchors)
    if (split_ws(a).size() >= min_words) return true;
  return false;
}

} // namespace longweave
