#include "longweave/text.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace longweave {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// strip non-alphanumeric edges of a token; keeps internal punctuation
// ("Jack's" stays intact, "Society," loses the comma)
std::string strip_edges(std::string_view tok) {
  std::size_t b = 0, e = tok.size();
  while (b < e && !std::isalnum(static_cast<unsigned char>(tok[b]))) ++b;
  while (e > b && !std::isalnum(static_cast<unsigned char>(tok[e - 1]))) --e;
  return std::string(tok.substr(b, e - b));
}

bool starts_capital(std::string_view tok) {
  return !tok.empty() && tok[0] >= 'A' && tok[0] <= 'Z';
}

std::string join(const std::vector<std::string>& toks, std::size_t b, std::size_t e) {
  std::string out;
  for (std::size_t i = b; i < e; ++i) {
    if (i > b) out.push_back(' ');
    out += toks[i];
  }
  return out;
}

} // namespace

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string normalize_ws(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_ws = true; // leading whitespace dropped
  for (char c : s) {
    if (is_space(c)) {
      in_ws = true;
    } else {
      if (in_ws && !out.empty()) out.push_back(' ');
      out.push_back(c);
      in_ws = false;
    }
  }
  return out;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t b = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > b) out.emplace_back(s.substr(b, i - b));
  }
  return out;
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> out;
  std::size_t b = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == '\n') {
      std::string_view line = s.substr(b, i - b);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      out.emplace_back(line);
      b = i + 1;
    }
  }
  if (!out.empty() && out.back().empty() && !s.empty() && s.back() == '\n') out.pop_back();
  return out;
}

std::size_t word_count(std::string_view s) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : s) {
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      ++n;
      in_word = true;
    }
  }
  return n;
}

bool contains_normalized(std::string_view haystack, std::string_view needle) {
  const std::string h = normalize_ws(haystack);
  const std::string n = normalize_ws(needle);
  if (n.empty()) return false;
  return h.find(n) != std::string::npos;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string> capitalized_spans(std::string_view s, std::size_t min_words) {
  std::vector<std::string> raw_toks = split_ws(s);
  std::vector<std::string> toks;
  toks.reserve(raw_toks.size());
  for (auto& t : raw_toks) toks.push_back(strip_edges(t));

  std::vector<std::string> spans;
  std::size_t i = 0;
  while (i < toks.size()) {
    if (!starts_capital(toks[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < toks.size() && starts_capital(toks[j])) ++j;
    if (j - i >= min_words) spans.push_back(join(toks, i, j));
    i = j;
  }
  return spans;
}

std::vector<std::string> quoted_spans(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t open = s.find('"', i);
    if (open == std::string_view::npos) break;
    std::size_t close = s.find('"', open + 1);
    if (close == std::string_view::npos) break;
    std::string inner = trim(s.substr(open + 1, close - open - 1));
    if (!inner.empty()) out.push_back(normalize_ws(inner));
    i = close + 1;
  }
  return out;
}

std::vector<std::string> shared_ngrams(std::string_view a, std::string_view b,
                                       std::size_t min_tokens) {
  const std::vector<std::string> ta = split_ws(a);
  const std::vector<std::string> tb = split_ws(b);
  if (ta.size() < min_tokens || tb.size() < min_tokens) return {};

  // positions of each token in b
  std::map<std::string, std::vector<std::size_t>> pos_b;
  for (std::size_t j = 0; j < tb.size(); ++j) pos_b[tb[j]].push_back(j);

  // longest match starting at (i, j)
  auto match_len = [&](std::size_t i, std::size_t j) {
    std::size_t n = 0;
    while (i + n < ta.size() && j + n < tb.size() && ta[i + n] == tb[j + n]) ++n;
    return n;
  };

  std::set<std::string> found;
  std::size_t i = 0;
  while (i < ta.size()) {
    std::size_t best = 0;
    auto it = pos_b.find(ta[i]);
    if (it != pos_b.end()) {
      for (std::size_t j : it->second) best = std::max(best, match_len(i, j));
    }
    if (best >= min_tokens) {
      found.insert(join(ta, i, i + best));
      i += best; // maximal matches only; skip past this run
    } else {
      ++i;
    }
  }
  return std::vector<std::string>(found.begin(), found.end());
}

} // namespace longweave
