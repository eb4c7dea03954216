#include "longweave/tokenizer.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include "longweave/text.hpp"

namespace longweave {

std::size_t WhitespaceTokenizer::count(const std::string& text) const {
  return split_ws(text).size();
}

BpeTokenizer::BpeTokenizer(const std::filesystem::path& merges_path) {
  name_ = "bpe:" + merges_path.string();
  std::ifstream in(merges_path);
  if (!in) throw std::runtime_error("cannot open merges file: " + merges_path.string());

  std::set<std::string> formable; // outputs of earlier merges
  std::string line;
  std::size_t line_no = 0;
  std::size_t rank = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto parts = split_ws(t);
    if (parts.size() != 2)
      throw std::runtime_error(merges_path.string() + ":" + std::to_string(line_no) +
                               ": merge line must be exactly two symbols");
    for (const std::string& side : parts) {
      if (side.size() > 1 && !formable.count(side))
        throw std::runtime_error(merges_path.string() + ":" + std::to_string(line_no) +
                                 ": symbol '" + side +
                                 "' is not a single byte or the output of an earlier merge");
    }
    const auto key = std::make_pair(parts[0], parts[1]);
    if (ranks_.count(key))
      throw std::runtime_error(merges_path.string() + ":" + std::to_string(line_no) +
                               ": duplicate merge '" + parts[0] + " " + parts[1] + "'");
    ranks_.emplace(key, rank++);
    formable.insert(parts[0] + parts[1]);
  }
}

std::size_t BpeTokenizer::count_word(const std::string& word) const {
  if (word.empty()) return 0;
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = memo_.find(word);
    if (it != memo_.end()) return it->second;
  }

  std::vector<std::string> symbols;
  symbols.reserve(word.size());
  for (char c : word) symbols.emplace_back(1, c);

  while (symbols.size() > 1) {
    std::size_t best_rank = std::numeric_limits<std::size_t>::max();
    std::size_t best_pos = 0;
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      auto it = ranks_.find({symbols[i], symbols[i + 1]});
      if (it != ranks_.end() && it->second < best_rank) {
        best_rank = it->second;
        best_pos = i;
      }
    }
    if (best_rank == std::numeric_limits<std::size_t>::max()) break;
    symbols[best_pos] += symbols[best_pos + 1];
    symbols.erase(symbols.begin() + static_cast<std::ptrdiff_t>(best_pos) + 1);
  }

  const std::size_t n = symbols.size();
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    memo_.emplace(word, n);
  }
  return n;
}

std::size_t BpeTokenizer::count(const std::string& text) const {
  std::size_t total = 0;
  for (const std::string& word : split_ws(text)) total += count_word(word);
  return total;
}

std::shared_ptr<Tokenizer> make_tokenizer(const std::string& spec) {
  if (spec == "whitespace") return std::make_shared<WhitespaceTokenizer>();
  if (spec.rfind("bpe:", 0) == 0) {
    const std::string path = spec.substr(4);
    if (path.empty()) throw std::runtime_error("tokenizer spec 'bpe:' is missing a merges path");
    return std::make_shared<BpeTokenizer>(path);
  }
  throw std::runtime_error("unknown tokenizer spec: " + spec +
                           " (expected 'whitespace' or 'bpe:<merges-path>')");
}

} // namespace longweave
