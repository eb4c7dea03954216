#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace longweave {

// Token counters used for length budgeting. Both implementations split text on
// whitespace first, so counts are additive across whitespace joins:
//   count(a + " " + b) == count(a) + count(b)
// which the assembler relies on when fitting passages into a budget.
class Tokenizer {
 public:
  virtual ~Tokenizer() = default;
  virtual std::size_t count(const std::string& text) const = 0;
  virtual std::string name() const = 0;
};

// One whitespace-separated word == one token.
class WhitespaceTokenizer final : public Tokenizer {
 public:
  std::size_t count(const std::string& text) const override;
  std::string name() const override { return "whitespace"; }
};

// Classic byte-pair-encoding applied independently to each whitespace word.
// A word starts as its sequence of bytes; adjacent pairs are merged
// iteratively, always taking the lowest-rank (earliest-listed) applicable
// merge, until no merge applies. The token count of a word is the number of
// symbols left. Word counts are memoized.
class BpeTokenizer final : public Tokenizer {
 public:
  // Merges file: one merge per line, "left right", rank = line order.
  // Blank lines and lines starting with '#' are skipped. Each side of a merge
  // must itself be formable (a single byte or the output of an earlier merge);
  // anything else is rejected as malformed.
  explicit BpeTokenizer(const std::filesystem::path& merges_path);

  std::size_t count(const std::string& text) const override;
  std::string name() const override { return name_; }

  std::size_t count_word(const std::string& word) const;
  std::size_t merge_count() const { return ranks_.size(); }

 private:
  std::string name_;
  std::map<std::pair<std::string, std::string>, std::size_t> ranks_;
  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<std::string, std::size_t> memo_;
};

// spec: "whitespace" or "bpe:<merges-path>".
std::shared_ptr<Tokenizer> make_tokenizer(const std::string& spec);

} // namespace longweave
