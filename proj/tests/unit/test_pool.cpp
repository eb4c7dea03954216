#include <doctest.h>

#include <set>

#include "longweave/digest.hpp"
#include "longweave/llm.hpp"
#include "longweave/pool.hpp"
#include "longweave/rng.hpp"
#include "test_support.hpp"

using namespace longweave;
using testsup::TempDir;

namespace {

std::string words(int n, const std::string& stem) {
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += stem + std::to_string(i);
  }
  return out;
}

DistractorPool fixed_pool(int count, int tokens_each) {
  WhitespaceTokenizer tok;
  DistractorPool pool;
  for (int i = 0; i < count; ++i)
    pool.insert(testsup::make_passage(words(tokens_each, "p" + std::to_string(i) + "w"), tok));
  return pool;
}

} // namespace

TEST_CASE("text corpora split on blank lines with line-numbered refs") {
  TempDir tmp;
  auto p = tmp / "corpus.txt";
  testsup::write_text(p, words(25, "a") + "\n" + words(5, "b") + "\n\n" + words(3, "tiny") +
                             "\n\n\n" + words(30, "c") + "\n");
  auto result = ingest_corpus({p}, 20);
  REQUIRE(result.passages.size() == 2);
  // Wrapped lines join into one passage with a single space.
  CHECK(result.passages[0].text == words(25, "a") + " " + words(5, "b"));
  CHECK(result.passages[0].source_ref == p.string() + ":1");
  CHECK(result.passages[1].source_ref == p.string() + ":7");
  CHECK(result.dropped_short == 1);
}

TEST_CASE("jsonl corpora require a text field") {
  TempDir tmp;
  auto good = tmp / "extra.jsonl";
  testsup::write_text(good, Json{{"text", words(22, "x")}}.dump() + "\n" +
                                Json{{"text", "too short"}}.dump() + "\n");
  auto result = ingest_corpus({good}, 20);
  REQUIRE(result.passages.size() == 1);
  CHECK(result.passages[0].source_ref == good.string() + ":1");
  CHECK(result.dropped_short == 1);

  auto bad = tmp / "bad.jsonl";
  testsup::write_text(bad, Json{{"body", "wrong key"}}.dump() + "\n");
  CHECK_THROWS_AS(ingest_corpus({bad}, 1), JsonlError);
}

TEST_CASE("ingestion fails on missing paths and empty yields") {
  TempDir tmp;
  CHECK_THROWS(ingest_corpus({tmp / "nope.txt"}, 20));
  auto p = tmp / "small.txt";
  testsup::write_text(p, "just a few words\n");
  CHECK_THROWS(ingest_corpus({p}, 20));
}

TEST_CASE("rewrite_passage hashes and measures the trimmed rewrite") {
  WhitespaceTokenizer tok;
  auto backend = std::make_shared<MockBackend>(Json::array({
      Json{{"match", "old ledger entry"},
           {"response", "  A fresh account of the ledger entry, reworded.  "}},
  }));
  LlmClient client(backend, LlmClient::Options{});
  RawPassage raw{"corpus.txt:7", "The old ledger entry describes a market day."};
  auto p = rewrite_passage(client, testsup::real_prompts(), "m", raw, tok);
  CHECK(p.text == "A fresh account of the ledger entry, reworded.");
  CHECK(p.id == sha256_hex(p.text));
  CHECK(p.source_ref == "corpus.txt:7");
  CHECK(p.token_count == 8);

  RawPassage empty{"corpus.txt:9", "   "};
  CHECK_THROWS(rewrite_passage(client, testsup::real_prompts(), "m", empty, tok));
}

TEST_CASE("pool deduplicates by content id and orders deterministically") {
  WhitespaceTokenizer tok;
  auto a = testsup::make_passage("alpha beta gamma", tok);
  auto b = testsup::make_passage("delta epsilon", tok);
  DistractorPool forward;
  CHECK(forward.insert(a));
  CHECK(forward.insert(b));
  CHECK_FALSE(forward.insert(a)); // same text, same id
  CHECK(forward.size() == 2);

  DistractorPool reverse;
  reverse.insert(b);
  reverse.insert(a);
  REQUIRE(reverse.passages().size() == 2);
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(forward.passages()[i].id == reverse.passages()[i].id);
  CHECK(forward.passages()[0].id < forward.passages()[1].id);

  CHECK(forward.total_tokens() == 5);
  CHECK(forward.total_tokens({a.id}) == 2);
}

TEST_CASE("pool files round-trip") {
  TempDir tmp;
  auto path = tmp / "pool.jsonl";
  auto pool = fixed_pool(5, 7);
  pool.save_jsonl(path);
  auto back = DistractorPool::load_jsonl(path);
  REQUIRE(back.size() == 5);
  CHECK(back.total_tokens() == 35);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(back.passages()[i].id == pool.passages()[i].id);
    CHECK(back.passages()[i].token_count == 7);
  }
}

TEST_CASE("sampling fills the budget without repeats or overshoot") {
  auto pool = fixed_pool(40, 10);
  Rng rng(7);
  auto got = sample_distractors(pool, 105, rng);
  // Every passage is 10 tokens, so exactly 10 fit under a 105-token budget.
  CHECK(got.size() == 10);
  long long total = 0;
  std::set<std::string> seen;
  for (const auto& p : got) {
    total += p.token_count;
    CHECK(seen.insert(p.id).second);
  }
  CHECK(total <= 105);
}

TEST_CASE("sampling honors exclusions") {
  auto pool = fixed_pool(6, 10);
  std::set<std::string> exclude{pool.passages()[0].id, pool.passages()[3].id};
  Rng rng(11);
  auto got = sample_distractors(pool, 1000, rng, exclude);
  CHECK(got.size() == 4);
  for (const auto& p : got) CHECK_FALSE(exclude.count(p.id));
}

TEST_CASE("sampling is deterministic per seed") {
  auto pool = fixed_pool(30, 10);
  Rng a(42), b(42), c(43);
  auto ga = sample_distractors(pool, 150, a);
  auto gb = sample_distractors(pool, 150, b);
  auto gc = sample_distractors(pool, 150, c);
  REQUIRE(ga.size() == gb.size());
  bool same_order = true;
  for (std::size_t i = 0; i < ga.size(); ++i) same_order = same_order && ga[i].id == gb[i].id;
  CHECK(same_order);
  bool differs = gc.size() != ga.size();
  for (std::size_t i = 0; !differs && i < ga.size(); ++i) differs = ga[i].id != gc[i].id;
  CHECK(differs);
}

TEST_CASE("shortfalls report the exact deficit") {
  auto pool = fixed_pool(3, 10); // 30 tokens available
  Rng rng(1);
  try {
    sample_distractors(pool, 10000, rng, {}, /*min_tokens=*/75);
    FAIL("expected PoolShortfall");
  } catch (const PoolShortfall& e) {
    CHECK(e.deficit == 45);
  }
}

TEST_CASE("zero budget yields an empty sample unless a floor is set") {
  auto pool = fixed_pool(3, 10);
  Rng rng(1);
  CHECK(sample_distractors(pool, 0, rng).empty());
  CHECK_THROWS_AS(sample_distractors(pool, 0, rng, {}, 5), PoolShortfall);
}
