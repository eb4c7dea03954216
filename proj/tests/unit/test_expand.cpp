#include <doctest.h>

#include <set>

#include "longweave/expand.hpp"
#include "longweave/llm.hpp"
#include "longweave/sections.hpp"
#include "test_support.hpp"

using namespace longweave;

namespace {

DecomposedQuestion depot_decomposition() {
  DecomposedQuestion d;
  d.seed_id = "depot-routes";
  d.background = "The Harrow Street Depot posts its schedule at dawn.";
  d.inquiry = "Which route leaves the Harrow Street Depot first?\nA. river\nB. hill";
  d.anchors = {"Harrow Street Depot"};
  d.meets_requirements = true;
  d.meaning_preserved = true;
  d.sample_index = 1;
  return d;
}

std::string gen_response(const std::vector<std::string>& passages) {
  std::string out = "### Analysis\nSpread the facts across scenes.\n\n### Expanded material\n";
  for (std::size_t i = 0; i < passages.size(); ++i)
    out += std::to_string(i + 1) + ". " + passages[i] + "\n";
  return out;
}

std::string verify_response(bool key_info, bool affecting, bool related) {
  auto verdict = [](bool b) { return b ? std::string("Yes") : std::string("No"); };
  return "### Analysis\nChecked each paragraph.\n\n"
         "### Does the expanded material contain all the key information from the original "
         "material based on the analysis?\n" + verdict(key_info) + "\n\n"
         "### Does the expanded material contain information that will affect the answer to the "
         "question based on the analysis?\n" + verdict(affecting) + "\n\n"
         "### Are all the paragraphs in the expanded material are related to the main "
         "topic/character of the question based on the analysis?\n" + verdict(related) + "\n";
}

const std::string kGoodA = "Visitors to the Harrow Street Depot often linger by the chalkboard.";
const std::string kGoodB = "A clerk at the Harrow Street Depot updates the times each morning.";

} // namespace

TEST_CASE("parse_expansion splits numbered paragraphs and joins wrapped lines") {
  auto passages = parse_expansion(
      "### Expanded material\n1. First paragraph\ncontinues here.\n\n2. Second paragraph.\n");
  REQUIRE(passages.size() == 2);
  CHECK(passages[0] == "First paragraph continues here.");
  CHECK(passages[1] == "Second paragraph.");
}

TEST_CASE("parse_expansion rejects malformed numbering") {
  CHECK_THROWS_AS(parse_expansion("no heading at all"), ParseError);
  CHECK_THROWS_AS(parse_expansion("### Expanded material\n1. one\n3. skipped two"), ParseError);
  CHECK_THROWS_AS(parse_expansion("### Expanded material\nprose before any marker"), ParseError);
  CHECK_THROWS_AS(parse_expansion("### Expanded material\n\n"), ParseError);
  CHECK_THROWS_AS(parse_expansion("### Expanded material\n1. \n2. real text"), ParseError);
}

TEST_CASE("parse_verification reads all three verdicts") {
  auto v = parse_verification(verify_response(true, false, true));
  CHECK(v.key_info_complete);
  CHECK_FALSE(v.answer_affecting);
  CHECK(v.all_related);
  CHECK(v.retainable());
  CHECK_FALSE(parse_verification(verify_response(true, true, true)).retainable());
  CHECK_FALSE(parse_verification(verify_response(false, false, true)).retainable());
  CHECK_THROWS_AS(parse_verification("### Analysis\nmissing the verdict sections"), ParseError);
}

TEST_CASE("expand retains a verified sample in two calls") {
  auto d = depot_decomposition();
  auto backend = std::make_shared<MockBackend>(Json::array({
      Json{{"match", "expand the above material"}, {"response", gen_response({kGoodA, kGoodB})}},
      Json{{"match", "compare the expanded material"},
           {"response", verify_response(true, false, true)}},
  }));
  LlmClient client(backend, LlmClient::Options{});
  auto out = expand(client, testsup::real_prompts(), "m", d, "Fiction");
  REQUIRE(out.ok());
  CHECK(out.result->seed_id == "depot-routes");
  CHECK(out.result->genre == "Fiction");
  CHECK(out.result->sample_index == 1);
  REQUIRE(out.result->passages.size() == 2);
  CHECK(out.result->passages[0] == kGoodA);
  CHECK_FALSE(out.result->answer_affecting);
  CHECK(backend->call_count() == 2);
  REQUIRE(out.history.size() == 1);
  CHECK(out.history[0].verified);
}

TEST_CASE("expand skips verification when a passage lacks every anchor") {
  auto d = depot_decomposition();
  auto backend = std::make_shared<MockBackend>(Json::array({
      Json{{"match", "expand the above material"},
           {"responses",
            Json::array({gen_response({kGoodA, "A paragraph about nothing in particular."}),
                         gen_response({kGoodA, kGoodB})})}},
      Json{{"match", "compare the expanded material"},
           {"response", verify_response(true, false, true)}},
  }));
  LlmClient client(backend, LlmClient::Options{});
  auto out = expand(client, testsup::real_prompts(), "m", d, "Report");
  REQUIRE(out.ok());
  CHECK(out.result->sample_index == 2);
  // Sample 1: generation only (anchor gate fails before verification);
  // sample 2: generation + verification.
  CHECK(backend->call_count() == 3);
  REQUIRE(out.history.size() == 2);
  CHECK(out.history[0].parsed);
  CHECK_FALSE(out.history[0].anchors_ok);
  CHECK_FALSE(out.history[0].verified);
  CHECK(out.history[1].anchors_ok);
}

TEST_CASE("expand resamples when verification flags answer leakage") {
  auto d = depot_decomposition();
  auto backend = std::make_shared<MockBackend>(Json::array({
      Json{{"match", "expand the above material"}, {"response", gen_response({kGoodA})}},
      Json{{"match", "compare the expanded material"},
           {"responses", Json::array({verify_response(true, true, true),
                                      verify_response(true, false, true)})}},
  }));
  LlmClient client(backend, LlmClient::Options{});
  auto out = expand(client, testsup::real_prompts(), "m", d, "Letter");
  REQUIRE(out.ok());
  CHECK(out.result->sample_index == 2);
  CHECK(backend->call_count() == 4);
  REQUIRE(out.history.size() == 2);
  CHECK(out.history[0].verified);
  CHECK(out.history[0].verdicts.answer_affecting);
  CHECK_FALSE(out.history[0].verdicts.retainable());
}

TEST_CASE("expand exhausts at two calls per sample") {
  auto d = depot_decomposition();
  auto backend = std::make_shared<MockBackend>(Json::array({
      Json{{"match", "expand the above material"}, {"response", gen_response({kGoodA})}},
      Json{{"match", "compare the expanded material"},
           {"response", verify_response(false, false, true)}},
  }));
  LlmClient client(backend, LlmClient::Options{});
  auto out = expand(client, testsup::real_prompts(), "m", d, "Essay", /*max_samples=*/3);
  CHECK_FALSE(out.ok());
  CHECK(out.history.size() == 3);
  CHECK(backend->call_count() == 6); // never more than 2 * max_samples
  for (const auto& rec : out.history) {
    CHECK(rec.verified);
    CHECK_FALSE(rec.verdicts.key_info_complete);
  }
}

TEST_CASE("unparseable verification counts as a failed sample") {
  auto d = depot_decomposition();
  auto backend = std::make_shared<MockBackend>(Json::array({
      Json{{"match", "expand the above material"}, {"response", gen_response({kGoodA})}},
      Json{{"match", "compare the expanded material"},
           {"responses",
            Json::array({"garbled verdicts", verify_response(true, false, true)})}},
  }));
  LlmClient client(backend, LlmClient::Options{});
  auto out = expand(client, testsup::real_prompts(), "m", d, "Poetry");
  REQUIRE(out.ok());
  CHECK(out.result->sample_index == 2);
  REQUIRE(out.history.size() == 2);
  CHECK_FALSE(out.history[0].verified);
  CHECK(out.history[0].error.find("verification unparseable") != std::string::npos);
}

TEST_CASE("expanded context word counts and json round-trip") {
  ExpandedContext ex;
  ex.seed_id = "depot-routes";
  ex.passages = {"one two three", "four five"};
  ex.genre = "News";
  ex.key_info_complete = true;
  ex.answer_affecting = false;
  ex.all_related = true;
  ex.sample_index = 4;
  CHECK(ex.word_counts() == std::vector<std::size_t>{3, 2});
  auto back = ExpandedContext::from_json(ex.to_json());
  CHECK(back.passages == ex.passages);
  CHECK(back.genre == "News");
  CHECK(back.sample_index == 4);
  CHECK_FALSE(back.answer_affecting);
}

TEST_CASE("default genre list is nonempty and duplicate-free") {
  auto genres = default_genres();
  CHECK(genres.size() >= 10);
  std::set<std::string> uniq(genres.begin(), genres.end());
  CHECK(uniq.size() == genres.size());
}
