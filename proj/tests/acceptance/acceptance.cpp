// Acceptance gate for the long-context question pipeline. Each criterion
// prints exactly one [PASS]/[FAIL]/[SKIP] line; the process exits nonzero
// if any criterion fails. Criteria are self-contained: each builds its own
// fixtures and work directories.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "longweave/assemble.hpp"
#include "longweave/decompose.hpp"
#include "longweave/digest.hpp"
#include "longweave/evaluate.hpp"
#include "longweave/expand.hpp"
#include "longweave/jsonl.hpp"
#include "longweave/llm.hpp"
#include "longweave/pipeline.hpp"
#include "longweave/pool.hpp"
#include "longweave/rng.hpp"
#include "longweave/tokenizer.hpp"
#include "test_support.hpp"

using namespace longweave;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
  if (!cond) throw Failure(msg);
}

template <typename A, typename B>
void require_eq(const A& actual, const B& expected, const std::string& what) {
  if (!(actual == static_cast<A>(expected))) {
    std::ostringstream os;
    os << what << ": got " << actual << ", expected " << expected;
    throw Failure(os.str());
  }
}

LlmClient::Options fast_retry_options() {
  LlmClient::Options opts;
  opts.retry.max_retries = 3;
  opts.retry.initial_delay_ms = 0;
  opts.retry.multiplier = 1.0;
  opts.retry.max_delay_ms = 0;
  return opts;
}

// ---------------------------------------------------------------------------
// Shared fixture builders
// ---------------------------------------------------------------------------

SeedQuestion make_seed(const std::string& id, Category cat, int option_count,
                       const std::string& answer) {
  SeedQuestion q;
  q.id = id;
  q.category = cat;
  q.stem = "Based on the notes, which entry about the Quarry Gate Annex is right?";
  for (int i = 0; i < option_count; ++i)
    q.options.push_back(
        {std::string(1, static_cast<char>('A' + i)), "entry number " + std::to_string(i + 1)});
  q.answer = answer;
  q.rationale = "The notes list the entries in order.";
  q.source = "acceptance";
  return q;
}

std::string random_lower_word(Rng& rng) {
  return "w" + std::to_string(rng.below(1000000));
}

std::string random_lower_text(Rng& rng, std::size_t words) {
  std::string out;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) out += ' ';
    out += random_lower_word(rng);
  }
  return out;
}

// Deterministic, pool-free assembly scaffolding used by criteria 2 and 3.
struct AssemblyRig {
  SeedQuestion seed = make_seed("rig", Category::logical_inference, 3, "B");
  DecomposedQuestion decomp;
  WhitespaceTokenizer tok;

  AssemblyRig() {
    decomp.seed_id = seed.id;
    decomp.background = "The Quarry Gate Annex keeps its ledgers in the north room.";
    decomp.inquiry =
        "According to the ledgers of the Quarry Gate Annex, which entry is right?\n"
        "A. entry number 1\nB. entry number 2\nC. entry number 3";
    decomp.anchors = {"Quarry Gate Annex"};
    decomp.meets_requirements = true;
    decomp.meaning_preserved = true;
    decomp.sample_index = 1;
  }

  ExpandedContext make_expanded(Rng& rng, std::size_t passage_count) const {
    ExpandedContext ex;
    ex.seed_id = seed.id;
    for (std::size_t i = 0; i < passage_count; ++i)
      ex.passages.push_back("Quarry Gate Annex " + random_lower_text(rng, 5 + rng.below(12)));
    ex.genre = "Report";
    ex.key_info_complete = true;
    ex.answer_affecting = false;
    ex.all_related = true;
    ex.sample_index = 1;
    return ex;
  }

  long long overhead(InquiryPosition pos) const {
    return static_cast<long long>(
        tok.count(render_context_prompt(testsup::real_prompts(), "", decomp.inquiry, pos)));
  }
};

// Decomposition and verification responses in the exact markdown shape the
// parsers expect, reused by the accounting criterion.
std::string decompose_response(const std::string& background, const std::string& inquiry,
                               const std::string& requirements, const std::string& meaning) {
  return "### Analysis\nSplit facts from the question.\n\n"
         "### Broken Down Question\n\n#### Background Passage\n" + background +
         "\n\n#### Question About the Background Passage\n" + inquiry +
         "\n\n### Analysis of the Question About the Background Passage\nIt stands alone.\n\n"
         "### Judge Whether the Question About the Background Passage Meets the Requirements\n" +
         requirements +
         "\n\n### Analyze Whether the Broken Down Question Matches the Original Question in "
         "Meaning\nSame meaning.\n\n"
         "### Judge Whether the Broken Down Question Matches the Original Question in Meaning\n" +
         meaning + "\n";
}

std::string expansion_response(const std::vector<std::string>& passages) {
  std::string out = "### Analysis\nScatter the facts.\n\n### Expanded material\n";
  for (std::size_t i = 0; i < passages.size(); ++i)
    out += std::to_string(i + 1) + ". " + passages[i] + "\n";
  return out;
}

std::string verification_response(bool key_info, bool affecting, bool related) {
  auto v = [](bool b) { return b ? std::string("Yes") : std::string("No"); };
  return "### Analysis\nChecked.\n\n"
         "### Does the expanded material contain all the key information from the original "
         "material based on the analysis?\n" + v(key_info) +
         "\n\n### Does the expanded material contain information that will affect the answer to "
         "the question based on the analysis?\n" + v(affecting) +
         "\n\n### Are all the paragraphs in the expanded material are related to the main "
         "topic/character of the question based on the analysis?\n" + v(related) + "\n";
}

// Reconstructs an assembled question from a manifest row plus the stored
// prompt file, verifying the recorded digest on the way.
AssembledQuestion question_from_manifest(const Json& row, const std::filesystem::path& work_dir) {
  AssembledQuestion aq;
  aq.seed_id = row.at("seed_id").get<std::string>();
  aq.spec.kind = variant_kind_from_string(row.at("kind").get<std::string>());
  if (aq.spec.kind == VariantKind::long_context) {
    aq.spec.target_tokens = row.at("target_tokens").get<long long>();
    aq.spec.position = inquiry_position_from_string(row.at("position").get<std::string>());
    aq.spec.hop = hop_mode_from_string(row.at("hop").get<std::string>());
  }
  aq.spec.rng_seed = row.at("rng_seed").get<std::uint64_t>();
  aq.token_count = row.at("token_count").get<long long>();
  aq.clue_positions = row.at("clue_positions").get<std::vector<int>>();
  for (const auto& slot : row.at("layout"))
    aq.layout.push_back({slot.at("role").get<std::string>(), slot.at("ref").get<std::string>()});
  aq.prompt_text = testsup::read_text(work_dir / row.at("prompt_path").get<std::string>());
  require_eq(sha256_hex(aq.prompt_text), row.at("prompt_sha256").get<std::string>(),
             "stored prompt digest for " + row.at("variant_id").get<std::string>());
  return aq;
}

// ---------------------------------------------------------------------------
// 1. Offline end-to-end demo run
// ---------------------------------------------------------------------------

void criterion_offline_demo() {
  testsup::TempDir tmp;
  auto cfg = PipelineConfig::load(testsup::source_dir() / "demo.ini");
  cfg.work_dir = tmp / "work";

  // The bundled config must cover the full variant grid.
  require(cfg.lengths == std::vector<long long>{8192, 16384},
          "demo config must target lengths 8192 and 16384");
  require(cfg.positions.size() == 2 && cfg.hops.size() == 2,
          "demo config must cover both inquiry positions and both hop modes");

  const auto t0 = std::chrono::steady_clock::now();
  Pipeline pipeline(cfg);
  pipeline.run_all();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  require(seconds < 60.0,
          "offline run took " + std::to_string(seconds) + "s, budget is 60s");

  std::map<std::string, DecomposedQuestion> decomps;
  for (const Json& row : read_jsonl(pipeline.decompositions_path())) {
    auto d = DecomposedQuestion::from_json(row);
    decomps[d.seed_id] = d;
  }
  std::map<std::string, ExpandedContext> expansions;
  for (const Json& row : read_jsonl(pipeline.expansions_path())) {
    auto ex = ExpandedContext::from_json(row);
    expansions[ex.seed_id] = ex;
  }
  require_eq(expansions.size(), std::size_t{18}, "retained expansions");

  std::vector<std::string> labels = {"short", "expanded"};
  for (long long len : cfg.lengths)
    for (InquiryPosition pos : cfg.positions)
      for (HopMode hop : cfg.hops) {
        VariantSpec s;
        s.kind = VariantKind::long_context;
        s.target_tokens = len;
        s.position = pos;
        s.hop = hop;
        labels.push_back(s.label());
      }
  require_eq(labels.size(), std::size_t{10}, "variant labels per question");

  std::map<std::string, Json> rows_by_id;
  for (const Json& row : read_jsonl(pipeline.manifest_path()))
    rows_by_id[row.at("variant_id").get<std::string>()] = row;
  require_eq(rows_by_id.size(), expansions.size() * labels.size(), "manifest rows");
  for (const auto& [sid, ex] : expansions)
    for (const std::string& label : labels)
      require(rows_by_id.count(sid + "-" + label),
              "manifest is missing variant " + sid + "-" + label);

  require(read_jsonl(pipeline.assemble_errors_path()).empty(),
          "assembly reported per-variant errors");

  auto tokenizer = make_tokenizer(cfg.tokenizer_spec);
  std::size_t violations = 0;
  std::string first_violation;
  for (const auto& [id, row] : rows_by_id) {
    const AssembledQuestion aq = question_from_manifest(row, cfg.work_dir);
    const auto& ex = expansions.at(aq.seed_id);
    const auto& dq = decomps.at(aq.seed_id);
    const auto v = validate_assembled(aq, ex, dq.inquiry, *tokenizer, cfg.tolerance);
    if (!v.empty() && first_violation.empty()) first_violation = id + ": " + v.front();
    violations += v.size();
  }
  require(violations == 0, "invariant violations across the manifest: " +
                               std::to_string(violations) + " (first: " + first_violation + ")");
}

// ---------------------------------------------------------------------------
// 2. Assembly invariants on randomized instances
// ---------------------------------------------------------------------------

void criterion_assembly_invariants() {
  const std::size_t kInstances = 1200;
  AssemblyRig rig;
  Rng rng(20250819);
  const auto& prompts = testsup::real_prompts();

  DistractorPool pool;
  std::size_t failures = 0, violations = 0;
  std::string first_problem;

  for (std::size_t i = 0; i < kInstances; ++i) {
    if (i % 200 == 0) {
      pool = DistractorPool();
      for (int p = 0; p < 250; ++p)
        pool.insert(
            testsup::make_passage(random_lower_text(rng, 5 + rng.below(8)), rig.tok));
    }
    const auto expanded = rig.make_expanded(rng, 1 + rng.below(4));

    VariantSpec spec;
    spec.kind = VariantKind::long_context;
    spec.position =
        rng.below(2) == 0 ? InquiryPosition::after_context : InquiryPosition::before_context;
    spec.hop = rng.below(2) == 0 ? HopMode::multi_hop : HopMode::single_hop;
    spec.rng_seed = mix64(0xACCE97 + i);
    long long clue_tokens = 0;
    for (const auto& p : expanded.passages)
      clue_tokens += static_cast<long long>(rig.tok.count(p));
    spec.target_tokens = rig.overhead(spec.position) + clue_tokens +
                         static_cast<long long>(300 + rng.below(401));

    try {
      const auto aq =
          assemble(rig.seed, rig.decomp, expanded, pool, spec, prompts, rig.tok, 0.05);

      // Direct checks, independent of the validator.
      const long long floor =
          static_cast<long long>(std::ceil(0.95 * static_cast<double>(spec.target_tokens)));
      require(aq.token_count <= spec.target_tokens && aq.token_count >= floor,
              "token count outside band at instance " + std::to_string(i));
      std::set<int> unique_pos(aq.clue_positions.begin(), aq.clue_positions.end());
      require_eq(unique_pos.size(), expanded.passages.size(),
                 "clue positions at instance " + std::to_string(i));
      if (spec.hop == HopMode::single_hop) {
        auto sorted = aq.clue_positions;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 1; k < sorted.size(); ++k)
          require(sorted[k] == sorted[k - 1] + 1,
                  "contiguous clue run broken at instance " + std::to_string(i));
      }
      const auto inquiry_at = aq.prompt_text.find(rig.decomp.inquiry);
      const auto clue_at = aq.prompt_text.find(expanded.passages.front());
      require(inquiry_at != std::string::npos && clue_at != std::string::npos,
              "inquiry or clue text missing at instance " + std::to_string(i));
      if (spec.position == InquiryPosition::after_context)
        require(inquiry_at > clue_at, "inquiry not last at instance " + std::to_string(i));
      else
        require(inquiry_at < clue_at, "inquiry not first at instance " + std::to_string(i));

      const auto v = validate_assembled(aq, expanded, rig.decomp.inquiry, rig.tok, 0.05);
      if (!v.empty()) {
        ++violations;
        if (first_problem.empty())
          first_problem = "instance " + std::to_string(i) + ": " + v.front();
      }
    } catch (const Failure&) {
      throw;
    } catch (const std::exception& e) {
      ++failures;
      if (first_problem.empty())
        first_problem = "instance " + std::to_string(i) + " threw: " + e.what();
    }
  }
  require(failures == 0 && violations == 0,
          std::to_string(failures) + " failures and " + std::to_string(violations) +
              " violation sets over " + std::to_string(kInstances) +
              " instances (first: " + first_problem + ")");
}

// ---------------------------------------------------------------------------
// 3. Placement uniformity
// ---------------------------------------------------------------------------

void criterion_placement_uniformity() {
  AssemblyRig rig;
  Rng seeder(5150);
  const auto& prompts = testsup::real_prompts();

  // One clue among exactly 20 slots: a 19-passage pool, every passage the
  // same size, and a budget that takes all of them.
  ExpandedContext expanded;
  expanded.seed_id = rig.seed.id;
  expanded.passages = {"Quarry Gate Annex notes " + random_lower_text(seeder, 8)};
  expanded.genre = "Report";
  expanded.key_info_complete = true;
  expanded.all_related = true;
  expanded.sample_index = 1;

  DistractorPool pool;
  for (int p = 0; p < 19; ++p)
    pool.insert(testsup::make_passage(random_lower_text(seeder, 12), rig.tok));
  require_eq(pool.passages().size(), std::size_t{19}, "uniformity fixture pool size");
  const long long pool_tokens = pool.total_tokens();
  const long long clue_tokens = static_cast<long long>(rig.tok.count(expanded.passages[0]));

  VariantSpec spec;
  spec.kind = VariantKind::long_context;
  spec.position = InquiryPosition::after_context;
  spec.hop = HopMode::multi_hop;
  spec.target_tokens = rig.overhead(spec.position) + clue_tokens + pool_tokens;

  const int kRuns = 2000;
  std::array<long long, 20> counts{};
  for (int i = 0; i < kRuns; ++i) {
    spec.rng_seed = derive_variant_seed(404, rig.seed.id, "uniformity-" + std::to_string(i));
    const auto aq = assemble(rig.seed, rig.decomp, expanded, pool, spec, prompts, rig.tok, 0.05);
    require_eq(aq.layout.size(), std::size_t{20}, "slot count at run " + std::to_string(i));
    require_eq(aq.clue_positions.size(), std::size_t{1}, "clue count at run " + std::to_string(i));
    counts[static_cast<std::size_t>(aq.clue_positions[0])] += 1;
  }

  const double expected = static_cast<double>(kRuns) / 20.0;
  double chi2 = 0.0;
  for (long long c : counts) {
    const double d = static_cast<double>(c) - expected;
    chi2 += d * d / expected;
  }
  // Upper 0.01 critical value of chi-square with 19 degrees of freedom.
  const double kCritical = 36.1909;
  require(chi2 < kCritical, "chi-square " + std::to_string(chi2) + " exceeds " +
                                std::to_string(kCritical) + " (19 df, alpha 0.01)");
}

// ---------------------------------------------------------------------------
// 4. Byte-identical reruns
// ---------------------------------------------------------------------------

void criterion_determinism() {
  testsup::TempDir tmp;
  auto cfg = PipelineConfig::load(testsup::source_dir() / "demo.ini");

  auto run_into = [&](const std::filesystem::path& work_dir) {
    auto local = cfg;
    local.work_dir = work_dir;
    Pipeline p(local);
    p.run_all();
    return local.work_dir;
  };
  const auto wa = run_into(tmp / "a");
  const auto wb = run_into(tmp / "b");

  const std::string ma = testsup::read_text(wa / "stages" / "manifest.jsonl");
  const std::string mb = testsup::read_text(wb / "stages" / "manifest.jsonl");
  require(ma == mb, "dataset manifests differ between identical runs");

  std::map<std::string, Json> rows_b;
  for (const Json& row : read_jsonl(wb / "stages" / "manifest.jsonl"))
    rows_b[row.at("variant_id").get<std::string>()] = row;
  for (const Json& row : read_jsonl(wa / "stages" / "manifest.jsonl")) {
    const auto id = row.at("variant_id").get<std::string>();
    const auto& other = rows_b.at(id);
    require_eq(row.at("prompt_sha256").get<std::string>(),
               other.at("prompt_sha256").get<std::string>(), "prompt digest for " + id);
    const auto digest_a =
        sha256_hex(testsup::read_text(wa / row.at("prompt_path").get<std::string>()));
    const auto digest_b =
        sha256_hex(testsup::read_text(wb / other.at("prompt_path").get<std::string>()));
    require_eq(digest_a, row.at("prompt_sha256").get<std::string>(),
               "prompt file digest for " + id);
    require_eq(digest_a, digest_b, "prompt files for " + id);
  }

  require(testsup::read_text(wa / "report.csv") == testsup::read_text(wb / "report.csv"),
          "result tables differ between identical runs");
}

// ---------------------------------------------------------------------------
// 5. Exact random baselines
// ---------------------------------------------------------------------------

void criterion_random_baseline() {
  std::vector<SeedQuestion> all_four;
  for (int i = 0; i < 6; ++i)
    all_four.push_back(
        make_seed("four-" + std::to_string(i), Category::reading_comprehension, 4, "A"));
  require(random_baseline(all_four) == Rational(1, 4),
          "all-4-option baseline must be exactly 1/4");

  std::vector<SeedQuestion> mixed = {
      make_seed("m3", Category::reading_comprehension, 3, "A"),
      make_seed("m4", Category::logical_inference, 4, "B"),
      make_seed("m5", Category::math_word_problem, 5, "C"),
  };
  const Rational got = random_baseline(mixed);
  require(got == Rational(47, 180), "mixed {3,4,5}-option baseline must be exactly 47/180");
  const double as_double = static_cast<double>(got.num) / static_cast<double>(got.den);
  require(std::abs(as_double - 47.0 / 180.0) <= 1e-12,
          "mixed baseline drifts beyond 1e-12 of 47/180");

  // Published long-context suites often quote baselines near 25.21%; that
  // number depends on a specific question set's option-count mix, so it is
  // documented here as dataset-specific rather than asserted.
}

// ---------------------------------------------------------------------------
// 6. Answer extraction golden suite
// ---------------------------------------------------------------------------

void criterion_extraction_suite() {
  using Case = std::pair<std::string, std::optional<char>>;
  const std::vector<Case> cases = {
      // template-exact
      {"The answer is A", 'A'},
      {"The answer is B", 'B'},
      {"the answer is C", 'C'},
      {"THE ANSWER IS D", 'D'},
      {"After working through each clue, the answer is E.", 'E'},
      {"The answer isA", 'A'},
      // wrapped labels
      {"The answer is (C)", 'C'},
      {"the answer is (A).", 'A'},
      {"The answer is **B**", 'B'},
      {"the answer is *D*", 'D'},
      {"The answer is \"C\"", 'C'},
      {"the answer is $E", 'E'},
      {"The answer is ( B )", 'B'},
      {"So the answer is (\"A\")", 'A'},
      // multi-mention: the last occurrence governs
      {"the answer is A. On second thought, the answer is B.", 'B'},
      {"the answer is C ... but wait ... The Answer Is D", 'D'},
      {"the answer is\nA", std::nullopt},
      {"the answer is A; the answer is B; the answer is C", 'C'},
      {"The final line says the answer is (E), not unwrapped.", 'E'},
      {"First pass: the answer is (B). Final pass: the answer is (D).", 'D'},
      // lowercase phrase with a usable label
      {"the answer is B, as shown above", 'B'},
      {"clearly, the answer is (a capital) C", std::nullopt},
      {"the answer is a", std::nullopt},
      {"the answer is b)", std::nullopt},
      // missing or unusable phrase
      {"Option A looks right, though the concluding line is left off this draft", std::nullopt},
      {"The answer: C", std::nullopt},
      {"Answer is C", std::nullopt},
      {"the answer is", std::nullopt},
      {"the answer is F", std::nullopt},
      {"", std::nullopt},
  };
  require_eq(cases.size(), std::size_t{30}, "golden case count");
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto got = extract_answer(cases[i].first);
    if (got != cases[i].second) {
      std::ostringstream os;
      os << "case " << i << " (\"" << cases[i].first << "\"): got "
         << (got ? std::string(1, *got) : "<none>") << ", expected "
         << (cases[i].second ? std::string(1, *cases[i].second) : "<none>");
      throw Failure(os.str());
    }
  }
}

// ---------------------------------------------------------------------------
// 7. Aggregation vs brute-force recount
// ---------------------------------------------------------------------------

void criterion_aggregation_oracle() {
  Rng rng(777);
  const std::vector<Category> cats = {Category::reading_comprehension,
                                      Category::logical_inference,
                                      Category::math_word_problem};

  std::vector<SeedQuestion> seeds;
  for (int i = 0; i < 12; ++i) {
    const int options = 3 + static_cast<int>(rng.below(3));
    const std::string answer(1, static_cast<char>('A' + rng.below(options)));
    seeds.push_back(
        make_seed("syn-" + std::to_string(i), cats[static_cast<std::size_t>(i) % 3],
                  options, answer));
  }

  std::vector<Json> manifest;
  for (const auto& q : seeds) {
    for (const char* kind : {"short", "expanded"}) {
      Json row;
      row["variant_id"] = q.id + "-" + kind;
      row["seed_id"] = q.id;
      row["kind"] = kind;
      manifest.push_back(row);
    }
    for (long long len : {4096LL, 8192LL})
      for (const char* pos : {"after", "before"})
        for (const char* hop : {"multi", "single"}) {
          Json row;
          row["variant_id"] = q.id + "-long-" + std::to_string(len) + "-" + pos + "-" + hop;
          row["seed_id"] = q.id;
          row["kind"] = "long";
          row["target_tokens"] = len;
          row["position"] = pos;
          row["hop"] = hop;
          manifest.push_back(row);
        }
  }

  std::vector<EvalRecord> records;
  const std::vector<std::string> models = {"m-alpha", "m-beta"};
  for (int i = 0; i < 200; ++i) {
    const Json& row = manifest[rng.below(manifest.size())];
    const auto& q = seeds[static_cast<std::size_t>(
        std::stoi(row.at("seed_id").get<std::string>().substr(4)))];
    EvalRecord rec;
    rec.model = models[rng.below(2)];
    rec.variant_ref = row.at("variant_id").get<std::string>();
    rec.completion = "synthetic reasoning " + std::to_string(i);
    if (rng.below(10) < 7) {
      const std::string label(
          1, static_cast<char>('A' + rng.below(q.options.size())));
      rec.extracted = label;
      rec.correct = (label == q.answer);
    }
    records.push_back(std::move(rec));
  }

  const auto report = aggregate(records, manifest, seeds, {4096, 8192});
  require_eq(report.total_records, 200LL, "total record count");

  // Brute-force recount from raw parts, sharing no code with aggregate().
  struct Tally {
    long long n = 0, correct = 0, failures = 0;
  };
  std::map<std::array<std::string, 5>, Tally> brute;
  std::map<std::string, const Json*> row_by_id;
  for (const Json& row : manifest) row_by_id[row.at("variant_id").get<std::string>()] = &row;
  std::map<std::string, const SeedQuestion*> seed_by_id;
  for (const auto& q : seeds) seed_by_id[q.id] = &q;
  for (const auto& rec : records) {
    const Json& row = *row_by_id.at(rec.variant_ref);
    const SeedQuestion& q = *seed_by_id.at(row.at("seed_id").get<std::string>());
    std::array<std::string, 5> key;
    key[0] = rec.model;
    const std::string kind = row.at("kind").get<std::string>();
    if (kind == "long") {
      key[1] = std::to_string(row.at("target_tokens").get<long long>());
      key[3] = row.at("position").get<std::string>();
      key[4] = row.at("hop").get<std::string>();
    } else {
      key[1] = kind;
      key[3] = "-";
      key[4] = "-";
    }
    key[2] = to_string(q.category);
    Tally& t = brute[key];
    t.n += 1;
    if (rec.correct.has_value() && *rec.correct) t.correct += 1;
    if (!rec.extracted.has_value()) t.failures += 1;
  }

  require_eq(report.cells.size(), brute.size(), "cell count");
  for (const auto& [key, tally] : brute) {
    const CellKey ck{key[0], key[1], key[2], key[3], key[4]};
    auto it = report.cells.find(ck);
    require(it != report.cells.end(),
            "report is missing cell " + key[0] + "/" + key[1] + "/" + key[2] + "/" + key[3] +
                "/" + key[4]);
    require_eq(it->second.n, tally.n, "n for cell " + key[0] + "/" + key[1] + "/" + key[2]);
    require_eq(it->second.correct, tally.correct,
               "correct for cell " + key[0] + "/" + key[1] + "/" + key[2]);
    require_eq(it->second.extraction_failures, tally.failures,
               "extraction failures for cell " + key[0] + "/" + key[1] + "/" + key[2]);
  }

  // Independent exact baseline: mean of 1/|options| with integer arithmetic.
  long long num = 0, den = 1;
  for (const auto& q : seeds) {
    // num/den += 1/options
    num = num * static_cast<long long>(q.options.size()) + den;
    den *= static_cast<long long>(q.options.size());
    const long long g = std::gcd(num, den);
    num /= g;
    den /= g;
  }
  den *= static_cast<long long>(seeds.size());
  const long long g = std::gcd(num, den);
  require(report.random_baseline == Rational(num / g, den / g),
          "random baseline differs from the independent fraction");
}

// ---------------------------------------------------------------------------
// 8. Sampling and retry accounting
// ---------------------------------------------------------------------------

void criterion_sampling_accounting() {
  const auto& prompts = testsup::real_prompts();
  const auto seed = make_seed("acct", Category::logical_inference, 3, "B");
  const std::string background = "The Quarry Gate Annex keeps three entries on file.";
  const std::string inquiry =
      "Which entry does the Quarry Gate Annex list first?\n"
      "A. entry number 1\nB. entry number 2\nC. entry number 3";

  // Decomposition retained on the 4th sample: exactly 4 backend calls.
  {
    auto backend = std::make_shared<MockBackend>(Json::array({
        Json{{"match", "Quarry Gate Annex"},
             {"responses", Json::array({decompose_response(background, inquiry, "No", "Yes"),
                                        decompose_response(background, inquiry, "Yes", "No"),
                                        "not even close to parseable",
                                        decompose_response(background, inquiry, "Yes", "Yes")})}},
    }));
    LlmClient client(backend, fast_retry_options());
    const auto out = decompose(client, prompts, "m", seed, 5, 0.7);
    require(out.ok(), "decomposition should be retained on the 4th sample");
    require_eq(out.result->sample_index, 4, "retained sample index");
    require_eq(out.history.size(), std::size_t{4}, "decompose history length");
    require_eq(backend->call_count(), std::size_t{4}, "decompose backend calls");
  }

  // Persistent decompose failure stops at exactly max_samples calls.
  {
    auto backend = std::make_shared<MockBackend>(Json::array({
        Json{{"match", "Quarry Gate Annex"},
             {"response", decompose_response(background, inquiry, "No", "Yes")}},
    }));
    LlmClient client(backend, fast_retry_options());
    const auto out = decompose(client, prompts, "m", seed, 5, 0.7);
    require(!out.ok(), "all-reject decomposition must not be retained");
    require_eq(out.history.size(), std::size_t{5}, "decompose exhaustion history");
    require_eq(backend->call_count(), std::size_t{5}, "decompose exhaustion calls");
  }

  DecomposedQuestion d;
  d.seed_id = seed.id;
  d.background = background;
  d.inquiry = inquiry;
  d.anchors = {"Quarry Gate Annex"};
  d.meets_requirements = true;
  d.meaning_preserved = true;
  d.sample_index = 1;
  const std::vector<std::string> good_passages = {
      "Clerks at the Quarry Gate Annex file the first entry at dawn.",
      "The Quarry Gate Annex reading room keeps the older entries."};

  // Clean expansion: one generation plus one verification call.
  {
    auto backend = std::make_shared<MockBackend>(Json::array({
        Json{{"match", "expand the above material"},
             {"response", expansion_response(good_passages)}},
        Json{{"match", "compare the expanded material"},
             {"response", verification_response(true, false, true)}},
    }));
    LlmClient client(backend, fast_retry_options());
    const auto out = expand(client, prompts, "m", d, "Report", 5, 0.7);
    require(out.ok(), "clean expansion should be retained");
    require_eq(backend->call_count(), std::size_t{2}, "clean expansion backend calls");
  }

  // Transient transport failures are retried without burning samples: two
  // injected failures cost two raw attempts but still one logical sample.
  {
    auto backend = std::make_shared<MockBackend>(Json::array({
        Json{{"match", "expand the above material"},
             {"fail_times", 2},
             {"response", expansion_response(good_passages)}},
        Json{{"match", "compare the expanded material"},
             {"response", verification_response(true, false, true)}},
    }));
    LlmClient client(backend, fast_retry_options());
    const auto out = expand(client, prompts, "m", d, "Report", 5, 0.7);
    require(out.ok(), "flaky expansion should be retained after retries");
    require_eq(out.result->sample_index, 1, "flaky expansion sample index");
    require_eq(out.history.size(), std::size_t{1}, "flaky expansion history");
    require_eq(backend->call_count(), std::size_t{4},
               "raw attempts: 2 failures + 1 generation + 1 verification");
  }

  // Persistent verification rejection: exactly 2 * max_samples calls.
  {
    auto backend = std::make_shared<MockBackend>(Json::array({
        Json{{"match", "expand the above material"},
             {"response", expansion_response(good_passages)}},
        Json{{"match", "compare the expanded material"},
             {"response", verification_response(true, true, true)}},
    }));
    LlmClient client(backend, fast_retry_options());
    const auto out = expand(client, prompts, "m", d, "Report", 5, 0.7);
    require(!out.ok(), "leaky expansion must not be retained");
    require_eq(out.history.size(), std::size_t{5}, "expansion exhaustion history");
    require_eq(backend->call_count(), std::size_t{10},
               "expansion exhaustion calls (2 per sample)");
  }

  // Stage pass rates over the bundled demo set equal the hand-computed
  // design values: 19/20 step-filtered, 19/19 decomposed, 18/19 expanded.
  {
    testsup::TempDir tmp;
    auto cfg = PipelineConfig::load(testsup::source_dir() / "demo.ini");
    cfg.work_dir = tmp / "work";
    Pipeline pipeline(cfg);
    const auto summaries = pipeline.run_all();
    require_eq(summaries.size(), std::size_t{8}, "stage count");
    const Json& steps = summaries[1].counts;
    require_eq(steps.at("judged").get<long long>(), 20LL, "step-judged questions");
    require_eq(steps.at("retained").get<long long>(), 19LL, "step-retained questions");
    require_eq(steps.at("rejected").get<long long>(), 1LL, "step-rejected questions");
    const Json& dec = summaries[2].counts;
    require_eq(dec.at("questions").get<long long>(), 19LL, "decompose inputs");
    require_eq(dec.at("decomposed").get<long long>(), 19LL, "decompose retained");
    const Json& exp = summaries[3].counts;
    require_eq(exp.at("decompositions").get<long long>(), 19LL, "expand inputs");
    require_eq(exp.at("expanded").get<long long>(), 18LL, "expand retained");
    require_eq(exp.at("rejected").get<long long>(), 1LL, "expand rejected");
    require(Rational(steps.at("retained").get<long long>(), 20) == Rational(19, 20),
            "step pass rate");
    require(Rational(exp.at("expanded").get<long long>(), 19) == Rational(18, 19),
            "expand pass rate");
  }
}

// ---------------------------------------------------------------------------
// 9. Tokenizer fidelity vs an independent reference
// ---------------------------------------------------------------------------

// A from-scratch pair-merge tokenizer sharing no code with the production
// one: vector-scan rank lookup, its own file parsing, no memoization. The
// contract: repeatedly merge the leftmost instance of the lowest-ranked
// adjacent symbol pair until none applies.
struct ReferenceBpe {
  std::vector<std::pair<std::string, std::string>> merges;

  explicit ReferenceBpe(const std::filesystem::path& path) {
    std::istringstream in(testsup::read_text(path));
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::istringstream ls(line);
      std::string a, b, extra;
      if (!(ls >> a)) continue;
      if (a[0] == '#') continue;
      if (!(ls >> b) || (ls >> extra)) throw Failure("reference merges: bad line " + line);
      merges.push_back({a, b});
    }
  }

  long long rank_of(const std::string& a, const std::string& b) const {
    for (std::size_t r = 0; r < merges.size(); ++r)
      if (merges[r].first == a && merges[r].second == b) return static_cast<long long>(r);
    return -1;
  }

  std::size_t count_word(const std::string& word) const {
    std::vector<std::string> syms;
    for (char c : word) syms.emplace_back(1, c);
    while (syms.size() > 1) {
      long long best = -1;
      std::size_t at = 0;
      for (std::size_t i = 0; i + 1 < syms.size(); ++i) {
        const long long r = rank_of(syms[i], syms[i + 1]);
        if (r >= 0 && (best < 0 || r < best)) {
          best = r;
          at = i;
        }
      }
      if (best < 0) break;
      syms[at] += syms[at + 1];
      syms.erase(syms.begin() + static_cast<std::ptrdiff_t>(at) + 1);
    }
    return syms.size();
  }

  std::size_t count(const std::string& text) const {
    std::size_t total = 0;
    std::istringstream in(text);
    std::string word;
    while (in >> word) total += count_word(word);
    return total;
  }
};

void criterion_tokenizer_fidelity() {
  const auto merges_path = testsup::test_data_dir() / "tiny.merges";
  const ReferenceBpe reference(merges_path);
  const BpeTokenizer production(merges_path);
  const WhitespaceTokenizer ws;

  const std::vector<std::string> vocab = {
      "the",     "then",    "there",   "thereof", "and",     "stand",  "standing",
      "ouch",    "our",     "hour",    "state",   "states",  "chatter", "verse",
      "lower",   "seller",  "orchard", "leather", "weather", "veteran", "ingots"};
  Rng rng(1912);
  std::size_t checked = 0;
  for (int sample = 0; sample < 1000; ++sample) {
    std::string text;
    const std::size_t words = 3 + rng.below(23);
    for (std::size_t w = 0; w < words; ++w) {
      if (w) text += (rng.below(5) == 0 ? "\t" : " ");
      if (rng.below(3) == 0) {
        // random letter noise, 1-10 chars
        const std::size_t len = 1 + rng.below(10);
        for (std::size_t i = 0; i < len; ++i)
          text += static_cast<char>('a' + rng.below(26));
      } else {
        text += vocab[rng.below(vocab.size())];
      }
    }
    const std::size_t got = production.count(text);
    const std::size_t want = reference.count(text);
    if (got != want)
      throw Failure("sample " + std::to_string(sample) + " (\"" + text + "\"): production " +
                    std::to_string(got) + " vs reference " + std::to_string(want));
    // The whitespace tokenizer must agree with a plain stream split.
    std::istringstream in(text);
    std::string word;
    std::size_t plain = 0;
    while (in >> word) ++plain;
    require_eq(ws.count(text), plain, "whitespace count for sample " + std::to_string(sample));
    ++checked;
  }
  require_eq(checked, std::size_t{1000}, "fidelity sample count");
}

// ---------------------------------------------------------------------------
// 10. Live synthesis smoke test (credentialed, optional)
// ---------------------------------------------------------------------------

void criterion_live_smoke() {
  const char* cfg_path = std::getenv("LONGWEAVE_LIVE_SMOKE");
  require(cfg_path != nullptr, "LONGWEAVE_LIVE_SMOKE is not set"); // guarded by main()

  auto cfg = PipelineConfig::load(cfg_path);
  require(cfg.backends.count(cfg.synth_backend),
          "live config must name a synthesis backend");
  auto backend = make_backend(cfg.backends.at(cfg.synth_backend));
  LlmClient::Options opts;
  opts.retry = cfg.backends.at(cfg.synth_backend).retry;
  LlmClient client(std::move(backend), opts);
  const auto& prompts = testsup::real_prompts();

  auto seeds = import_seed_questions(testsup::source_dir() / "data" / "demo" / "seeds.jsonl");
  seeds.resize(5);

  int decomposed = 0, expanded = 0;
  for (const auto& q : seeds) {
    const auto dout =
        decompose(client, prompts, cfg.synth_model, q, cfg.max_samples, cfg.synth_temperature);
    if (!dout.ok()) continue;
    ++decomposed;
    const auto eout = expand(client, prompts, cfg.synth_model, *dout.result, "Report",
                             cfg.max_samples, cfg.synth_temperature);
    if (eout.ok()) ++expanded;
  }
  std::cout << "        live smoke: " << decomposed << "/5 decomposed, " << expanded
            << "/5 expanded, usage "
            << client.usage_report(cfg.prices).at("total").dump() << "\n";
  require(decomposed >= 4, "fewer than 4 of 5 live decompositions retained");
  require(expanded >= 4, "fewer than 4 of 5 live expansions retained");
}

struct Criterion {
  std::string name;
  std::function<void()> fn;
  bool skipped = false;
  std::string skip_reason = {};
};

} // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"1. offline demo pipeline: full grid in under 60s with zero invariant violations",
       criterion_offline_demo},
      {"2. assembly invariants hold across 1200 randomized instances",
       criterion_assembly_invariants},
      {"3. clue placement is uniform across slots (chi-square, alpha 0.01)",
       criterion_placement_uniformity},
      {"4. identical configs rerun to byte-identical manifests and prompt digests",
       criterion_determinism},
      {"5. random baselines are exact rationals", criterion_random_baseline},
      {"6. answer extraction golden suite (30 cases)", criterion_extraction_suite},
      {"7. aggregation equals a brute-force recount of 200 records",
       criterion_aggregation_oracle},
      {"8. sampling caps, retries, and stage pass rates match hand counts",
       criterion_sampling_accounting},
      {"9. token counts match an independent reference implementation",
       criterion_tokenizer_fidelity},
      {"10. live synthesis smoke test (5 seeds, needs credentials)", criterion_live_smoke},
  };
  if (std::getenv("LONGWEAVE_LIVE_SMOKE") == nullptr) {
    criteria.back().skipped = true;
    criteria.back().skip_reason =
        "set LONGWEAVE_LIVE_SMOKE to a config with a live synthesis backend to enable";
  }

  int failed = 0;
  for (auto& c : criteria) {
    if (c.skipped) {
      std::cout << "[SKIP] " << c.name << " — " << c.skip_reason << "\n";
      continue;
    }
    try {
      c.fn();
      std::cout << "[PASS] " << c.name << "\n";
    } catch (const std::exception& e) {
      std::cout << "[FAIL] " << c.name << "\n       " << e.what() << "\n";
      ++failed;
    }
  }
  if (failed) {
    std::cout << failed << " acceptance criteria failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
