// Microbenchmarks for the hot paths: token counting, distractor sampling,
// and full variant assembly. Fixtures are synthesized deterministically so
// runs are comparable across machines.

#include <benchmark/benchmark.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "longweave/assemble.hpp"
#include "longweave/digest.hpp"
#include "longweave/pool.hpp"
#include "longweave/prompts.hpp"
#include "longweave/rng.hpp"
#include "longweave/tokenizer.hpp"

using namespace longweave;

namespace {

std::string synth_text(std::uint64_t seed, std::size_t words) {
  Rng rng(seed);
  static const std::vector<std::string> vocab = {
      "the",    "ledger", "annex",  "clerk",   "records", "route",  "morning",
      "before", "after",  "tally",  "station", "passage", "note",   "entry",
      "files",  "sorted", "listed", "under",   "beside",  "weekly"};
  std::string out;
  out.reserve(words * 7);
  for (std::size_t i = 0; i < words; ++i) {
    if (i) out += ' ';
    out += vocab[rng.below(vocab.size())];
  }
  return out;
}

// A merge table over the benchmark vocabulary's frequent fragments.
std::filesystem::path bpe_merges_file() {
  static const std::filesystem::path path = [] {
    auto p = std::filesystem::temp_directory_path() / "longweave-bench.merges";
    std::ofstream out(p);
    out << "t h\nth e\ne r\nl e\nle d\nn o\nno t\nnot e\nr e\nre c\na n\nan n\n"
           "s t\nst a\nsta t\nu n\nun d\nb e\nbe f\no r\nor t\ns o\nso r\n";
    return p;
  }();
  return path;
}

DistractorPool bench_pool(std::size_t passages) {
  Rng rng(7);
  WhitespaceTokenizer tok;
  DistractorPool pool;
  for (std::size_t i = 0; i < passages; ++i) {
    DistractorPassage p;
    p.text = synth_text(1000 + i, 20 + rng.below(30));
    p.id = sha256_hex(p.text);
    p.source_ref = "bench:" + std::to_string(i);
    p.token_count = static_cast<long long>(tok.count(p.text));
    pool.insert(p);
  }
  return pool;
}

void BM_WhitespaceCount(benchmark::State& state) {
  const std::string text = synth_text(1, static_cast<std::size_t>(state.range(0)));
  WhitespaceTokenizer tok;
  for (auto _ : state) benchmark::DoNotOptimize(tok.count(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_WhitespaceCount)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_BpeCount(benchmark::State& state) {
  const std::string text = synth_text(2, static_cast<std::size_t>(state.range(0)));
  BpeTokenizer tok(bpe_merges_file());
  for (auto _ : state) benchmark::DoNotOptimize(tok.count(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_BpeCount)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_SampleDistractors(benchmark::State& state) {
  const auto pool = bench_pool(5000);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(++seed);
    auto picked = sample_distractors(pool, state.range(0), rng);
    benchmark::DoNotOptimize(picked);
  }
}
BENCHMARK(BM_SampleDistractors)->Arg(2048)->Arg(8192)->Arg(32768);

void BM_AssembleLong(benchmark::State& state) {
  const auto pool = bench_pool(5000);
  const auto prompts =
      PromptLibrary::load_dir(std::filesystem::path(LONGWEAVE_SOURCE_DIR) / "prompts");
  WhitespaceTokenizer tok;

  SeedQuestion seed;
  seed.id = "bench";
  seed.category = Category::logical_inference;
  seed.stem = "Which entry does the annex ledger list first?";
  seed.options = {{"A", "the route tally"}, {"B", "the morning note"}, {"C", "the weekly file"}};
  seed.answer = "B";
  seed.rationale = "The ledger lists the morning note first.";
  seed.source = "bench";

  DecomposedQuestion decomp;
  decomp.seed_id = seed.id;
  decomp.background = "The Kestrel Annex ledger lists the morning note first.";
  decomp.inquiry =
      "Which entry does the Kestrel Annex ledger list first?\n"
      "A. the route tally\nB. the morning note\nC. the weekly file";
  decomp.anchors = {"Kestrel Annex"};
  decomp.meets_requirements = true;
  decomp.meaning_preserved = true;
  decomp.sample_index = 1;

  ExpandedContext expanded;
  expanded.seed_id = seed.id;
  for (int i = 0; i < 4; ++i)
    expanded.passages.push_back("Kestrel Annex " + synth_text(90 + i, 180));
  expanded.genre = "Report";
  expanded.key_info_complete = true;
  expanded.answer_affecting = false;
  expanded.all_related = true;
  expanded.sample_index = 1;

  VariantSpec spec;
  spec.kind = VariantKind::long_context;
  spec.target_tokens = state.range(0);
  spec.position = InquiryPosition::after_context;
  spec.hop = HopMode::multi_hop;

  std::uint64_t run = 0;
  for (auto _ : state) {
    spec.rng_seed = ++run;
    auto aq = assemble(seed, decomp, expanded, pool, spec, prompts, tok, 0.05);
    benchmark::DoNotOptimize(aq);
  }
}
BENCHMARK(BM_AssembleLong)->Arg(4096)->Arg(8192)->Arg(16384)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
