// Command-line front end for the synthesis + evaluation pipeline.
//
//   longweave --config run.ini [--work-dir DIR] <stage> [stage flags]
//
// Stages: ingest, steps, decompose, expand, pool, assemble, eval, report,
// or `all` to run the full chain. Exit code 0 only when every requested
// stage completed.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "longweave/assemble.hpp"
#include "longweave/pipeline.hpp"
#include "longweave/text.hpp"

namespace {

using namespace longweave;

std::vector<std::string> split_csv(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  for (char c : value) {
    if (c == ',') {
      const std::string t = trim(item);
      if (!t.empty()) out.push_back(t);
      item.clear();
    } else {
      item.push_back(c);
    }
  }
  const std::string t = trim(item);
  if (!t.empty()) out.push_back(t);
  return out;
}

std::vector<long long> parse_lengths(const std::string& value) {
  std::vector<long long> out;
  for (const std::string& item : split_csv(value)) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stoll(item, &pos));
      if (pos != item.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::runtime_error("--lengths: '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw std::runtime_error("--lengths: no values given");
  return out;
}

void print_summary(const StageSummary& summary) {
  std::cout << "[" << to_string(summary.stage) << "] ok (";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", summary.seconds);
  std::cout << buf << ") " << summary.counts.dump() << "\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Synthesizes long-context multiple-choice questions from short seeds "
      "and scores chat models on them"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  std::string config_path;
  std::string work_dir_override;
  app.add_option("--config", config_path, "Pipeline configuration (INI)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--work-dir", work_dir_override,
                 "Override the configured work directory");

  for (const char* name : {"ingest", "steps", "decompose", "expand", "pool", "report"}) {
    app.add_subcommand(name, "Run the '" + std::string(name) + "' stage");
  }
  app.add_subcommand("all", "Run every stage in order");

  CLI::App* assemble_cmd =
      app.add_subcommand("assemble", "Build the variant matrix and its manifest");
  std::string opt_lengths, opt_positions, opt_hops, opt_tokenizer;
  std::uint64_t opt_seed = 0;
  double opt_tolerance = 0.0;
  assemble_cmd->add_option("--lengths", opt_lengths,
                           "Comma-separated token targets (e.g. 8192,16384)");
  assemble_cmd->add_option("--positions", opt_positions,
                           "Comma-separated inquiry positions: after,before");
  assemble_cmd->add_option("--hops", opt_hops, "Comma-separated hop modes: multi,single");
  assemble_cmd->add_option("--seed", opt_seed, "Override the run seed for this matrix");
  assemble_cmd->add_option("--tolerance", opt_tolerance,
                           "Length tolerance fraction, e.g. 0.05");
  assemble_cmd->add_option("--tokenizer", opt_tokenizer,
                           "Token counter: whitespace or bpe:<merges-file>");

  CLI::App* eval_cmd = app.add_subcommand("eval", "Score configured models on the manifest");
  std::string opt_model, opt_backend;
  int opt_parallel = 0;
  bool opt_resume = false;
  eval_cmd->add_option("--model", opt_model, "Evaluate a single model instead of eval.models");
  eval_cmd->add_option("--backend", opt_backend, "Use this backend instead of eval.backend");
  eval_cmd->add_option("--max-parallel", opt_parallel, "Concurrent requests")
      ->check(CLI::PositiveNumber);
  eval_cmd->add_flag("--resume", opt_resume, "Reuse records already on disk for the model");

  CLI11_PARSE(app, argc, argv);

  try {
    PipelineConfig config = PipelineConfig::load(config_path);
    if (!work_dir_override.empty()) {
      config.work_dir = std::filesystem::absolute(work_dir_override);
    }
    Pipeline pipeline(std::move(config));

    const CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();

    if (name == "all") {
      for (Stage stage : all_stages()) print_summary(pipeline.run_stage(stage));
    } else if (name == "assemble") {
      AssembleOverrides ov;
      if (assemble_cmd->count("--lengths")) ov.lengths = parse_lengths(opt_lengths);
      if (assemble_cmd->count("--positions")) {
        std::vector<InquiryPosition> positions;
        for (const std::string& p : split_csv(opt_positions)) {
          positions.push_back(inquiry_position_from_string(p));
        }
        ov.positions = positions;
      }
      if (assemble_cmd->count("--hops")) {
        std::vector<HopMode> hops;
        for (const std::string& h : split_csv(opt_hops)) {
          hops.push_back(hop_mode_from_string(h));
        }
        ov.hops = hops;
      }
      if (assemble_cmd->count("--seed")) ov.seed = opt_seed;
      if (assemble_cmd->count("--tolerance")) ov.tolerance = opt_tolerance;
      if (assemble_cmd->count("--tokenizer")) ov.tokenizer_spec = opt_tokenizer;
      print_summary(pipeline.run_assemble(ov));
    } else if (name == "eval") {
      EvalOverrides ov;
      if (eval_cmd->count("--model")) ov.model = opt_model;
      if (eval_cmd->count("--backend")) ov.backend = opt_backend;
      if (eval_cmd->count("--max-parallel")) ov.max_parallel = opt_parallel;
      ov.resume = opt_resume;
      print_summary(pipeline.run_eval(ov));
    } else {
      print_summary(pipeline.run_stage(stage_from_string(name)));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
