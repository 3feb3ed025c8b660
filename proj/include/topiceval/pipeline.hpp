#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "topiceval/config.hpp"
#include "topiceval/corpus.hpp"

namespace topiceval {

// Stage-labeled pipeline failure; exit_code is stable per stage (documented
// in the README).
struct StageError : std::runtime_error {
  StageError(std::string stage_name, int code, const std::string& message)
      : std::runtime_error("[" + stage_name + "] " + message),
        stage(std::move(stage_name)),
        exit_code(code) {}
  std::string stage;
  int exit_code;
};

struct PipelineResult {
  ScoreReport report;
  std::string report_path;
  std::string topical_path;
  std::string keywords_path;
  std::vector<std::string> log;
};

// extract -> keyword acquisition (file or LLM) -> score -> report. Every
// output file embeds the config-hash manifest. Failed LLM batches leave a
// checkpoint file that a rerun resumes from.
PipelineResult run_pipeline(const RunConfig& cfg);

struct Diagnostics {
  std::vector<std::string> problems;
  std::vector<std::string> info;
  bool ok() const { return problems.empty(); }
};

// Non-fatal configuration check: missing files, dimension mismatches,
// vocabulary coverage of the embedding table and WordNet index.
Diagnostics validate_config(const RunConfig& cfg);

}  // namespace topiceval
