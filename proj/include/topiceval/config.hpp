#pragma once

#include <string>

#include "topiceval/llm.hpp"
#include "topiceval/scores.hpp"

namespace topiceval {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunConfig {
  std::string model_dir;       // model artifact directory
  std::string documents_path;  // documents JSONL
  std::string keywords_path;   // reference keywords JSONL; empty -> ask the LLM
  std::string topics_path;     // collection topics JSONL for topic-aware mode
  std::string embeddings_path;
  std::string wordnet_dir;
  std::string ref_corpus_path;
  std::string output_dir = ".";
  int n_topical = 10;
  bool topic_aware = false;
  MetricSelection metrics;
  LlmConfig llm;
  unsigned long seed = 0;  // only consumed by fixture generation
};

// Key-value config file: `key = value`, one per line, '#' comments. Nested
// llm settings use the "llm." prefix. Unknown keys are rejected.
RunConfig load_run_config(const std::string& path);
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

// Hash over the evaluation-relevant settings. Execution knobs that cannot
// change results (parallelism, retries, api key source, output dir) are
// excluded so reruns of the same evaluation carry the same hash.
std::string config_hash(const RunConfig& cfg);

Manifest make_manifest(const RunConfig& cfg);

MetricSelection parse_metric_selection(const std::string& csv);
std::string metric_selection_to_string(const MetricSelection& m);

}  // namespace topiceval
