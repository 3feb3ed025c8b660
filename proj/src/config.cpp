#include "topiceval/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "topiceval/textnorm.hpp"

namespace topiceval {

MetricSelection parse_metric_selection(const std::string& csv) {
  MetricSelection m{false, false, false, false};
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string name = trim(item);
    if (name.empty()) continue;
    if (name == "overlap")
      m.overlap = true;
    else if (name == "synset")
      m.synset = true;
    else if (name == "oa")
      m.oa = true;
    else if (name == "ot")
      m.ot = true;
    else if (name == "all")
      m = MetricSelection{};
    else
      throw std::invalid_argument("unknown metric: " + name);
  }
  if (!m.any()) throw std::invalid_argument("no metric selected");
  return m;
}

std::string metric_selection_to_string(const MetricSelection& m) {
  std::string out;
  auto add = [&out](const char* name) {
    if (!out.empty()) out += ",";
    out += name;
  };
  if (m.overlap) add("overlap");
  if (m.synset) add("synset");
  if (m.oa) add("oa");
  if (m.ot) add("ot");
  return out;
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto as_int = [&](const std::string& v) {
    size_t used = 0;
    int out = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument("bad integer for " + key + ": " + v);
    return out;
  };
  if (key == "model_dir")
    cfg.model_dir = value;
  else if (key == "documents")
    cfg.documents_path = value;
  else if (key == "keywords")
    cfg.keywords_path = value;
  else if (key == "topics")
    cfg.topics_path = value;
  else if (key == "embeddings")
    cfg.embeddings_path = value;
  else if (key == "wordnet")
    cfg.wordnet_dir = value;
  else if (key == "ref_corpus")
    cfg.ref_corpus_path = value;
  else if (key == "output_dir")
    cfg.output_dir = value;
  else if (key == "n_topical")
    cfg.n_topical = as_int(value);
  else if (key == "num_keywords")
    cfg.llm.num_keywords = as_int(value);
  else if (key == "topic_aware")
    cfg.topic_aware = value == "true" || value == "1";
  else if (key == "metrics")
    cfg.metrics = parse_metric_selection(value);
  else if (key == "seed")
    cfg.seed = std::stoul(value);
  else if (key == "llm.endpoint")
    cfg.llm.endpoint = value;
  else if (key == "llm.model_name")
    cfg.llm.model_name = value;
  else if (key == "llm.max_tokens")
    cfg.llm.max_tokens = as_int(value);
  else if (key == "llm.temperature")
    cfg.llm.temperature = std::stod(value);
  else if (key == "llm.num_keywords")
    cfg.llm.num_keywords = as_int(value);
  else if (key == "llm.retries")
    cfg.llm.retries = as_int(value);
  else if (key == "llm.parallelism")
    cfg.llm.parallelism = as_int(value);
  else if (key == "llm.max_doc_chars")
    cfg.llm.max_doc_chars = static_cast<size_t>(std::stoul(value));
  else if (key == "llm.api_key_env")
    cfg.llm.api_key_env = value;
  else if (key == "llm.transcript")
    cfg.llm.transcript_path = value;
  else
    throw std::invalid_argument("unknown config key: " + key);
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  RunConfig cfg;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                              (value.front() == '\'' && value.back() == '\'')))
      value = value.substr(1, value.size() - 2);
    try {
      apply_override(cfg, key, value);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

std::string config_hash(const RunConfig& cfg) {
  char num[96];
  std::snprintf(num, sizeof(num), "%d|%d|%d|%.6g|%zu|%lu|%d", cfg.n_topical, cfg.llm.num_keywords,
                cfg.llm.max_tokens, cfg.llm.temperature, cfg.llm.max_doc_chars, cfg.seed,
                cfg.topic_aware ? 1 : 0);
  std::string canonical;
  for (const std::string* s :
       {&cfg.model_dir, &cfg.documents_path, &cfg.keywords_path, &cfg.topics_path,
        &cfg.embeddings_path, &cfg.wordnet_dir, &cfg.ref_corpus_path, &cfg.llm.endpoint,
        &cfg.llm.model_name, &cfg.llm.transcript_path}) {
    canonical += *s;
    canonical += '\x1f';
  }
  canonical += metric_selection_to_string(cfg.metrics);
  canonical += '\x1f';
  canonical += num;

  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", h);
  return std::string(buf);
}

Manifest make_manifest(const RunConfig& cfg) {
  Manifest m;
  m.config_hash = config_hash(cfg);
  m.template_version = kPromptTemplateVersion;
  m.tool_version = kToolVersion;
  return m;
}

}  // namespace topiceval
