// Command-line front end: evaluate topic models by the agreement between
// their per-document topical words and reference keywords.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <vector>

#include "topiceval/baseline.hpp"
#include "topiceval/config.hpp"
#include "topiceval/corpus_io.hpp"
#include "topiceval/embedding.hpp"
#include "topiceval/llm.hpp"
#include "topiceval/pipeline.hpp"
#include "topiceval/scores.hpp"
#include "topiceval/topical.hpp"
#include "topiceval/wordnet.hpp"

namespace {

using nlohmann::json;
using namespace topiceval;

struct LlmFlags {
  std::string endpoint;
  std::string model_name;
  std::string transcript;
  int max_tokens = 300;
  double temperature = 0.0;
  int num_keywords = 5;
  int retries = 3;
  int parallelism = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--endpoint", endpoint, "chat-completions URL");
    cmd->add_option("--model-name", model_name, "model identifier");
    cmd->add_option("--transcript", transcript, "replay responses from this transcript file");
    cmd->add_option("--max-tokens", max_tokens, "generation token cap");
    cmd->add_option("--temperature", temperature, "sampling temperature (0 = greedy)");
    cmd->add_option("--num-keywords", num_keywords, "keywords per document");
    cmd->add_option("--retries", retries, "transport retries");
    cmd->add_option("--parallelism", parallelism, "in-flight requests");
  }

  LlmConfig to_config() const {
    LlmConfig cfg;
    cfg.endpoint = endpoint;
    cfg.model_name = model_name;
    cfg.transcript_path = transcript;
    cfg.max_tokens = max_tokens;
    cfg.temperature = temperature;
    cfg.num_keywords = num_keywords;
    cfg.retries = retries;
    cfg.parallelism = parallelism;
    return cfg;
  }
};

std::vector<std::vector<std::string>> load_topic_words_file(const std::string& path) {
  std::vector<std::vector<std::string>> topics;
  read_jsonl(path, [&](const json& j, size_t lineno) {
    if (!j.contains("words") || !j.at("words").is_array())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected a 'words' array");
    topics.push_back(j.at("words").get<std::vector<std::string>>());
  });
  if (topics.empty()) throw std::runtime_error(path + ": no topics");
  return topics;
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << j.dump(2) << "\n";
}

int cmd_extract(const std::string& model_dir, const std::string& out, int n) {
  ModelArtifact artifact = load_model_artifact(model_dir);
  write_topical_words(extract_topical_words(artifact, n), out);
  std::cout << "wrote topical words for " << artifact.num_docs() << " documents to " << out << "\n";
  return 0;
}

int cmd_keywords(const std::string& docs_path, const std::string& out, const LlmFlags& flags,
                 bool topic_aware, const std::string& topics_path) {
  std::vector<Document> docs = load_documents(docs_path);
  LlmClient client(flags.to_config());
  TopicList topics;
  if (topic_aware) {
    read_jsonl(topics_path, [&](const json& j, size_t) {
      topics.topics.emplace_back(j.at("label").get<std::string>(), j.value("frequency", 1L));
    });
  }
  RunLog log;
  std::vector<KeywordSet> sets =
      generate_keywords(client, docs, topic_aware, topic_aware ? &topics : nullptr, &log);
  write_keywords(sets, out);
  for (const std::string& entry : log.entries) std::cerr << "note: " << entry << "\n";
  std::cout << "wrote " << sets.size() << " keyword sets to " << out << "\n";
  return 0;
}

int cmd_topics(const std::string& docs_path, const std::string& out, const LlmFlags& flags,
               const std::string& checkpoint, bool no_refine) {
  std::vector<Document> docs = load_documents(docs_path);
  LlmClient client(flags.to_config());
  TopicGenOptions opts;
  opts.checkpoint_path = checkpoint;
  opts.refine = !no_refine;
  RunLog log;
  TopicList topics = generate_collection_topics(client, docs, opts, &log);
  std::ofstream file(out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write: " + out);
  for (const auto& [label, freq] : topics.topics)
    file << json{{"frequency", freq}, {"label", label}}.dump() << "\n";
  for (const std::string& entry : log.entries) std::cerr << "note: " << entry << "\n";
  std::cout << "wrote " << topics.topics.size() << " topics to " << out << "\n";
  return 0;
}

int cmd_score(const std::string& topical_path, const std::string& keywords_path,
              const std::string& embeddings_path, const std::string& wordnet_dir,
              const std::string& metrics_csv, const std::string& out) {
  MetricSelection metrics = parse_metric_selection(metrics_csv);
  std::map<std::string, WeightedWordSet> topical = load_topical_words(topical_path);
  std::map<std::string, KeywordSet> keywords;
  for (KeywordSet& s : load_keywords(keywords_path)) keywords.emplace(s.doc_id, std::move(s));

  ScoreResources resources;
  SynsetIndex synsets;
  EmbeddingTable embeddings;
  if (metrics.synset) {
    synsets = load_synset_index(wordnet_dir);
    resources.synsets = &synsets;
  }
  if (metrics.oa || metrics.ot) {
    embeddings = load_embedding_table(embeddings_path);
    resources.embeddings = &embeddings;
  }
  ScoreReport report = score_all(topical, keywords, resources, metrics);
  write_report(report, out);
  std::cout << "scored " << report.per_doc.size() << " documents (" << report.skipped.size()
            << " skipped), report at " << out << "\n";
  return 0;
}

int cmd_baseline(const std::string& topics_path, const std::string& ref_corpus, int window,
                 const std::string& out) {
  std::vector<std::vector<std::string>> topics = load_topic_words_file(topics_path);
  std::vector<std::vector<std::string>> top25;
  for (const auto& t : topics) {
    if (t.size() < 25) throw std::runtime_error("each topic needs at least 25 words for diversity");
    top25.emplace_back(t.begin(), t.begin() + 25);
  }
  json result{{"td", topic_diversity(top25)}};

  if (!ref_corpus.empty()) {
    CooccurrenceIndex index = build_cooccurrence(load_documents(ref_corpus), window);
    std::vector<double> scores;
    json per_topic = json::array();
    for (const auto& t : topics) {
      std::vector<std::string> top10(t.begin(), t.begin() + 10);
      NpmiResult r = npmi_topic(top10, index);
      scores.push_back(r.value);
      json entry{{"npmi", r.value}};
      if (!r.skipped_pairs.empty()) {
        json skipped = json::array();
        for (const auto& [a, b] : r.skipped_pairs) skipped.push_back(json::array({a, b}));
        entry["skipped_pairs"] = skipped;
      }
      per_topic.push_back(entry);
    }
    result["npmi"] = topics.size() >= 2 ? npmi_aggregate(scores) : scores.front();
    result["per_topic"] = per_topic;
  }
  write_json_file(result, out);
  std::cout << "baseline metrics written to " << out << "\n";
  return 0;
}

int cmd_correlate(const std::vector<std::string>& report_paths, const std::string& out, bool csv) {
  if (report_paths.size() < 2) throw std::runtime_error("correlate needs at least two reports");
  std::vector<ScoreReport> reports;
  for (const std::string& p : report_paths) reports.push_back(load_report(p));

  // Metric series across report files (one point per file, aggregate mean).
  std::vector<std::string> metrics;
  for (const auto& [name, agg] : reports.front().aggregates) metrics.push_back(name);
  for (const ScoreReport& r : reports)
    for (const std::string& m : metrics)
      if (r.aggregates.count(m) == 0)
        throw std::runtime_error("metric '" + m + "' missing from one of the reports");

  json matrix = json::array();
  std::vector<std::vector<double>> values;
  for (const std::string& m : metrics) {
    std::vector<double> series;
    for (const ScoreReport& r : reports) series.push_back(r.aggregates.at(m).mean);
    values.push_back(series);
  }
  for (size_t i = 0; i < metrics.size(); ++i) {
    json row = json::array();
    for (size_t j = 0; j < metrics.size(); ++j)
      row.push_back(i == j ? 1.0 : pearson(values[i], values[j]));
    matrix.push_back(row);
  }
  if (csv) {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write: " + out);
    file << "metric";
    for (const std::string& m : metrics) file << "," << m;
    file << "\n";
    for (size_t i = 0; i < metrics.size(); ++i) {
      file << metrics[i];
      for (size_t j = 0; j < metrics.size(); ++j) file << "," << matrix[i][j].get<double>();
      file << "\n";
    }
  } else {
    write_json_file(json{{"metrics", metrics}, {"matrix", matrix}}, out);
  }
  std::cout << "correlation matrix over " << metrics.size() << " metrics written to " << out << "\n";
  return 0;
}

int cmd_gap(const std::string& llm_report_path, const std::string& human_report_path,
            const std::string& out) {
  ScoreReport llm_report = load_report(llm_report_path);
  ScoreReport human_report = load_report(human_report_path);
  json gaps = json::object();
  for (const auto& [name, agg] : llm_report.aggregates) {
    auto it = human_report.aggregates.find(name);
    if (it == human_report.aggregates.end()) continue;
    gaps[name] = eval_gap(agg.mean, it->second.mean);
  }
  if (gaps.empty()) throw std::runtime_error("no common metrics between the two reports");
  write_json_file(json{{"gap", gaps}}, out);
  std::cout << "gap table written to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topic model evaluation via per-document word agreement"};
  app.require_subcommand(1);

  // extract
  auto* extract = app.add_subcommand("extract", "compose document-word distributions, keep top words");
  std::string model_dir, out_path;
  int n_topical = 10;
  extract->add_option("--model", model_dir, "model artifact directory")->required();
  extract->add_option("--out", out_path, "output JSONL")->required();
  extract->add_option("-n,--top", n_topical, "topical words per document");

  // keywords
  auto* keywords = app.add_subcommand("keywords", "generate reference keywords with an LLM");
  std::string kw_docs, kw_out, kw_topics;
  bool kw_topic_aware = false;
  LlmFlags kw_flags;
  keywords->add_option("--docs", kw_docs, "documents JSONL")->required();
  keywords->add_option("--out", kw_out, "output JSONL")->required();
  keywords->add_flag("--topic-aware", kw_topic_aware, "two-stage topic-aware suggestion");
  keywords->add_option("--topics", kw_topics, "collection topics JSONL (topic-aware mode)");
  kw_flags.attach(keywords);

  // topics
  auto* topics = app.add_subcommand("topics", "generate collection-level topics with an LLM");
  std::string tp_docs, tp_out, tp_checkpoint;
  bool tp_no_refine = false;
  LlmFlags tp_flags;
  topics->add_option("--docs", tp_docs, "documents JSONL")->required();
  topics->add_option("--out", tp_out, "output JSONL")->required();
  topics->add_option("--checkpoint", tp_checkpoint, "checkpoint/resume file");
  topics->add_flag("--no-refine", tp_no_refine, "skip the merge/prune refinement pass");
  tp_flags.attach(topics);

  // score
  auto* score = app.add_subcommand("score", "agreement scores between topical words and keywords");
  std::string sc_topical, sc_keywords, sc_embeddings, sc_wordnet, sc_out;
  std::string sc_metrics = "all";
  score->add_option("--topical", sc_topical, "topical words JSONL")->required();
  score->add_option("--keywords", sc_keywords, "keywords JSONL")->required();
  score->add_option("--embeddings", sc_embeddings, "embedding table (text / gz)");
  score->add_option("--wordnet", sc_wordnet, "WordNet index directory");
  score->add_option("--metrics", sc_metrics, "comma list: overlap,synset,oa,ot or all");
  score->add_option("--out", sc_out, "report JSON")->required();

  // baseline
  auto* baseline = app.add_subcommand("baseline", "topic diversity and NPMI coherence");
  std::string bl_topics, bl_ref, bl_out;
  int bl_window = 10;
  baseline->add_option("--topics", bl_topics, "topic top-words JSONL")->required();
  baseline->add_option("--ref-corpus", bl_ref, "reference corpus JSONL (enables NPMI)");
  baseline->add_option("--window", bl_window, "co-occurrence window");
  baseline->add_option("--out", bl_out, "output JSON")->required();

  // correlate
  auto* correlate = app.add_subcommand("correlate", "Pearson correlations between metric series");
  std::vector<std::string> co_reports;
  std::string co_out;
  bool co_csv = false;
  correlate->add_option("--reports", co_reports, "two or more report files")->required()->expected(-2);
  correlate->add_option("--out", co_out, "output file")->required();
  correlate->add_flag("--csv", co_csv, "write CSV instead of JSON");

  // gap
  auto* gap = app.add_subcommand("gap", "evaluation gap between LLM-truth and human-truth reports");
  std::string gp_llm, gp_human, gp_out;
  gap->add_option("--llm-report", gp_llm, "report scored against LLM keywords")->required();
  gap->add_option("--human-report", gp_human, "report scored against human keywords")->required();
  gap->add_option("--out", gp_out, "output JSON")->required();

  // validate / run
  auto* validate_cmd = app.add_subcommand("validate", "check a run configuration");
  auto* run = app.add_subcommand("run", "extract, acquire keywords, score, report");
  std::string va_config, rn_config;
  std::vector<std::string> va_sets, rn_sets;
  validate_cmd->add_option("--config", va_config, "run configuration file")->required();
  validate_cmd->add_option("--set", va_sets, "override: key=value");
  run->add_option("--config", rn_config, "run configuration file")->required();
  run->add_option("--set", rn_sets, "override: key=value");

  CLI11_PARSE(app, argc, argv);

  auto load_config = [](const std::string& path, const std::vector<std::string>& sets) {
    RunConfig cfg = load_run_config(path);
    for (const std::string& kv : sets) {
      size_t eq = kv.find('=');
      if (eq == std::string::npos) throw std::runtime_error("--set expects key=value, got: " + kv);
      apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
  };

  try {
    if (extract->parsed()) return cmd_extract(model_dir, out_path, n_topical);
    if (keywords->parsed()) return cmd_keywords(kw_docs, kw_out, kw_flags, kw_topic_aware, kw_topics);
    if (topics->parsed()) return cmd_topics(tp_docs, tp_out, tp_flags, tp_checkpoint, tp_no_refine);
    if (score->parsed())
      return cmd_score(sc_topical, sc_keywords, sc_embeddings, sc_wordnet, sc_metrics, sc_out);
    if (baseline->parsed()) return cmd_baseline(bl_topics, bl_ref, bl_window, bl_out);
    if (correlate->parsed()) return cmd_correlate(co_reports, co_out, co_csv);
    if (gap->parsed()) return cmd_gap(gp_llm, gp_human, gp_out);
    if (validate_cmd->parsed()) {
      Diagnostics diag = validate_config(load_config(va_config, va_sets));
      for (const std::string& line : diag.info) std::cout << "info: " << line << "\n";
      for (const std::string& line : diag.problems) std::cout << "problem: " << line << "\n";
      std::cout << (diag.ok() ? "configuration OK\n" : "configuration has problems\n");
      return 0;
    }
    if (run->parsed()) {
      PipelineResult result = run_pipeline(load_config(rn_config, rn_sets));
      for (const std::string& entry : result.log) std::cerr << "note: " << entry << "\n";
      std::cout << "report written to " << result.report_path << "\n";
      return 0;
    }
  } catch (const StageError& e) {
    std::cerr << "error " << e.what() << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
