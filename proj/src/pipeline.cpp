#include "topiceval/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "topiceval/corpus_io.hpp"
#include "topiceval/embedding.hpp"
#include "topiceval/llm.hpp"
#include "topiceval/topical.hpp"
#include "topiceval/wordnet.hpp"

namespace topiceval {

namespace fs = std::filesystem;

namespace {

// Stage exit codes; keep in sync with the README.
constexpr int kConfigError = 2;
constexpr int kArtifactError = 3;
constexpr int kExtractError = 4;
constexpr int kKeywordsError = 5;
constexpr int kScoreError = 6;
constexpr int kReportError = 7;

TopicList load_topic_list(const std::string& path) {
  TopicList topics;
  read_jsonl(path, [&](const nlohmann::json& j, size_t lineno) {
    if (!j.contains("label"))
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": topic record needs 'label'");
    topics.topics.emplace_back(j.at("label").get<std::string>(), j.value("frequency", 1L));
  });
  if (topics.empty()) throw std::runtime_error(path + ": empty topic list");
  return topics;
}

std::vector<KeywordSet> acquire_keywords(const RunConfig& cfg, const Manifest& manifest,
                                         PipelineResult& result) {
  if (!cfg.keywords_path.empty()) {
    result.keywords_path = cfg.keywords_path;
    return load_keywords(cfg.keywords_path);
  }
  if (cfg.documents_path.empty())
    throw std::runtime_error("no keywords file given and no documents to query the LLM with");

  std::vector<Document> docs = load_documents(cfg.documents_path);
  LlmClient client(cfg.llm);
  TopicList topics;
  if (cfg.topic_aware) {
    if (cfg.topics_path.empty())
      throw std::runtime_error("topic-aware mode needs a collection topics file (topics=...)");
    topics = load_topic_list(cfg.topics_path);
  }

  // Resume from any previous partial run, query only what is missing, and
  // checkpoint successes before failing.
  std::string checkpoint = (fs::path(cfg.output_dir) / "keywords.checkpoint.jsonl").string();
  std::map<std::string, KeywordSet> done;
  if (fs::exists(checkpoint)) {
    for (KeywordSet& s : load_keywords(checkpoint)) done.emplace(s.doc_id, std::move(s));
    if (!done.empty())
      result.log.push_back("resuming keywords stage: " + std::to_string(done.size()) +
                           " documents already checkpointed");
  }
  std::vector<Document> missing;
  for (const Document& d : docs)
    if (done.count(d.id) == 0) missing.push_back(d);

  RunLog log;
  std::vector<std::pair<size_t, std::string>> failures;
  std::vector<KeywordSet> fresh = generate_keywords(client, missing, cfg.topic_aware,
                                                    cfg.topic_aware ? &topics : nullptr, &log, &failures);
  for (std::string& entry : log.entries) result.log.push_back(std::move(entry));

  std::set<size_t> failed;
  for (const auto& [idx, msg] : failures) failed.insert(idx);
  for (size_t i = 0; i < fresh.size(); ++i)
    if (failed.count(i) == 0) done.emplace(fresh[i].doc_id, std::move(fresh[i]));

  std::vector<KeywordSet> ordered;
  for (const Document& d : docs) {
    auto it = done.find(d.id);
    if (it != done.end()) ordered.push_back(it->second);
  }
  if (!failures.empty()) {
    write_keywords(ordered, checkpoint, &manifest);
    throw std::runtime_error(std::to_string(failures.size()) + " document(s) failed (first: " +
                             failures.front().second + "); progress checkpointed at " + checkpoint);
  }
  if (fs::exists(checkpoint)) fs::remove(checkpoint);
  result.keywords_path = (fs::path(cfg.output_dir) / "keywords.jsonl").string();
  write_keywords(ordered, result.keywords_path, &manifest);
  return ordered;
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg) {
  PipelineResult result;
  Manifest manifest = make_manifest(cfg);

  if (cfg.model_dir.empty()) throw StageError("config", kConfigError, "model_dir is required");
  if (!cfg.metrics.any()) throw StageError("config", kConfigError, "no metric selected");
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw StageError("config", kConfigError, "cannot create output dir: " + ec.message());

  ModelArtifact artifact;
  try {
    artifact = load_model_artifact(cfg.model_dir);
  } catch (const std::exception& e) {
    throw StageError("artifact", kArtifactError, e.what());
  }

  std::map<std::string, WeightedWordSet> topical;
  try {
    topical = extract_topical_words(artifact, cfg.n_topical);
    result.topical_path = (fs::path(cfg.output_dir) / "topical_words.jsonl").string();
    write_topical_words(topical, result.topical_path, &manifest);
  } catch (const std::exception& e) {
    throw StageError("extract", kExtractError, e.what());
  }

  std::map<std::string, KeywordSet> keywords;
  try {
    for (KeywordSet& s : acquire_keywords(cfg, manifest, result)) keywords.emplace(s.doc_id, std::move(s));
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError("keywords", kKeywordsError, e.what());
  }

  try {
    ScoreResources resources;
    SynsetIndex synsets;
    EmbeddingTable embeddings;
    if (cfg.metrics.synset) {
      if (cfg.wordnet_dir.empty()) throw std::runtime_error("synset metric needs wordnet=DIR");
      synsets = load_synset_index(cfg.wordnet_dir);
      resources.synsets = &synsets;
    }
    if (cfg.metrics.oa || cfg.metrics.ot) {
      if (cfg.embeddings_path.empty()) throw std::runtime_error("oa/ot metrics need embeddings=FILE");
      embeddings = load_embedding_table(cfg.embeddings_path);
      resources.embeddings = &embeddings;
    }
    result.report = score_all(topical, keywords, resources, cfg.metrics);
  } catch (const std::exception& e) {
    throw StageError("score", kScoreError, e.what());
  }

  try {
    result.report_path = (fs::path(cfg.output_dir) / "report.json").string();
    write_report(result.report, result.report_path, &manifest);
  } catch (const std::exception& e) {
    throw StageError("report", kReportError, e.what());
  }
  return result;
}

Diagnostics validate_config(const RunConfig& cfg) {
  Diagnostics diag;
  auto check_file = [&diag](const std::string& path, const std::string& what) {
    if (path.empty()) return false;
    if (!fs::exists(path)) {
      diag.problems.push_back(what + " not found: " + path);
      return false;
    }
    return true;
  };

  ModelArtifact artifact;
  bool have_artifact = false;
  if (cfg.model_dir.empty()) {
    diag.problems.push_back("model_dir is not set");
  } else if (check_file(cfg.model_dir, "model artifact directory")) {
    try {
      artifact = load_model_artifact(cfg.model_dir);
      have_artifact = true;
      diag.info.push_back("model artifact: " + std::to_string(artifact.num_topics()) + " topics, " +
                          std::to_string(artifact.vocabulary.size()) + " words, " +
                          std::to_string(artifact.num_docs()) + " documents");
    } catch (const std::exception& e) {
      diag.problems.push_back(std::string("model artifact: ") + e.what());
    }
  }

  check_file(cfg.documents_path, "documents file");
  check_file(cfg.keywords_path, "keywords file");
  check_file(cfg.topics_path, "topics file");
  check_file(cfg.ref_corpus_path, "reference corpus");

  EmbeddingTable embeddings;
  bool have_embeddings = false;
  if (check_file(cfg.embeddings_path, "embedding file")) {
    try {
      embeddings = load_embedding_table(cfg.embeddings_path);
      have_embeddings = true;
      diag.info.push_back("embeddings: " + std::to_string(embeddings.size()) + " entries, dim " +
                          std::to_string(embeddings.dim()));
    } catch (const std::exception& e) {
      diag.problems.push_back(std::string("embedding file: ") + e.what());
    }
  }

  SynsetIndex synsets;
  bool have_synsets = false;
  if (check_file(cfg.wordnet_dir, "WordNet directory")) {
    try {
      synsets = load_synset_index(cfg.wordnet_dir);
      have_synsets = true;
      diag.info.push_back("WordNet index: " + std::to_string(synsets.size()) + " lemmas");
    } catch (const std::exception& e) {
      diag.problems.push_back(std::string("WordNet index: ") + e.what());
    }
  }

  if (have_artifact && (have_embeddings || have_synsets)) {
    std::map<std::string, WeightedWordSet> topical =
        extract_topical_words(artifact, std::min<int>(cfg.n_topical, static_cast<int>(artifact.vocabulary.size())));
    size_t total = 0, in_embeddings = 0, in_wordnet = 0;
    for (const auto& [doc, set] : topical) {
      for (const std::string& w : set.words) {
        ++total;
        if (have_embeddings && embeddings.find(w) != nullptr) ++in_embeddings;
        if (have_synsets && !synsets.lookup(w).empty()) ++in_wordnet;
      }
    }
    if (total > 0) {
      if (have_embeddings) {
        double frac = static_cast<double>(in_embeddings) / static_cast<double>(total);
        diag.info.push_back("embedding coverage of topical words: " +
                            std::to_string(100.0 * frac) + "%");
        if (in_embeddings == 0)
          diag.problems.push_back("embedding coverage is 0%: oa/ot scoring will fail");
      }
      if (have_synsets)
        diag.info.push_back("WordNet coverage of topical words: " +
                            std::to_string(100.0 * static_cast<double>(in_wordnet) /
                                           static_cast<double>(total)) + "%");
    }
  }
  return diag;
}

}  // namespace topiceval
