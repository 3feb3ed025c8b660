#pragma once

#include <nlohmann/json.hpp>

#include <functional>
#include <string>
#include <vector>

#include "topiceval/corpus.hpp"

namespace topiceval {

// Provenance block embedded in every pipeline output file.
struct Manifest {
  std::string config_hash;
  std::string template_version;
  std::string tool_version;

  bool empty() const {
    return config_hash.empty() && template_version.empty() && tool_version.empty();
  }
  nlohmann::json to_json() const;
  static Manifest from_json(const nlohmann::json& j);
};

// Reads a JSONL file, invoking fn per record. A record whose only payload is
// a "manifest" object is routed to the manifest slot instead (when given).
void read_jsonl(const std::string& path,
                const std::function<void(const nlohmann::json&, size_t lineno)>& fn,
                Manifest* manifest = nullptr);

// Model artifact directory: vocab.txt, phi.csv, theta.csv, doc_ids.txt.
// Rows within 1e-4 of unit sum are renormalized; further off is an error.
ModelArtifact load_model_artifact(const std::string& dir);

// Documents JSONL: {"id": str, "text": str} per line.
std::vector<Document> load_documents(const std::string& path);

// Keywords JSONL: {"doc_id": str, "words": [str], "source": str} per line.
std::vector<KeywordSet> load_keywords(const std::string& path);
void write_keywords(const std::vector<KeywordSet>& sets, const std::string& path,
                    const Manifest* manifest = nullptr);

// Report JSON with "per_doc" and "aggregates" objects; doc ids and metric
// names serialize sorted so equal reports produce identical bytes.
void write_report(const ScoreReport& report, const std::string& path,
                  const Manifest* manifest = nullptr);
ScoreReport load_report(const std::string& path, Manifest* manifest = nullptr);

}  // namespace topiceval
