#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topiceval/corpus.hpp"

namespace topiceval {

// Bump on any change to a prompt template; recorded in every output file.
inline constexpr const char* kPromptTemplateVersion = "tpl-v1";

struct LlmConfig {
  std::string endpoint;  // OpenAI-compatible chat-completions URL
  std::string model_name;
  int max_tokens = 300;
  double temperature = 0.0;  // greedy decoding
  int num_keywords = 5;
  int retries = 3;
  int parallelism = 1;
  size_t max_doc_chars = 24000;  // documents beyond this are cut at a word boundary
  std::string api_key_env = "TOPICEVAL_API_KEY";
  std::string transcript_path;  // when set, responses replay from this file
};

void validate(const LlmConfig& cfg);

// Collection-level topics with assignment frequencies; labels are distinct
// case-insensitively and appear in first-seen order.
struct TopicList {
  std::vector<std::pair<std::string, long>> topics;

  bool empty() const { return topics.empty(); }
  // Case-insensitive label lookup; returns -1 when absent.
  long find(const std::string& label) const;
  void add(const std::string& label);  // insert new or bump frequency
};

// Prompt builders. Byte-stable given identical inputs; the document payload
// is fenced so its content cannot be read as instructions.
std::string build_keyword_prompt(const Document& doc, int n);
std::string build_topic_update_prompt(const Document& doc, const TopicList& topics);
std::string build_topic_selection_prompt(const Document& doc, const TopicList& topics);
std::string build_topic_keyword_prompt(const Document& doc, const std::string& topic, int n);

// Transcript key: hash of the decoding-relevant request fields and prompt.
std::string request_hash(const LlmConfig& cfg, const std::string& prompt);

// Splits an LLM reply into keyword candidates: strips list numbering,
// bullets, surrounding quotes and a leading "keywords:" label; lowercases;
// dedupes preserving order. Throws when no candidate list is found.
std::vector<std::string> parse_keyword_response(const std::string& response, int max_keywords);

struct RunLog {
  std::vector<std::string> entries;
  void note(std::string entry) { entries.push_back(std::move(entry)); }
};

class LlmClient {
 public:
  explicit LlmClient(LlmConfig cfg);

  // One chat completion for `prompt`. Transcript mode looks the request up
  // by hash; network mode retries transport failures with backoff.
  std::string complete(const std::string& prompt) const;

  const LlmConfig& config() const { return cfg_; }

 private:
  std::string post_once(const std::string& prompt, std::string& error) const;

  LlmConfig cfg_;
  bool use_transcript_ = false;
  std::unordered_map<std::string, std::string> transcript_;
};

// Appends one replayable (request, response) record.
void append_transcript(const std::string& path, const LlmConfig& cfg, const std::string& prompt,
                       const std::string& response);

KeywordSet query_keywords(const LlmClient& client, const Document& doc, RunLog* log = nullptr);

struct TopicGenOptions {
  std::string checkpoint_path;          // enables resume when non-empty
  bool refine = true;                   // merge + prune after the scan
  double min_frequency_fraction = 0.01; // prune below max(2, fraction * D)
};

// Scans documents in order, asking the model to reuse or propose topic
// labels; frequencies count per-document assignments.
TopicList generate_collection_topics(const LlmClient& client, const std::vector<Document>& docs,
                                     const TopicGenOptions& opts = {}, RunLog* log = nullptr);

// Merge labels equal after stemming, then drop low-frequency topics.
TopicList refine_topic_list(const TopicList& raw, size_t num_docs,
                            double min_frequency_fraction = 0.01);

// Two-stage keyword suggestion: select relevant topics, then gather indexing
// words per selected topic. Falls back to plain keywords (and logs) when the
// selection stage comes back empty.
KeywordSet query_topic_aware_keywords(const LlmClient& client, const Document& doc,
                                      const TopicList& topics, RunLog* log = nullptr);

// Corpus-scale generation with up to cfg.parallelism workers; results and
// log entries are emitted in document order regardless of scheduling. With
// `failures` given, per-document errors are reported there (the failing
// entries stay empty) instead of aborting the batch.
std::vector<KeywordSet> generate_keywords(const LlmClient& client, const std::vector<Document>& docs,
                                          bool topic_aware = false, const TopicList* topics = nullptr,
                                          RunLog* log = nullptr,
                                          std::vector<std::pair<size_t, std::string>>* failures = nullptr);

}  // namespace topiceval
