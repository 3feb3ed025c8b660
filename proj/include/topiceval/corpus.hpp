#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace topiceval {

class Vocabulary {
 public:
  Vocabulary() = default;
  // Validates: words non-empty after trimming, no duplicates.
  explicit Vocabulary(std::vector<std::string> words);

  size_t size() const { return words_.size(); }
  const std::string& word(size_t i) const { return words_.at(i); }
  const std::vector<std::string>& words() const { return words_; }
  std::optional<size_t> index_of(const std::string& w) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, size_t> index_;
};

struct Document {
  std::string id;
  std::string text;
  std::map<size_t, long> bow;  // optional sparse counts, vocab index -> count
};

// Exported topic model: phi rows and theta rows live on the probability
// simplex (loader renormalizes within tolerance).
struct ModelArtifact {
  Vocabulary vocabulary;
  Eigen::MatrixXd phi;    // K x V
  Eigen::MatrixXd theta;  // D x K
  std::vector<std::string> doc_ids;  // length D, distinct

  long num_topics() const { return phi.rows(); }
  long num_docs() const { return theta.rows(); }
};

enum class KeywordSource { llm_plain, llm_topic_aware, human };
std::string to_string(KeywordSource s);
KeywordSource keyword_source_from_string(const std::string& s);

struct KeywordSet {
  std::string doc_id;
  std::vector<std::string> words;  // normalized, deduplicated, first-occurrence order
  KeywordSource source = KeywordSource::llm_plain;
};

// Normalizes (lowercase + NFC), trims, dedupes preserving first occurrence.
// Throws when nothing remains.
KeywordSet make_keyword_set(const std::string& doc_id, const std::vector<std::string>& raw_words,
                            KeywordSource source);

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation
  size_t count = 0;
};

struct ScoreReport {
  // doc id -> metric name -> value
  std::map<std::string, std::map<std::string, double>> per_doc;
  std::map<std::string, Aggregate> aggregates;
  std::vector<std::string> skipped;  // doc ids present on only one input side
};

// Rebuilds `aggregates` from `per_doc`.
void recompute_aggregates(ScoreReport& report);

// True when stored aggregates match a recomputation within `tol`.
bool aggregates_consistent(const ScoreReport& report, double tol = 1e-9);

}  // namespace topiceval
