#include "topiceval/corpus.hpp"

#include <cmath>
#include <stdexcept>

#include "topiceval/textnorm.hpp"

namespace topiceval {

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  index_.reserve(words_.size());
  for (size_t i = 0; i < words_.size(); ++i) {
    if (trim(words_[i]).empty())
      throw std::invalid_argument("vocabulary word " + std::to_string(i) + " is empty");
    auto [it, inserted] = index_.emplace(words_[i], i);
    (void)it;
    if (!inserted) throw std::invalid_argument("duplicate vocabulary word: " + words_[i]);
  }
}

std::optional<size_t> Vocabulary::index_of(const std::string& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string to_string(KeywordSource s) {
  switch (s) {
    case KeywordSource::llm_plain:
      return "llm_plain";
    case KeywordSource::llm_topic_aware:
      return "llm_topic_aware";
    case KeywordSource::human:
      return "human";
  }
  return "llm_plain";
}

KeywordSource keyword_source_from_string(const std::string& s) {
  if (s == "llm_plain") return KeywordSource::llm_plain;
  if (s == "llm_topic_aware") return KeywordSource::llm_topic_aware;
  if (s == "human") return KeywordSource::human;
  throw std::invalid_argument("unknown keyword source: " + s);
}

KeywordSet make_keyword_set(const std::string& doc_id, const std::vector<std::string>& raw_words,
                            KeywordSource source) {
  KeywordSet set;
  set.doc_id = doc_id;
  set.source = source;
  for (const std::string& raw : raw_words) {
    std::string w = normalize_word(trim(raw));
    if (w.empty()) continue;
    bool seen = false;
    for (const std::string& existing : set.words)
      if (existing == w) {
        seen = true;
        break;
      }
    if (!seen) set.words.push_back(w);
  }
  if (set.words.empty())
    throw std::invalid_argument("keyword set for doc '" + doc_id + "' is empty");
  return set;
}

void recompute_aggregates(ScoreReport& report) {
  report.aggregates.clear();
  std::map<std::string, std::vector<double>> by_metric;
  for (const auto& [doc, metrics] : report.per_doc)
    for (const auto& [name, value] : metrics) by_metric[name].push_back(value);
  for (const auto& [name, values] : by_metric) {
    Aggregate agg;
    agg.count = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    agg.mean = sum / static_cast<double>(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - agg.mean) * (v - agg.mean);
    agg.stddev = std::sqrt(sq / static_cast<double>(values.size()));
    report.aggregates[name] = agg;
  }
}

bool aggregates_consistent(const ScoreReport& report, double tol) {
  ScoreReport copy;
  copy.per_doc = report.per_doc;
  recompute_aggregates(copy);
  if (copy.aggregates.size() != report.aggregates.size()) return false;
  for (const auto& [name, agg] : report.aggregates) {
    auto it = copy.aggregates.find(name);
    if (it == copy.aggregates.end()) return false;
    if (it->second.count != agg.count) return false;
    if (std::abs(it->second.mean - agg.mean) > tol) return false;
    if (std::abs(it->second.stddev - agg.stddev) > tol) return false;
  }
  return true;
}

}  // namespace topiceval
