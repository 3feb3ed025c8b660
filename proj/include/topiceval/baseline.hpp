#pragma once

#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "topiceval/corpus.hpp"

namespace topiceval {

// Fraction of unique words among all topics' top-25 words, in [1/K, 1].
double topic_diversity(const std::vector<std::vector<std::string>>& topics);

// Boolean sliding-window co-occurrence counts over a reference corpus.
// Convention: a document of L tokens contributes max(1, L-W+1) windows (one
// whole-document window when L <= W; empty documents contribute none); a
// word or pair counts at most once per window.
struct CooccurrenceIndex {
  int window = 10;
  long total_windows = 0;
  std::unordered_map<std::string, long> word_windows;
  std::map<std::pair<std::string, std::string>, long> pair_windows;  // key: (min, max)

  long count(const std::string& w) const;
  long count(const std::string& a, const std::string& b) const;
};

CooccurrenceIndex build_cooccurrence(const std::vector<Document>& ref_corpus, int window = 10);

struct NpmiResult {
  double value = 0.0;  // mean over evaluated pairs
  std::vector<std::pair<std::string, std::string>> skipped_pairs;  // zero-marginal pairs
};

// Mean pairwise NPMI of the 10 words; zero joint counts get `epsilon` added;
// each pair value is clamped to [-1, 1].
NpmiResult npmi_topic(const std::vector<std::string>& top10, const CooccurrenceIndex& index,
                      double epsilon = 1e-12);

// Mean of the ceil(K/2) largest per-topic scores.
double npmi_aggregate(const std::vector<double>& topic_scores);

// Sample Pearson correlation; throws on constant series.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// |s_llm - s_human| / s_human; requires a positive denominator.
double eval_gap(double s_llm, double s_human);

}  // namespace topiceval
