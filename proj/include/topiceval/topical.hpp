#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "topiceval/corpus.hpp"
#include "topiceval/corpus_io.hpp"

namespace topiceval {

// Topical words of one document: distinct words in non-increasing weight
// order. When `normalized`, weights sum to 1 within 1e-9.
struct WeightedWordSet {
  std::vector<std::string> words;
  Eigen::VectorXd weights;
  bool normalized = false;
};

// Throws std::invalid_argument when any WeightedWordSet invariant is broken.
void validate(const WeightedWordSet& set);

// Document-word distribution: mixes topic-word rows by the document's topic
// proportions (result_v = sum_k theta_k * phi_kv), renormalized.
Eigen::VectorXd compose_word_distribution(const Eigen::Ref<const Eigen::VectorXd>& theta_row,
                                          const Eigen::Ref<const Eigen::MatrixXd>& phi);

// The n highest-mass words; ties broken by ascending vocabulary index.
// Weights are renormalized to sum 1.
WeightedWordSet top_words(const Eigen::Ref<const Eigen::VectorXd>& w, const Vocabulary& vocab, int n);

std::map<std::string, WeightedWordSet> extract_topical_words(const ModelArtifact& artifact, int n);

// JSONL, one record per document: {"doc_id": ..., "words": [...], "weights": [...]}.
void write_topical_words(const std::map<std::string, WeightedWordSet>& sets, const std::string& path,
                         const Manifest* manifest = nullptr);
std::map<std::string, WeightedWordSet> load_topical_words(const std::string& path);

}  // namespace topiceval
