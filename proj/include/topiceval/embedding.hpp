#pragma once

#include <Eigen/Dense>
#include <string>
#include <unordered_map>
#include <vector>

namespace topiceval {

class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  size_t size() const { return vectors_.size(); }

  // Words are looked up by their normalized form; returns nullptr when absent.
  const Eigen::VectorXd* find(const std::string& word) const;

  // Inserts under the normalized form; rejects all-zero and wrong-length
  // vectors. Returns false when the word replaced an existing entry.
  bool insert(const std::string& word, Eigen::VectorXd vec);

 private:
  int dim_ = 0;
  std::unordered_map<std::string, Eigen::VectorXd> vectors_;
};

struct EmbeddingLoadReport {
  size_t entries = 0;
  std::vector<std::string> duplicate_warnings;
};

// Text format, one entry per line: word followed by `dim` reals. Dim is
// inferred from the first line. Gzip files are decompressed transparently.
EmbeddingTable load_embedding_table(const std::string& path, EmbeddingLoadReport* report = nullptr);

// 1 - cos(a, b), in [0, 2]. Throws on length mismatch or zero-norm input.
double cosine_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                       const Eigen::Ref<const Eigen::VectorXd>& b);

struct CostMatrix {
  Eigen::MatrixXd cost;  // kept-source x kept-target cosine distances
  std::vector<std::string> source_kept;
  std::vector<std::string> target_kept;
  std::vector<int> source_kept_idx;  // positions into the original sequences
  std::vector<int> target_kept_idx;
  std::vector<std::string> source_oov;
  std::vector<std::string> target_oov;
};

// Pairwise cosine distances between the two word lists. Out-of-vocabulary
// words are dropped and reported; throws when either side loses every word.
CostMatrix cost_matrix(const std::vector<std::string>& w_words,
                       const std::vector<std::string>& k_words,
                       const EmbeddingTable& table);

}  // namespace topiceval
