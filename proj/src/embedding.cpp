#include "topiceval/embedding.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "topiceval/textnorm.hpp"

namespace topiceval {

const Eigen::VectorXd* EmbeddingTable::find(const std::string& word) const {
  auto it = vectors_.find(normalize_word(word));
  return it == vectors_.end() ? nullptr : &it->second;
}

bool EmbeddingTable::insert(const std::string& word, Eigen::VectorXd vec) {
  if (vec.size() != dim_) throw std::invalid_argument("embedding length != table dim");
  if (vec.isZero(0.0)) throw std::invalid_argument("all-zero embedding for word: " + word);
  auto [it, inserted] = vectors_.insert_or_assign(normalize_word(word), std::move(vec));
  (void)it;
  return inserted;
}

namespace {

// gzgets-based reader; zlib reads plain text files transparently as well.
class GzLineReader {
 public:
  explicit GzLineReader(const std::string& path) : f_(gzopen(path.c_str(), "rb")) {
    if (f_ == nullptr) throw std::runtime_error("cannot open embedding file: " + path);
  }
  ~GzLineReader() {
    if (f_ != nullptr) gzclose(f_);
  }
  GzLineReader(const GzLineReader&) = delete;
  GzLineReader& operator=(const GzLineReader&) = delete;

  bool getline(std::string& out) {
    out.clear();
    char buf[1 << 16];
    while (true) {
      if (gzgets(f_, buf, sizeof(buf)) == nullptr) return !out.empty();
      out += buf;
      if (!out.empty() && out.back() == '\n') {
        out.pop_back();
        if (!out.empty() && out.back() == '\r') out.pop_back();
        return true;
      }
    }
  }

 private:
  gzFile f_;
};

}  // namespace

EmbeddingTable load_embedding_table(const std::string& path, EmbeddingLoadReport* report) {
  GzLineReader reader(path);
  std::string line;
  EmbeddingTable table;
  int dim = -1;
  size_t lineno = 0;
  while (reader.getline(line)) {
    ++lineno;
    if (line.empty()) continue;
    size_t sp = line.find(' ');
    if (sp == std::string::npos || sp == 0)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'word v1 ... vd'");
    std::string word = line.substr(0, sp);

    std::vector<double> vals;
    const char* p = line.c_str() + sp;
    while (*p != '\0') {
      while (*p == ' ') ++p;
      if (*p == '\0') break;
      char* end = nullptr;
      double v = std::strtod(p, &end);
      if (end == p || (*end != ' ' && *end != '\0'))
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": non-numeric field");
      vals.push_back(v);
      p = end;
    }
    if (vals.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": no values for word " + word);
    if (dim < 0) {
      dim = static_cast<int>(vals.size());
      table = EmbeddingTable(dim);
    } else if (static_cast<int>(vals.size()) != dim) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": dimension " +
                               std::to_string(vals.size()) + " != " + std::to_string(dim));
    }
    Eigen::VectorXd vec = Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<long>(vals.size()));
    bool fresh = table.insert(word, std::move(vec));
    if (!fresh && report != nullptr)
      report->duplicate_warnings.push_back("duplicate embedding for '" + word + "' at line " +
                                           std::to_string(lineno) + " (last wins)");
  }
  if (dim < 0) throw std::runtime_error(path + ": empty embedding file");
  if (report != nullptr) report->entries = table.size();
  return table;
}

double cosine_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                       const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine_distance: length mismatch");
  double na = a.norm();
  double nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw std::invalid_argument("cosine_distance: zero-norm input");
  double d = 1.0 - a.dot(b) / (na * nb);
  return std::clamp(d, 0.0, 2.0);
}

CostMatrix cost_matrix(const std::vector<std::string>& w_words,
                       const std::vector<std::string>& k_words,
                       const EmbeddingTable& table) {
  if (w_words.empty() || k_words.empty())
    throw std::invalid_argument("cost_matrix: empty word set");
  CostMatrix result;
  std::vector<const Eigen::VectorXd*> src, tgt;
  for (size_t i = 0; i < w_words.size(); ++i) {
    if (const Eigen::VectorXd* v = table.find(w_words[i])) {
      src.push_back(v);
      result.source_kept.push_back(w_words[i]);
      result.source_kept_idx.push_back(static_cast<int>(i));
    } else {
      result.source_oov.push_back(w_words[i]);
    }
  }
  for (size_t j = 0; j < k_words.size(); ++j) {
    if (const Eigen::VectorXd* v = table.find(k_words[j])) {
      tgt.push_back(v);
      result.target_kept.push_back(k_words[j]);
      result.target_kept_idx.push_back(static_cast<int>(j));
    } else {
      result.target_oov.push_back(k_words[j]);
    }
  }
  if (src.empty()) throw std::runtime_error("cost_matrix: every source word is out of vocabulary");
  if (tgt.empty()) throw std::runtime_error("cost_matrix: every target word is out of vocabulary");
  result.cost.resize(static_cast<long>(src.size()), static_cast<long>(tgt.size()));
  for (size_t i = 0; i < src.size(); ++i)
    for (size_t j = 0; j < tgt.size(); ++j)
      result.cost(static_cast<long>(i), static_cast<long>(j)) = cosine_distance(*src[i], *tgt[j]);
  return result;
}

}  // namespace topiceval
