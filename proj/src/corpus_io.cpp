#include "topiceval/corpus_io.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "topiceval/textnorm.hpp"

namespace topiceval {

using nlohmann::json;

nlohmann::json Manifest::to_json() const {
  return json{{"config_hash", config_hash},
              {"template_version", template_version},
              {"tool_version", tool_version}};
}

Manifest Manifest::from_json(const json& j) {
  Manifest m;
  m.config_hash = j.value("config_hash", "");
  m.template_version = j.value("template_version", "");
  m.tool_version = j.value("tool_version", "");
  return m;
}

void read_jsonl(const std::string& path,
                const std::function<void(const json&, size_t)>& fn, Manifest* manifest) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    if (j.is_object() && j.contains("manifest")) {
      if (manifest != nullptr) *manifest = Manifest::from_json(j.at("manifest"));
      continue;
    }
    fn(j, lineno);
  }
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

Eigen::MatrixXd parse_csv_matrix(const std::string& path) {
  std::vector<std::vector<double>> rows;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::string t = trim(cell);
      char* end = nullptr;
      double v = std::strtod(t.c_str(), &end);
      if (t.empty() || end != t.c_str() + t.size())
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": non-numeric cell '" + cell + "'");
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path + ": empty matrix");
  Eigen::MatrixXd m(static_cast<long>(rows.size()), static_cast<long>(rows.front().size()));
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return m;
}

// Rows must be nonnegative and sum to 1 within 1e-4; renormalized in place.
void require_simplex_rows(Eigen::MatrixXd& m, const std::string& what) {
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j)
      if (m(i, j) < 0.0)
        throw std::runtime_error(what + " row " + std::to_string(i) + " has a negative entry");
    double sum = m.row(i).sum();
    if (std::abs(sum - 1.0) > 1e-4)
      throw std::runtime_error(what + " row " + std::to_string(i) + ": row-sum violation (sum=" +
                               std::to_string(sum) + ")");
    m.row(i) /= sum;
  }
}

void require_string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw std::runtime_error(where + ": missing string field '" + key + "'");
}

}  // namespace

ModelArtifact load_model_artifact(const std::string& dir) {
  ModelArtifact art;
  std::vector<std::string> vocab_lines = read_lines(dir + "/vocab.txt");
  while (!vocab_lines.empty() && trim(vocab_lines.back()).empty()) vocab_lines.pop_back();
  for (std::string& w : vocab_lines) w = trim(w);
  art.vocabulary = Vocabulary(std::move(vocab_lines));

  art.phi = parse_csv_matrix(dir + "/phi.csv");
  if (static_cast<size_t>(art.phi.cols()) != art.vocabulary.size())
    throw std::runtime_error("phi has " + std::to_string(art.phi.cols()) +
                             " columns but vocabulary has " + std::to_string(art.vocabulary.size()) +
                             " words");
  require_simplex_rows(art.phi, "phi");

  art.theta = parse_csv_matrix(dir + "/theta.csv");
  if (art.theta.cols() != art.phi.rows())
    throw std::runtime_error("theta has " + std::to_string(art.theta.cols()) +
                             " columns but phi has " + std::to_string(art.phi.rows()) + " topics");
  require_simplex_rows(art.theta, "theta");

  std::vector<std::string> id_lines = read_lines(dir + "/doc_ids.txt");
  while (!id_lines.empty() && trim(id_lines.back()).empty()) id_lines.pop_back();
  std::set<std::string> seen;
  for (std::string& id : id_lines) {
    id = trim(id);
    if (id.empty()) throw std::runtime_error("doc_ids.txt contains an empty id");
    if (!seen.insert(id).second) throw std::runtime_error("duplicate doc id: " + id);
  }
  if (static_cast<long>(id_lines.size()) != art.theta.rows())
    throw std::runtime_error("doc_ids.txt has " + std::to_string(id_lines.size()) +
                             " ids but theta has " + std::to_string(art.theta.rows()) + " rows");
  art.doc_ids = std::move(id_lines);
  return art;
}

std::vector<Document> load_documents(const std::string& path) {
  std::vector<Document> docs;
  std::set<std::string> seen;
  read_jsonl(path, [&](const json& j, size_t lineno) {
    std::string where = path + ":" + std::to_string(lineno);
    require_string(j, "id", where);
    require_string(j, "text", where);
    Document d;
    d.id = j.at("id").get<std::string>();
    d.text = j.at("text").get<std::string>();
    if (d.id.empty()) throw std::runtime_error(where + ": empty document id");
    if (!seen.insert(d.id).second) throw std::runtime_error(where + ": duplicate document id '" + d.id + "'");
    docs.push_back(std::move(d));
  });
  return docs;
}

std::vector<KeywordSet> load_keywords(const std::string& path) {
  std::vector<KeywordSet> sets;
  std::set<std::string> seen;
  read_jsonl(path, [&](const json& j, size_t lineno) {
    std::string where = path + ":" + std::to_string(lineno);
    require_string(j, "doc_id", where);
    if (!j.contains("words") || !j.at("words").is_array())
      throw std::runtime_error(where + ": missing 'words' array");
    std::string doc_id = j.at("doc_id").get<std::string>();
    if (!seen.insert(doc_id).second)
      throw std::runtime_error(where + ": duplicate doc_id '" + doc_id + "'");
    std::vector<std::string> raw;
    for (const json& w : j.at("words")) {
      if (!w.is_string()) throw std::runtime_error(where + ": non-string word");
      raw.push_back(w.get<std::string>());
    }
    KeywordSource source = KeywordSource::llm_plain;
    if (j.contains("source")) source = keyword_source_from_string(j.at("source").get<std::string>());
    try {
      sets.push_back(make_keyword_set(doc_id, raw, source));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(where + ": " + e.what());
    }
  });
  return sets;
}

void write_keywords(const std::vector<KeywordSet>& sets, const std::string& path,
                    const Manifest* manifest) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  if (manifest != nullptr && !manifest->empty())
    out << json{{"manifest", manifest->to_json()}}.dump() << "\n";
  for (const KeywordSet& s : sets) {
    json j{{"doc_id", s.doc_id}, {"source", to_string(s.source)}, {"words", s.words}};
    out << j.dump() << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

void require_known_metrics_nonnegative(const ScoreReport& report) {
  static const std::set<std::string> kNonNegative = {"overlap", "synset", "oa", "ot"};
  for (const auto& [doc, metrics] : report.per_doc)
    for (const auto& [name, value] : metrics)
      if (kNonNegative.count(name) != 0 && value < 0.0)
        throw std::invalid_argument("metric '" + name + "' negative for doc '" + doc + "'");
}

}  // namespace

void write_report(const ScoreReport& report, const std::string& path, const Manifest* manifest) {
  if (!aggregates_consistent(report))
    throw std::invalid_argument("report aggregates inconsistent with per_doc values");
  require_known_metrics_nonnegative(report);

  json aggregates = json::object();
  for (const auto& [name, agg] : report.aggregates)
    aggregates[name] = json{{"count", agg.count}, {"mean", agg.mean}, {"std", agg.stddev}};
  json per_doc = json::object();
  for (const auto& [doc, metrics] : report.per_doc) {
    json m = json::object();
    for (const auto& [name, value] : metrics) m[name] = value;
    per_doc[doc] = m;
  }
  std::vector<std::string> skipped = report.skipped;
  std::sort(skipped.begin(), skipped.end());
  skipped.erase(std::unique(skipped.begin(), skipped.end()), skipped.end());

  json root{{"aggregates", aggregates}, {"per_doc", per_doc}, {"skipped", skipped}};
  if (manifest != nullptr && !manifest->empty()) root["manifest"] = manifest->to_json();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  out << root.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

ScoreReport load_report(const std::string& path, Manifest* manifest) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  ScoreReport report;
  for (const auto& [doc, metrics] : root.value("per_doc", json::object()).items())
    for (const auto& [name, value] : metrics.items())
      report.per_doc[doc][name] = value.get<double>();
  for (const auto& [name, agg] : root.value("aggregates", json::object()).items()) {
    Aggregate a;
    a.count = agg.at("count").get<size_t>();
    a.mean = agg.at("mean").get<double>();
    a.stddev = agg.at("std").get<double>();
    report.aggregates[name] = a;
  }
  for (const json& id : root.value("skipped", json::array()))
    report.skipped.push_back(id.get<std::string>());
  if (manifest != nullptr && root.contains("manifest"))
    *manifest = Manifest::from_json(root.at("manifest"));
  if (!aggregates_consistent(report))
    throw std::runtime_error(path + ": aggregates inconsistent with per_doc values");
  require_known_metrics_nonnegative(report);
  return report;
}

}  // namespace topiceval
