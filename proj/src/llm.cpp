#include "topiceval/llm.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "topiceval/corpus_io.hpp"
#include "topiceval/stemmer.hpp"
#include "topiceval/textnorm.hpp"

namespace topiceval {

using nlohmann::json;

void validate(const LlmConfig& cfg) {
  if (cfg.max_tokens < 1) throw std::invalid_argument("llm: max_tokens must be >= 1");
  if (cfg.num_keywords < 1) throw std::invalid_argument("llm: num_keywords must be >= 1");
  if (cfg.temperature < 0.0) throw std::invalid_argument("llm: temperature must be >= 0");
  if (cfg.retries < 0) throw std::invalid_argument("llm: retries must be >= 0");
  if (cfg.parallelism < 1) throw std::invalid_argument("llm: parallelism must be >= 1");
}

long TopicList::find(const std::string& label) const {
  std::string needle = normalize_word(label);
  for (size_t i = 0; i < topics.size(); ++i)
    if (normalize_word(topics[i].first) == needle) return static_cast<long>(i);
  return -1;
}

void TopicList::add(const std::string& label) {
  long i = find(label);
  if (i >= 0)
    ++topics[static_cast<size_t>(i)].second;
  else
    topics.emplace_back(label, 1);
}

namespace {

// The fence must stay unambiguous, so any ">>>" inside the payload is broken up.
std::string fence(const std::string& text) {
  std::string safe = text;
  size_t pos = 0;
  while ((pos = safe.find(">>>", pos)) != std::string::npos) {
    safe.replace(pos, 3, "> > >");
    pos += 5;
  }
  return "<<<\n" + safe + "\n>>>";
}

std::string truncate_at_word_boundary(const std::string& text, size_t max_chars, bool* truncated) {
  *truncated = false;
  if (text.size() <= max_chars) return text;
  size_t cut = max_chars;
  while (cut > 0 && !std::isspace(static_cast<unsigned char>(text[cut]))) --cut;
  if (cut == 0) cut = max_chars;
  *truncated = true;
  return text.substr(0, cut);
}

std::string prepared_text(const LlmConfig& cfg, const Document& doc, RunLog* log) {
  bool truncated = false;
  std::string text = truncate_at_word_boundary(doc.text, cfg.max_doc_chars, &truncated);
  if (truncated && log != nullptr)
    log->note("doc " + doc.id + ": text truncated to " + std::to_string(text.size()) +
              " of " + std::to_string(doc.text.size()) + " chars");
  return text;
}

std::string label_listing(const TopicList& topics) {
  if (topics.empty()) return "(none yet)";
  std::string out;
  for (size_t i = 0; i < topics.topics.size(); ++i) {
    if (i > 0) out += ", ";
    out += topics.topics[i].first;
  }
  return out;
}

}  // namespace

std::string build_keyword_prompt(const Document& doc, int n) {
  return "You are an expert document indexer. Suggest exactly " + std::to_string(n) +
         " keywords that best summarize the document below. Reply with the keywords only, "
         "comma-separated, most relevant first. Keywords may be short phrases.\n\nDocument:\n" +
         fence(doc.text) + "\n";
}

std::string build_topic_update_prompt(const Document& doc, const TopicList& topics) {
  return "You are building a list of high-level topics for a document collection. Current "
         "topics: " + label_listing(topics) +
         ".\nRead the document below and reply with comma-separated topic labels that describe "
         "it. Reuse current topic labels whenever they fit; propose a new short label only when "
         "none fits.\n\nDocument:\n" + fence(doc.text) + "\n";
}

std::string build_topic_selection_prompt(const Document& doc, const TopicList& topics) {
  return "Collection topics: " + label_listing(topics) +
         ".\nSelect the topics relevant to the document below. Reply with the matching topic "
         "labels only, comma-separated. If none apply, reply with \"none\".\n\nDocument:\n" +
         fence(doc.text) + "\n";
}

std::string build_topic_keyword_prompt(const Document& doc, const std::string& topic, int n) {
  return "The document below relates to the topic \"" + topic + "\". Suggest exactly " +
         std::to_string(n) +
         " indexing words for the document under this topic. Reply with the words only, "
         "comma-separated.\n\nDocument:\n" + fence(doc.text) + "\n";
}

std::string request_hash(const LlmConfig& cfg, const std::string& prompt) {
  char head[64];
  std::snprintf(head, sizeof(head), "%.6g|%d|", cfg.temperature, cfg.max_tokens);
  std::string canonical = cfg.model_name;
  canonical += '\x1f';
  canonical += head;
  canonical += prompt;
  // FNV-1a 64
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", h);
  return std::string(buf);
}

std::vector<std::string> parse_keyword_response(const std::string& response, int max_keywords) {
  if (max_keywords < 1) throw std::invalid_argument("parse_keyword_response: max_keywords < 1");
  std::vector<std::string> candidates;
  std::istringstream lines(response);
  std::string line;
  while (std::getline(lines, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    // leading "keywords:" label
    std::string lower = normalize_word(t);
    for (const char* label : {"keywords:", "keyword:"}) {
      if (lower.rfind(label, 0) == 0) {
        t = trim(t.substr(std::strlen(label)));
        break;
      }
    }
    // list numbering and bullets
    size_t p = 0;
    if (p < t.size() && (t[p] == '-' || t[p] == '*')) {
      ++p;
    } else if (t.compare(p, 3, "\xe2\x80\xa2") == 0) {  // bullet
      p += 3;
    } else {
      size_t d = p;
      while (d < t.size() && d < p + 3 && std::isdigit(static_cast<unsigned char>(t[d]))) ++d;
      if (d > p && d < t.size() && (t[d] == '.' || t[d] == ')' || t[d] == ']' || t[d] == ':')) p = d + 1;
    }
    t = trim(t.substr(p));
    // split fields on comma / semicolon
    std::string field;
    std::stringstream fs(t);
    while (std::getline(fs, field, ',')) {
      std::stringstream gs(field);
      std::string piece;
      while (std::getline(gs, piece, ';')) {
        std::string w = trim(piece);
        // surrounding quotes
        auto strip_pair = [&w](const std::string& open, const std::string& close) {
          if (w.size() >= open.size() + close.size() && w.compare(0, open.size(), open) == 0 &&
              w.compare(w.size() - close.size(), close.size(), close) == 0)
            w = w.substr(open.size(), w.size() - open.size() - close.size());
        };
        strip_pair("\"", "\"");
        strip_pair("'", "'");
        strip_pair("`", "`");
        strip_pair("\xe2\x80\x9c", "\xe2\x80\x9d");  // curly double quotes
        strip_pair("\xe2\x80\x98", "\xe2\x80\x99");  // curly single quotes
        while (!w.empty() && w.back() == '.') w.pop_back();
        w = normalize_word(trim(w));
        if (!w.empty()) candidates.push_back(w);
      }
    }
  }

  if (candidates.empty())
    throw std::runtime_error("unparseable LLM response: no candidate list found");
  bool separated = response.find(',') != std::string::npos || response.find('\n') != std::string::npos;
  if (!separated && candidates.size() == 1) {
    size_t words = tokenize(candidates.front()).size();
    if (words >= 4)
      throw std::runtime_error("unparseable LLM response: no comma- or newline-separated list found");
  }

  std::vector<std::string> out;
  for (const std::string& c : candidates) {
    bool seen = false;
    for (const std::string& existing : out)
      if (existing == c) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(c);
    if (static_cast<int>(out.size()) == max_keywords) break;
  }
  return out;
}

LlmClient::LlmClient(LlmConfig cfg) : cfg_(std::move(cfg)) {
  validate(cfg_);
  if (!cfg_.transcript_path.empty()) {
    use_transcript_ = true;
    read_jsonl(cfg_.transcript_path, [&](const json& j, size_t lineno) {
      if (!j.contains("request_hash") || !j.contains("response"))
        throw std::runtime_error(cfg_.transcript_path + ":" + std::to_string(lineno) +
                                 ": transcript record needs request_hash and response");
      transcript_[j.at("request_hash").get<std::string>()] = j.at("response").get<std::string>();
    });
  }
}

std::string LlmClient::post_once(const std::string& prompt, std::string& error) const {
  size_t scheme_end = cfg_.endpoint.find("://");
  if (scheme_end == std::string::npos) {
    error = "endpoint must include a scheme: " + cfg_.endpoint;
    return {};
  }
  size_t path_start = cfg_.endpoint.find('/', scheme_end + 3);
  std::string origin = path_start == std::string::npos ? cfg_.endpoint : cfg_.endpoint.substr(0, path_start);
  std::string path = path_start == std::string::npos ? "/" : cfg_.endpoint.substr(path_start);

  httplib::Client client(origin);
  client.set_connection_timeout(30);
  client.set_read_timeout(300);
  httplib::Headers headers;
  if (const char* key = std::getenv(cfg_.api_key_env.c_str()); key != nullptr && *key != '\0')
    headers.emplace("Authorization", std::string("Bearer ") + key);

  json body{{"model", cfg_.model_name},
            {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
            {"temperature", cfg_.temperature},
            {"max_tokens", cfg_.max_tokens}};
  httplib::Result res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    error = "transport error: " + httplib::to_string(res.error());
    return {};
  }
  if (res->status == 429 || res->status >= 500) {
    error = "HTTP " + std::to_string(res->status);
    return {};
  }
  if (res->status != 200) {
    throw std::runtime_error("llm: HTTP " + std::to_string(res->status) + ": " + res->body);
  }
  try {
    json j = json::parse(res->body);
    return j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("llm: malformed completion payload: ") + e.what());
  }
}

std::string LlmClient::complete(const std::string& prompt) const {
  if (use_transcript_) {
    std::string hash = request_hash(cfg_, prompt);
    auto it = transcript_.find(hash);
    if (it == transcript_.end())
      throw std::runtime_error("transcript has no response for request " + hash + " (prompt: " +
                               prompt.substr(0, 80) + "...)");
    return it->second;
  }
  if (cfg_.endpoint.empty()) throw std::runtime_error("llm: no endpoint configured");
  std::string last_error;
  for (int attempt = 0; attempt <= cfg_.retries; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(std::chrono::milliseconds(100L << (attempt - 1)));
    std::string error;
    std::string content = post_once(prompt, error);
    if (error.empty()) return content;
    last_error = error;
  }
  throw std::runtime_error("llm: transport failure after " + std::to_string(cfg_.retries + 1) +
                           " attempts: " + last_error);
}

void append_transcript(const std::string& path, const LlmConfig& cfg, const std::string& prompt,
                       const std::string& response) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot write transcript: " + path);
  json j{{"prompt", prompt}, {"request_hash", request_hash(cfg, prompt)}, {"response", response}};
  out << j.dump() << "\n";
}

KeywordSet query_keywords(const LlmClient& client, const Document& doc, RunLog* log) {
  if (trim(doc.text).empty())
    throw std::invalid_argument("query_keywords: document '" + doc.id + "' is empty");
  Document prepared = doc;
  prepared.text = prepared_text(client.config(), doc, log);
  std::string response = client.complete(build_keyword_prompt(prepared, client.config().num_keywords));
  std::vector<std::string> words = parse_keyword_response(response, client.config().num_keywords);
  return make_keyword_set(doc.id, words, KeywordSource::llm_plain);
}

TopicList refine_topic_list(const TopicList& raw, size_t num_docs, double min_frequency_fraction) {
  // Merge labels whose stemmed token sequences coincide; first surface form wins.
  TopicList merged;
  std::vector<std::string> keys;
  for (const auto& [label, freq] : raw.topics) {
    std::string key;
    for (const std::string& tok : tokenize(label)) key += porter_stem(tok) + " ";
    bool found = false;
    for (size_t i = 0; i < keys.size(); ++i) {
      if (keys[i] == key) {
        merged.topics[i].second += freq;
        found = true;
        break;
      }
    }
    if (!found) {
      keys.push_back(key);
      merged.topics.emplace_back(normalize_word(label), freq);
    }
  }
  double threshold = std::max(2.0, min_frequency_fraction * static_cast<double>(num_docs));
  TopicList pruned;
  for (const auto& [label, freq] : merged.topics)
    if (static_cast<double>(freq) >= threshold) pruned.topics.emplace_back(label, freq);
  return pruned;
}

namespace {

struct TopicCheckpoint {
  size_t next_doc = 0;
  TopicList topics;
};

TopicCheckpoint load_topic_checkpoint(const std::string& path) {
  TopicCheckpoint cp;
  std::ifstream in(path);
  if (!in) return cp;
  json j = json::parse(in);
  cp.next_doc = j.at("next_doc").get<size_t>();
  for (const json& t : j.at("topics"))
    cp.topics.topics.emplace_back(t.at(0).get<std::string>(), t.at(1).get<long>());
  return cp;
}

void save_topic_checkpoint(const std::string& path, const TopicCheckpoint& cp) {
  json topics = json::array();
  for (const auto& [label, freq] : cp.topics.topics) topics.push_back(json::array({label, freq}));
  json j{{"next_doc", cp.next_doc}, {"topics", topics}};
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out << j.dump() << "\n";
}

}  // namespace

TopicList generate_collection_topics(const LlmClient& client, const std::vector<Document>& docs,
                                     const TopicGenOptions& opts, RunLog* log) {
  if (docs.empty()) throw std::invalid_argument("generate_collection_topics: no documents");
  TopicCheckpoint cp;
  if (!opts.checkpoint_path.empty()) {
    cp = load_topic_checkpoint(opts.checkpoint_path);
    if (cp.next_doc > 0 && log != nullptr)
      log->note("resuming topic generation at document " + std::to_string(cp.next_doc));
  }
  for (size_t d = cp.next_doc; d < docs.size(); ++d) {
    const Document& doc = docs[d];
    Document prepared = doc;
    prepared.text = prepared_text(client.config(), doc, log);
    std::string response = client.complete(build_topic_update_prompt(prepared, cp.topics));
    std::vector<std::string> labels = parse_keyword_response(response, 64);
    for (const std::string& label : labels) cp.topics.add(label);
    cp.next_doc = d + 1;
    if (!opts.checkpoint_path.empty()) save_topic_checkpoint(opts.checkpoint_path, cp);
  }
  if (!opts.refine) return cp.topics;
  return refine_topic_list(cp.topics, docs.size(), opts.min_frequency_fraction);
}

KeywordSet query_topic_aware_keywords(const LlmClient& client, const Document& doc,
                                      const TopicList& topics, RunLog* log) {
  if (topics.empty())
    throw std::invalid_argument("query_topic_aware_keywords: topic list is empty");
  if (trim(doc.text).empty())
    throw std::invalid_argument("query_topic_aware_keywords: document '" + doc.id + "' is empty");
  Document prepared = doc;
  prepared.text = prepared_text(client.config(), doc, log);

  // Stage 1: topic selection, matched case-insensitively against the list.
  std::string response = client.complete(build_topic_selection_prompt(prepared, topics));
  std::vector<std::string> selected;
  try {
    for (const std::string& label : parse_keyword_response(response, 256)) {
      long idx = topics.find(label);
      if (idx < 0) continue;
      const std::string& canonical = topics.topics[static_cast<size_t>(idx)].first;
      if (std::find(selected.begin(), selected.end(), canonical) == selected.end())
        selected.push_back(canonical);
    }
  } catch (const std::runtime_error&) {
    // fall through with an empty selection
  }
  if (selected.empty()) {
    if (log != nullptr)
      log->note("doc " + doc.id + ": empty topic selection, falling back to plain keywords");
    return query_keywords(client, doc, log);
  }

  // Stage 2: indexing words per selected topic, merged in order.
  std::vector<std::string> merged;
  for (const std::string& topic : selected) {
    std::string stage2 =
        client.complete(build_topic_keyword_prompt(prepared, topic, client.config().num_keywords));
    for (const std::string& w : parse_keyword_response(stage2, client.config().num_keywords))
      if (std::find(merged.begin(), merged.end(), w) == merged.end()) merged.push_back(w);
  }
  return make_keyword_set(doc.id, merged, KeywordSource::llm_topic_aware);
}

std::vector<KeywordSet> generate_keywords(const LlmClient& client, const std::vector<Document>& docs,
                                          bool topic_aware, const TopicList* topics, RunLog* log,
                                          std::vector<std::pair<size_t, std::string>>* failures) {
  if (topic_aware && (topics == nullptr || topics->empty()))
    throw std::invalid_argument("generate_keywords: topic-aware mode needs a topic list");
  std::vector<KeywordSet> results(docs.size());
  std::vector<RunLog> logs(docs.size());
  std::vector<std::string> errors(docs.size());
  std::atomic<size_t> next{0};

  int workers = std::min<int>(client.config().parallelism, static_cast<int>(docs.size()));
  workers = std::max(workers, 1);
  auto work = [&]() {
    while (true) {
      size_t d = next.fetch_add(1);
      if (d >= docs.size()) return;
      try {
        results[d] = topic_aware ? query_topic_aware_keywords(client, docs[d], *topics, &logs[d])
                                 : query_keywords(client, docs[d], &logs[d]);
      } catch (const std::exception& e) {
        errors[d] = e.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }

  for (size_t d = 0; d < docs.size(); ++d) {
    if (!errors[d].empty()) {
      if (failures == nullptr)
        throw std::runtime_error("keyword generation failed for doc '" + docs[d].id + "': " + errors[d]);
      failures->emplace_back(d, errors[d]);
      continue;
    }
    if (log != nullptr)
      for (std::string& entry : logs[d].entries) log->note(std::move(entry));
  }
  return results;
}

}  // namespace topiceval
