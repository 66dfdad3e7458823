#include "corpusdiff/dtm.hpp"

#include <map>

#include "json.hpp"

#include "corpusdiff/csv.hpp"
#include "corpusdiff/error.hpp"

namespace corpusdiff {

using nlohmann::json;

Vocabulary Vocabulary::from_terms(std::vector<std::string> terms) {
  Vocabulary v;
  v.terms = std::move(terms);
  for (std::size_t i = 0; i < v.terms.size(); ++i)
    v.index[v.terms[i]] = static_cast<int>(i);
  if (v.index.size() != v.terms.size())
    throw Error("vocabulary: duplicate terms");
  return v;
}

std::size_t DocTermMatrix::row_sum(std::size_t d) const {
  std::size_t s = 0;
  for (const auto& [term, count] : rows[d]) s += static_cast<std::size_t>(count);
  return s;
}

std::size_t DocTermMatrix::total_tokens() const {
  std::size_t s = 0;
  for (std::size_t d = 0; d < rows.size(); ++d) s += row_sum(d);
  return s;
}

std::pair<Vocabulary, DocTermMatrix> build_dtm(
    const std::vector<std::vector<std::string>>& docs_tokens,
    const std::vector<std::string>& doc_ids,
    const std::vector<Group>& doc_groups, int min_count) {
  if (docs_tokens.empty()) throw Error("build_dtm: empty corpus");
  if (docs_tokens.size() != doc_ids.size() || doc_ids.size() != doc_groups.size())
    throw Error("build_dtm: docs, ids, and groups must be parallel");
  if (min_count < 1) throw Error("build_dtm: min_count must be >= 1");

  // std::map iterates lexicographically, which fixes the vocabulary order
  std::map<std::string, std::size_t> freq;
  for (const auto& tokens : docs_tokens)
    for (const auto& tok : tokens) ++freq[tok];

  std::vector<std::string> kept;
  for (const auto& [term, count] : freq)
    if (count >= static_cast<std::size_t>(min_count)) kept.push_back(term);
  Vocabulary vocab = Vocabulary::from_terms(std::move(kept));

  DocTermMatrix dtm;
  dtm.doc_ids = doc_ids;
  dtm.doc_groups = doc_groups;
  dtm.n_terms = vocab.size();
  dtm.rows.resize(docs_tokens.size());
  for (std::size_t d = 0; d < docs_tokens.size(); ++d) {
    std::map<int, int> counts;
    for (const auto& tok : docs_tokens[d]) {
      const int id = vocab.id_of(tok);
      if (id >= 0) ++counts[id];
    }
    dtm.rows[d].assign(counts.begin(), counts.end());
    if (dtm.rows[d].empty()) dtm.empty_docs.push_back(d);
  }
  return {std::move(vocab), std::move(dtm)};
}

namespace {

constexpr const char* kDtmFormat = "corpusdiff-dtm";
constexpr int kDtmVersion = 1;

Group group_from_name(const std::string& name) {
  if (name == "A") return Group::A;
  if (name == "B") return Group::B;
  if (name == "unknown") return Group::Unknown;
  throw Error("unknown group name in file: " + name);
}

}  // namespace

void save_dtm(const std::filesystem::path& path, const Vocabulary& vocab,
              const DocTermMatrix& dtm, const std::string& config_hash,
              std::uint64_t seed) {
  json j;
  j["format"] = kDtmFormat;
  j["version"] = kDtmVersion;
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  j["vocabulary"] = vocab.terms;
  json ids = json::array(), groups = json::array();
  for (std::size_t d = 0; d < dtm.n_docs(); ++d) {
    ids.push_back(dtm.doc_ids[d]);
    groups.push_back(group_name(dtm.doc_groups[d]));
  }
  j["doc_ids"] = std::move(ids);
  j["doc_groups"] = std::move(groups);
  json triplets = json::array();
  for (std::size_t d = 0; d < dtm.n_docs(); ++d)
    for (const auto& [term, count] : dtm.rows[d])
      triplets.push_back(json::array({d, term, count}));
  j["triplets"] = std::move(triplets);
  j["empty_docs"] = dtm.empty_docs;
  write_text_file(path, j.dump(2) + "\n");
}

std::pair<Vocabulary, DocTermMatrix> load_dtm(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw Error("dtm cache parse failed: " + std::string(e.what()));
  }
  if (j.value("format", "") != kDtmFormat || j.value("version", -1) != kDtmVersion)
    throw Error("dtm cache has wrong format/version: " + path.string());

  Vocabulary vocab = Vocabulary::from_terms(j.at("vocabulary").get<std::vector<std::string>>());
  DocTermMatrix dtm;
  dtm.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
  for (const auto& g : j.at("doc_groups"))
    dtm.doc_groups.push_back(group_from_name(g.get<std::string>()));
  dtm.n_terms = vocab.size();
  dtm.rows.resize(dtm.doc_ids.size());
  for (const auto& t : j.at("triplets")) {
    const std::size_t d = t.at(0).get<std::size_t>();
    const int term = t.at(1).get<int>();
    const int count = t.at(2).get<int>();
    if (d >= dtm.rows.size() || term < 0 || term >= static_cast<int>(vocab.size()))
      throw Error("dtm cache: triplet out of range");
    dtm.rows[d].emplace_back(term, count);
  }
  dtm.empty_docs = j.at("empty_docs").get<std::vector<std::size_t>>();
  return {std::move(vocab), std::move(dtm)};
}

}  // namespace corpusdiff
