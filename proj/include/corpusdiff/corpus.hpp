#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "corpusdiff/porter.hpp"

namespace corpusdiff {

enum class Group { A, B, Unknown };

std::string group_name(Group g);

struct Document {
  std::string id;
  std::string text;
  Group group = Group::Unknown;
  std::string state;
  std::size_t length_words = 0;  // tokens before stopword removal
};

struct Corpus {
  std::vector<Document> docs;
};

// Manifest CSV with header `id,path,group,state`. Paths resolve relative to
// the manifest's directory. Group tokens are matched case-insensitively
// against label_a / label_b / "unknown"; anything else is fatal with the row
// number. Duplicate ids are fatal. Unreadable files are reported per row by
// document id.
Corpus load_corpus(const std::filesystem::path& manifest,
                   const std::string& label_a = "A",
                   const std::string& label_b = "B");

// variant -> canonical token map; lookups are case-insensitive and
// whole-token only. A canonical form may never appear as a variant (no
// chains), which makes application idempotent.
class ReplacementTable {
 public:
  ReplacementTable() = default;
  explicit ReplacementTable(std::map<std::string, std::string> entries);
  ReplacementTable(std::initializer_list<std::pair<const std::string, std::string>> entries)
      : ReplacementTable(std::map<std::string, std::string>(entries)) {}

  // CSV with header `variant,canonical`.
  static ReplacementTable from_csv(const std::filesystem::path& path);

  const std::map<std::string, std::string>& entries() const { return entries_; }
  const std::string* find(const std::string& lower_token) const;
  bool empty() const { return entries_.empty(); }

 private:
  std::map<std::string, std::string> entries_;  // keys and values lowercase
};

// Replaces every whole-token occurrence of a variant with its canonical
// form; all other text (including punctuation and spacing) is unchanged.
std::string apply_replacements(const std::string& text, const ReplacementTable& table);

struct TokenizedDocument {
  std::string id;
  std::vector<std::vector<std::string>> sentences;
  std::vector<std::string> tokens_flat;  // concatenation of sentences
};

// Sentences end at terminal punctuation (. ! ?) followed by whitespace
// (closing quotes/brackets may intervene). Tokens are lowercased maximal
// runs of alphanumerics; interior apostrophes are kept ("ain't" is one
// token), hyphens split tokens, all other punctuation is stripped.
TokenizedDocument tokenize(const std::string& text, const std::string& id = "");

// One token per line, '#' comments and blank lines ignored, lowercased.
std::set<std::string> load_stopwords(const std::filesystem::path& path);

using Stemmer = std::string (*)(const std::string&);

// Drops stopwords (case-insensitive; applied after replacements since the
// input is replaced text) and stems what remains, preserving order.
std::vector<std::string> preprocess_for_topics(const TokenizedDocument& doc,
                                               const std::set<std::string>& stopwords,
                                               Stemmer stemmer = porter_stem);

// Corpus with replacements applied and every document tokenized;
// docs[i].length_words is filled in from tokenized[i].
struct PreparedCorpus {
  std::vector<Document> docs;
  std::vector<TokenizedDocument> tokenized;  // parallel to docs
};

PreparedCorpus prepare_corpus(const Corpus& corpus, const ReplacementTable& table);

}  // namespace corpusdiff
