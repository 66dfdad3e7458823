#include "corpusdiff/corpus.hpp"

#include <cctype>
#include <set>
#include <sstream>

#include "corpusdiff/csv.hpp"
#include "corpusdiff/error.hpp"

namespace corpusdiff {

namespace {

// Token characters: ASCII alphanumerics plus any byte >= 0x80 so multi-byte
// UTF-8 sequences stay intact. Apostrophes are handled by the callers.
bool is_token_char(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

char to_lower_ascii(unsigned char c) {
  return static_cast<char>(std::tolower(c));
}

}  // namespace

std::string group_name(Group g) {
  switch (g) {
    case Group::A: return "A";
    case Group::B: return "B";
    default: return "unknown";
  }
}

Corpus load_corpus(const std::filesystem::path& manifest,
                   const std::string& label_a, const std::string& label_b) {
  const auto rows = read_csv(manifest);
  if (rows.empty()) throw Error("manifest is empty: " + manifest.string());
  const auto& header = rows[0];
  if (header.size() < 3 || lowercase(trim(header[0])) != "id" ||
      lowercase(trim(header[1])) != "path" || lowercase(trim(header[2])) != "group")
    throw Error("manifest header must be `id,path,group,state`: " + manifest.string());

  const std::string la = lowercase(label_a);
  const std::string lb = lowercase(label_b);
  const std::filesystem::path base = manifest.parent_path();

  Corpus corpus;
  std::set<std::string> seen_ids;
  std::vector<std::string> missing;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() < 3)
      throw Error("manifest row " + std::to_string(i + 1) + ": expected at least 3 fields");
    Document doc;
    doc.id = trim(row[0]);
    if (doc.id.empty())
      throw Error("manifest row " + std::to_string(i + 1) + ": empty id");
    if (!seen_ids.insert(doc.id).second)
      throw Error("duplicate document id: " + doc.id);

    const std::string grp = lowercase(trim(row[2]));
    if (grp == la) doc.group = Group::A;
    else if (grp == lb) doc.group = Group::B;
    else if (grp == "unknown") doc.group = Group::Unknown;
    else
      throw Error("manifest row " + std::to_string(i + 1) + ": unknown group token `" +
                  trim(row[2]) + "`");

    if (row.size() >= 4) doc.state = trim(row[3]);

    std::filesystem::path p = trim(row[1]);
    if (p.is_relative()) p = base / p;
    try {
      doc.text = read_text_file(p);
    } catch (const Error&) {
      missing.push_back(doc.id + " (" + p.string() + ")");
      continue;
    }
    corpus.docs.push_back(std::move(doc));
  }
  if (!missing.empty()) {
    std::string msg = "missing document files:";
    for (const auto& m : missing) msg += " " + m;
    throw Error(msg);
  }
  return corpus;
}

ReplacementTable::ReplacementTable(std::map<std::string, std::string> entries) {
  for (auto& [variant, canonical] : entries) {
    const std::string v = lowercase(trim(variant));
    const std::string c = lowercase(trim(canonical));
    if (v.empty() || c.empty())
      throw Error("replacement table: empty variant or canonical token");
    entries_[v] = c;
  }
  for (const auto& [variant, canonical] : entries_) {
    (void)variant;
    if (entries_.count(canonical))
      throw Error("replacement table: canonical token `" + canonical +
                  "` also appears as a variant (chain)");
  }
}

ReplacementTable ReplacementTable::from_csv(const std::filesystem::path& path) {
  const auto rows = read_csv(path);
  if (rows.empty()) return ReplacementTable{};
  std::size_t start = 0;
  if (lowercase(trim(rows[0][0])) == "variant") start = 1;  // header optional
  std::map<std::string, std::string> entries;
  for (std::size_t i = start; i < rows.size(); ++i) {
    if (rows[i].size() < 2)
      throw Error("replacement table row " + std::to_string(i + 1) +
                  ": expected `variant,canonical`");
    entries[trim(rows[i][0])] = trim(rows[i][1]);
  }
  return ReplacementTable(std::move(entries));
}

const std::string* ReplacementTable::find(const std::string& lower_token) const {
  const auto it = entries_.find(lower_token);
  return it == entries_.end() ? nullptr : &it->second;
}

std::string apply_replacements(const std::string& text, const ReplacementTable& table) {
  if (table.empty()) return text;
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (!is_token_char(c) && c != '\'') {
      out.push_back(text[i]);
      ++i;
      continue;
    }
    std::size_t end = i;
    while (end < n && (is_token_char(static_cast<unsigned char>(text[end])) ||
                       text[end] == '\''))
      ++end;
    // trim edge apostrophes out of the lookup token
    std::size_t core_b = i, core_e = end;
    while (core_b < core_e && text[core_b] == '\'') ++core_b;
    while (core_e > core_b && text[core_e - 1] == '\'') --core_e;
    std::string lower;
    lower.reserve(core_e - core_b);
    for (std::size_t p = core_b; p < core_e; ++p)
      lower.push_back(to_lower_ascii(static_cast<unsigned char>(text[p])));
    const std::string* canonical = table.find(lower);
    out.append(text, i, core_b - i);
    if (canonical)
      out.append(*canonical);
    else
      out.append(text, core_b, core_e - core_b);
    out.append(text, core_e, end - core_e);
    i = end;
  }
  return out;
}

TokenizedDocument tokenize(const std::string& text, const std::string& id) {
  TokenizedDocument doc;
  doc.id = id;

  std::vector<std::string> sentence;
  std::string token;

  auto flush_token = [&] {
    // strip edge apostrophes; drop tokens that end up empty
    std::size_t b = 0, e = token.size();
    while (b < e && token[b] == '\'') ++b;
    while (e > b && token[e - 1] == '\'') --e;
    if (e > b) sentence.push_back(token.substr(b, e - b));
    token.clear();
  };
  auto flush_sentence = [&] {
    flush_token();
    if (!sentence.empty()) {
      for (const auto& t : sentence) doc.tokens_flat.push_back(t);
      doc.sentences.push_back(std::move(sentence));
      sentence.clear();
    }
  };

  bool pending_break = false;
  for (const char raw : text) {
    const unsigned char c = static_cast<unsigned char>(raw);
    if (is_token_char(c)) {
      if (pending_break) {
        // terminal punctuation without whitespace: not a boundary
        pending_break = false;
      }
      token.push_back(c < 0x80 ? to_lower_ascii(c) : raw);
    } else if (raw == '\'') {
      token.push_back(raw);
    } else if (raw == '.' || raw == '!' || raw == '?') {
      flush_token();
      pending_break = true;
    } else if (std::isspace(c)) {
      flush_token();
      if (pending_break) {
        flush_sentence();
        pending_break = false;
      }
    } else {
      flush_token();  // other punctuation (incl. hyphens) splits tokens
    }
  }
  flush_sentence();
  return doc;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::set<std::string> words;
  std::istringstream in(read_text_file(path));
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = lowercase(trim(line));
    if (!line.empty()) words.insert(line);
  }
  return words;
}

std::vector<std::string> preprocess_for_topics(const TokenizedDocument& doc,
                                               const std::set<std::string>& stopwords,
                                               Stemmer stemmer) {
  std::vector<std::string> out;
  out.reserve(doc.tokens_flat.size());
  for (const auto& tok : doc.tokens_flat) {
    if (stopwords.count(tok)) continue;
    out.push_back(stemmer(tok));
  }
  return out;
}

PreparedCorpus prepare_corpus(const Corpus& corpus, const ReplacementTable& table) {
  PreparedCorpus prep;
  prep.docs = corpus.docs;
  prep.tokenized.reserve(corpus.docs.size());
  for (auto& doc : prep.docs) {
    TokenizedDocument tok = tokenize(apply_replacements(doc.text, table), doc.id);
    doc.length_words = tok.tokens_flat.size();
    prep.tokenized.push_back(std::move(tok));
  }
  return prep;
}

}  // namespace corpusdiff
