#include "corpusdiff/wordfreq.hpp"

#include "json.hpp"

#include "corpusdiff/csv.hpp"
#include "corpusdiff/error.hpp"

namespace corpusdiff {

using nlohmann::json;

std::vector<WordGroup> load_word_groups(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw Error("word-group config parse failed: " + std::string(e.what()));
  }
  if (!j.is_array()) throw Error("word-group config must be a JSON array");
  std::vector<WordGroup> groups;
  for (const auto& item : j) {
    WordGroup g;
    g.name = item.at("name").get<std::string>();
    for (const auto& m : item.at("members"))
      g.members.insert(lowercase(trim(m.get<std::string>())));
    if (g.name.empty() || g.members.empty())
      throw Error("word-group config: group with empty name or members");
    groups.push_back(std::move(g));
  }
  return groups;
}

std::vector<WordGroup> default_word_groups() {
  return {
      {"whip", {"whips", "whipped", "whipping"}},
      {"beat_hurt", {"beat", "hurt"}},
      {"patrollers", {"patrollers", "patterrollers", "pattyrollers", "paddyrollers"}},
      {"rape", {"rape", "raped", "raping"}},
      {"breeding", {"bred", "breed", "breeding"}},
      {"happy", {"happy"}},
      {"kkk", {"kkk", "klux", "klan"}},
  };
}

std::size_t count_group(const TokenizedDocument& doc, const WordGroup& group) {
  std::size_t n = 0;
  for (const auto& tok : doc.tokens_flat)
    if (group.members.count(tok)) ++n;
  return n;
}

namespace {

struct GroupSamples {
  std::vector<double> a;
  std::vector<double> b;
};

void require_two_per_group(const GroupSamples& s, const std::string& what) {
  if (s.a.size() < 2 || s.b.size() < 2)
    throw Error(what + ": need at least 2 documents per group (A=" +
                std::to_string(s.a.size()) + ", B=" + std::to_string(s.b.size()) + ")");
}

}  // namespace

FrequencyComparison compare_word_group(const PreparedCorpus& corpus,
                                       const WordGroup& group) {
  GroupSamples counts, rates;
  for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
    const Document& doc = corpus.docs[i];
    if (doc.group == Group::Unknown) continue;
    const double c = static_cast<double>(count_group(corpus.tokenized[i], group));
    const double rate =
        doc.length_words == 0 ? 0.0 : c * 1000.0 / static_cast<double>(doc.length_words);
    if (doc.group == Group::A) {
      counts.a.push_back(c);
      rates.a.push_back(rate);
    } else {
      counts.b.push_back(c);
      rates.b.push_back(rate);
    }
  }
  require_two_per_group(counts, "compare_word_group(" + group.name + ")");

  FrequencyComparison out;
  out.group_name = group.name;
  out.test = welch_t_test(counts.a, counts.b);
  out.test_rate = welch_t_test(rates.a, rates.b);
  out.mean_a = out.test.mean_a;
  out.mean_b = out.test.mean_b;
  out.rate_a = out.test_rate.mean_a;
  out.rate_b = out.test_rate.mean_b;
  return out;
}

FrequencyComparison compare_doc_lengths(const PreparedCorpus& corpus) {
  GroupSamples lengths;
  for (const Document& doc : corpus.docs) {
    if (doc.group == Group::Unknown) continue;
    const double len = static_cast<double>(doc.length_words);
    (doc.group == Group::A ? lengths.a : lengths.b).push_back(len);
  }
  require_two_per_group(lengths, "compare_doc_lengths");

  FrequencyComparison out;
  out.group_name = "document_length";
  out.test = welch_t_test(lengths.a, lengths.b);
  out.test_rate = out.test;
  out.mean_a = out.test.mean_a;
  out.mean_b = out.test.mean_b;
  out.rate_a = out.mean_a;
  out.rate_b = out.mean_b;
  return out;
}

}  // namespace corpusdiff
