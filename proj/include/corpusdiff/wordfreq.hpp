#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "corpusdiff/corpus.hpp"
#include "corpusdiff/stats.hpp"

namespace corpusdiff {

struct WordGroup {
  std::string name;
  std::set<std::string> members;  // lowercase tokens
};

// JSON: [{"name": "...", "members": ["...", ...]}, ...]
std::vector<WordGroup> load_word_groups(const std::filesystem::path& path);

// The seven built-in target groups; a word-groups file overrides them.
std::vector<WordGroup> default_word_groups();

struct FrequencyComparison {
  std::string group_name;
  double mean_a = 0.0;   // average occurrences per document, group A
  double mean_b = 0.0;
  double rate_a = 0.0;   // average per-1000-token rate
  double rate_b = 0.0;
  TTestResult test;       // on per-document raw counts
  TTestResult test_rate;  // on per-document per-1000-token rates
};

// Occurrences of any member token in tokens_flat (each occurrence counts once).
std::size_t count_group(const TokenizedDocument& doc, const WordGroup& group);

// Both groups need >= 2 documents. Counts run on the full token stream
// (replacements applied, stopwords untouched).
FrequencyComparison compare_word_group(const PreparedCorpus& corpus,
                                       const WordGroup& group);

// Welch test on per-document length_words. The rate/test_rate fields mirror
// the raw fields since lengths have no separate normalization.
FrequencyComparison compare_doc_lengths(const PreparedCorpus& corpus);

}  // namespace corpusdiff
