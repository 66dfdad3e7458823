#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "corpusdiff/corpus.hpp"

namespace corpusdiff {

struct Vocabulary {
  std::vector<std::string> terms;  // lexicographically ordered
  std::unordered_map<std::string, int> index;

  std::size_t size() const { return terms.size(); }
  // -1 when the term is out of vocabulary
  int id_of(const std::string& term) const {
    const auto it = index.find(term);
    return it == index.end() ? -1 : it->second;
  }
  static Vocabulary from_terms(std::vector<std::string> terms);
};

struct DocTermMatrix {
  std::vector<std::string> doc_ids;
  std::vector<Group> doc_groups;          // parallel to doc_ids
  std::size_t n_terms = 0;
  // per document: (term id, count), sorted by term id
  std::vector<std::vector<std::pair<int, int>>> rows;
  std::vector<std::size_t> empty_docs;    // rows with zero retained tokens

  std::size_t n_docs() const { return rows.size(); }
  std::size_t row_sum(std::size_t d) const;
  std::size_t total_tokens() const;
};

// Vocabulary keeps terms whose total corpus frequency is >= min_count.
// Documents reduced to zero retained tokens stay in the matrix, flagged in
// empty_docs.
std::pair<Vocabulary, DocTermMatrix> build_dtm(
    const std::vector<std::vector<std::string>>& docs_tokens,
    const std::vector<std::string>& doc_ids,
    const std::vector<Group>& doc_groups, int min_count);

// Versioned JSON cache; round-trips exactly.
void save_dtm(const std::filesystem::path& path, const Vocabulary& vocab,
              const DocTermMatrix& dtm, const std::string& config_hash,
              std::uint64_t seed);
std::pair<Vocabulary, DocTermMatrix> load_dtm(const std::filesystem::path& path);

}  // namespace corpusdiff
