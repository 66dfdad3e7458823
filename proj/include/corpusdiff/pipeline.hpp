#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corpusdiff/compare.hpp"
#include "corpusdiff/corpus.hpp"
#include "corpusdiff/dtm.hpp"
#include "corpusdiff/knn.hpp"
#include "corpusdiff/lda.hpp"
#include "corpusdiff/sentiment.hpp"
#include "corpusdiff/tsne.hpp"
#include "corpusdiff/wordfreq.hpp"

namespace corpusdiff {

inline constexpr const char* kToolkitVersion = "1.0.0";

struct RunConfig {
  // inputs; empty optional paths fall back to built-in defaults where noted
  std::filesystem::path manifest;
  std::filesystem::path replacements;  // none
  std::filesystem::path stopwords;     // built-in English list
  std::filesystem::path lexicon;       // none (sentiment requires one)
  std::filesystem::path exclusions;    // built-in {"master"}
  std::filesystem::path wordgroups;    // built-in seven target groups
  std::filesystem::path output_dir = "out";

  std::string group_a_label = "A";
  std::string group_b_label = "B";
  std::uint64_t seed = 42;  // master seed; every module seed derives from it
  int min_count = 5;

  LdaConfig lda;  // lda.seed is ignored; derived from the master seed

  int sweep_k_min = 2;
  int sweep_k_max = 100;
  std::string sweep_direction = "both";  // both | split_A | split_B

  TsneConfig tsne;  // tsne.seed ignored; perplexity clamped to feasibility

  std::vector<int> knn_k_values;  // default 1..41
  int knn_folds = 10;
  int predict_k = 0;  // 0 = cross-validated argmax

  std::vector<std::string> sentiment_targets = {"master"};
  std::vector<double> lambdas = {1.0, 0.4, 0.2};
  int top_n = 15;
};

// Built-in defaults (mirrored by the files under data/).
const std::set<std::string>& builtin_stopwords();

// Config file is JSON with the same keys as the canonical form; missing keys
// keep their defaults.
RunConfig load_run_config(const std::filesystem::path& config_file);

// Canonical JSON (sorted keys, output_dir excluded) used for hashing.
std::string canonical_config(const RunConfig& cfg);

// 16-hex-digit FNV-1a of the canonical config.
std::string config_hash(const RunConfig& cfg);

// Orchestrates subcommands over shared lazily-computed state. Artifacts are
// tracked so a failed run can remove its partial outputs.
class Pipeline {
 public:
  explicit Pipeline(RunConfig cfg);

  void preprocess();
  void wordfreq();
  void sentiment();
  void topics_fit();
  void topics_summary();
  void compare_sweep();
  void compare_scores();
  void embed();
  void predict_cv();
  void predict_label();
  void report();  // full pipeline + report.json + run.json

  void remove_artifacts();

  const std::vector<std::filesystem::path>& artifacts() const { return written_; }
  const RunConfig& config() const { return cfg_; }
  const std::string& hash() const { return hash_; }

 private:
  RunConfig cfg_;
  std::string hash_;

  std::optional<PreparedCorpus> prep_;
  std::optional<std::pair<Vocabulary, DocTermMatrix>> dtm_;
  std::optional<TopicModel> model_;

  std::vector<std::filesystem::path> written_;
  std::map<std::string, double> timings_;
  // report.json sections, keyed by subcommand
  std::map<std::string, std::string> sections_;

  const PreparedCorpus& prep();
  const std::pair<Vocabulary, DocTermMatrix>& dtm();
  const TopicModel& model();

  std::vector<KnnResult> run_cv(int* best_k);
  double clamped_perplexity(std::size_t n_points) const;

  std::filesystem::path out_path(const std::string& name) const;
  void write_artifact(const std::string& name, const std::string& content);
  std::string csv_preamble() const;
};

}  // namespace corpusdiff
