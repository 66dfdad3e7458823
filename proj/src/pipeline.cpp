#include "corpusdiff/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

#include "json.hpp"

#include "corpusdiff/csv.hpp"
#include "corpusdiff/error.hpp"
#include "corpusdiff/rng.hpp"
#include "corpusdiff/svg.hpp"

namespace corpusdiff {

using nlohmann::json;

namespace {

const char* kBuiltinStopwords[] = {
    "a", "about", "above", "after", "again", "against", "all", "am", "an",
    "and", "any", "are", "aren't", "as", "at", "be", "because", "been",
    "before", "being", "below", "between", "both", "but", "by", "can't",
    "cannot", "could", "couldn't", "did", "didn't", "do", "does", "doesn't",
    "doing", "don't", "down", "during", "each", "few", "for", "from",
    "further", "had", "hadn't", "has", "hasn't", "have", "haven't", "having",
    "he", "he'd", "he'll", "he's", "her", "here", "here's", "hers",
    "herself", "him", "himself", "his", "how", "how's", "i", "i'd", "i'll",
    "i'm", "i've", "if", "in", "into", "is", "isn't", "it", "it's", "its",
    "itself", "let's", "me", "more", "most", "mustn't", "my", "myself",
    "no", "nor", "not", "of", "off", "on", "once", "only", "or", "other",
    "ought", "our", "ours", "ourselves", "out", "over", "own", "same",
    "shan't", "she", "she'd", "she'll", "she's", "should", "shouldn't",
    "so", "some", "such", "than", "that", "that's", "the", "their",
    "theirs", "them", "themselves", "then", "there", "there's", "these",
    "they", "they'd", "they'll", "they're", "they've", "this", "those",
    "through", "to", "too", "under", "until", "up", "very", "was",
    "wasn't", "we", "we'd", "we'll", "we're", "we've", "were", "weren't",
    "what", "what's", "when", "when's", "where", "where's", "which",
    "while", "who", "who's", "whom", "why", "why's", "with", "won't",
    "would", "wouldn't", "you", "you'd", "you'll", "you're", "you've",
    "your", "yours", "yourself", "yourselves"};

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json ttest_json(const TTestResult& t) {
  return json{{"t", t.t}, {"df", t.df}, {"p", t.p_two_sided}};
}

std::string peek_config_hash(const std::filesystem::path& path) {
  try {
    const json j = json::parse(read_text_file(path));
    return j.value("config_hash", "");
  } catch (...) {
    return "";
  }
}

class StepTimer {
 public:
  StepTimer(std::map<std::string, double>& timings, std::string name)
      : timings_(timings), name_(std::move(name)),
        start_(std::chrono::steady_clock::now()) {}
  ~StepTimer() {
    const auto end = std::chrono::steady_clock::now();
    timings_[name_] = std::chrono::duration<double>(end - start_).count();
  }

 private:
  std::map<std::string, double>& timings_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

const std::set<std::string>& builtin_stopwords() {
  static const std::set<std::string> words(std::begin(kBuiltinStopwords),
                                           std::end(kBuiltinStopwords));
  return words;
}

RunConfig load_run_config(const std::filesystem::path& config_file) {
  json j;
  try {
    j = json::parse(read_text_file(config_file));
  } catch (const json::exception& e) {
    throw Error("config parse failed: " + std::string(e.what()));
  }
  RunConfig cfg;
  auto path_of = [&](const char* key, std::filesystem::path& out) {
    if (j.contains(key) && !j[key].is_null()) out = j[key].get<std::string>();
  };
  path_of("manifest", cfg.manifest);
  path_of("replacements", cfg.replacements);
  path_of("stopwords", cfg.stopwords);
  path_of("lexicon", cfg.lexicon);
  path_of("exclusions", cfg.exclusions);
  path_of("wordgroups", cfg.wordgroups);
  path_of("output_dir", cfg.output_dir);
  if (j.contains("group_a_label")) cfg.group_a_label = j["group_a_label"].get<std::string>();
  if (j.contains("group_b_label")) cfg.group_b_label = j["group_b_label"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("min_count")) cfg.min_count = j["min_count"].get<int>();
  if (j.contains("lda")) {
    const auto& l = j["lda"];
    if (l.contains("topics")) cfg.lda.topics = l["topics"].get<int>();
    if (l.contains("alpha")) cfg.lda.alpha = l["alpha"].get<double>();
    if (l.contains("beta")) cfg.lda.beta = l["beta"].get<double>();
    if (l.contains("iterations")) cfg.lda.iterations = l["iterations"].get<int>();
    if (l.contains("burn_in")) cfg.lda.burn_in = l["burn_in"].get<int>();
    if (l.contains("doc_length_rate") && !l["doc_length_rate"].is_null())
      cfg.lda.doc_length_rate = l["doc_length_rate"].get<double>();
  }
  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    if (s.contains("k_min")) cfg.sweep_k_min = s["k_min"].get<int>();
    if (s.contains("k_max")) cfg.sweep_k_max = s["k_max"].get<int>();
    if (s.contains("direction")) cfg.sweep_direction = s["direction"].get<std::string>();
  }
  if (j.contains("tsne")) {
    const auto& t = j["tsne"];
    if (t.contains("perplexity")) cfg.tsne.perplexity = t["perplexity"].get<double>();
    if (t.contains("iterations")) cfg.tsne.iterations = t["iterations"].get<int>();
    if (t.contains("learning_rate")) cfg.tsne.learning_rate = t["learning_rate"].get<double>();
    if (t.contains("exaggeration_factor"))
      cfg.tsne.exaggeration_factor = t["exaggeration_factor"].get<double>();
    if (t.contains("exaggeration_iters"))
      cfg.tsne.exaggeration_iters = t["exaggeration_iters"].get<int>();
  }
  if (j.contains("knn")) {
    const auto& k = j["knn"];
    if (k.contains("k_values")) cfg.knn_k_values = k["k_values"].get<std::vector<int>>();
    if (k.contains("folds")) cfg.knn_folds = k["folds"].get<int>();
    if (k.contains("predict_k")) cfg.predict_k = k["predict_k"].get<int>();
  }
  if (j.contains("sentiment_targets"))
    cfg.sentiment_targets = j["sentiment_targets"].get<std::vector<std::string>>();
  if (j.contains("lambdas")) cfg.lambdas = j["lambdas"].get<std::vector<double>>();
  if (j.contains("top_n")) cfg.top_n = j["top_n"].get<int>();
  return cfg;
}

namespace {

std::vector<int> effective_k_values(const RunConfig& cfg) {
  if (!cfg.knn_k_values.empty()) return cfg.knn_k_values;
  std::vector<int> ks;
  for (int k = 1; k <= 41; ++k) ks.push_back(k);
  return ks;
}

}  // namespace

std::string canonical_config(const RunConfig& cfg) {
  json j;
  j["manifest"] = cfg.manifest.string();
  j["replacements"] = cfg.replacements.string();
  j["stopwords"] = cfg.stopwords.string();
  j["lexicon"] = cfg.lexicon.string();
  j["exclusions"] = cfg.exclusions.string();
  j["wordgroups"] = cfg.wordgroups.string();
  j["group_a_label"] = cfg.group_a_label;
  j["group_b_label"] = cfg.group_b_label;
  j["seed"] = cfg.seed;
  j["min_count"] = cfg.min_count;
  j["lda"] = {{"topics", cfg.lda.topics},
              {"alpha", cfg.lda.alpha},
              {"beta", cfg.lda.beta},
              {"iterations", cfg.lda.iterations},
              {"burn_in", cfg.lda.burn_in}};
  if (cfg.lda.doc_length_rate)
    j["lda"]["doc_length_rate"] = *cfg.lda.doc_length_rate;
  else
    j["lda"]["doc_length_rate"] = nullptr;
  j["sweep"] = {{"k_min", cfg.sweep_k_min},
                {"k_max", cfg.sweep_k_max},
                {"direction", cfg.sweep_direction}};
  j["tsne"] = {{"perplexity", cfg.tsne.perplexity},
               {"iterations", cfg.tsne.iterations},
               {"learning_rate", cfg.tsne.learning_rate},
               {"exaggeration_factor", cfg.tsne.exaggeration_factor},
               {"exaggeration_iters", cfg.tsne.exaggeration_iters}};
  j["knn"] = {{"k_values", effective_k_values(cfg)},
              {"folds", cfg.knn_folds},
              {"predict_k", cfg.predict_k}};
  j["sentiment_targets"] = cfg.sentiment_targets;
  j["lambdas"] = cfg.lambdas;
  j["top_n"] = cfg.top_n;
  return j.dump();
}

std::string config_hash(const RunConfig& cfg) {
  return hex64(fnv1a64(canonical_config(cfg)));
}

Pipeline::Pipeline(RunConfig cfg) : cfg_(std::move(cfg)), hash_(config_hash(cfg_)) {}

std::filesystem::path Pipeline::out_path(const std::string& name) const {
  return cfg_.output_dir / name;
}

void Pipeline::write_artifact(const std::string& name, const std::string& content) {
  std::filesystem::create_directories(cfg_.output_dir);
  const auto path = out_path(name);
  write_text_file(path, content);
  if (std::find(written_.begin(), written_.end(), path) == written_.end())
    written_.push_back(path);
}

void Pipeline::remove_artifacts() {
  for (const auto& path : written_) {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
  written_.clear();
}

std::string Pipeline::csv_preamble() const {
  return "# config=" + hash_ + " seed=" + std::to_string(cfg_.seed) + "\n";
}

const PreparedCorpus& Pipeline::prep() {
  if (!prep_) {
    if (cfg_.manifest.empty()) throw Error("no manifest configured");
    const Corpus corpus =
        load_corpus(cfg_.manifest, cfg_.group_a_label, cfg_.group_b_label);
    ReplacementTable table;
    if (!cfg_.replacements.empty())
      table = ReplacementTable::from_csv(cfg_.replacements);
    prep_ = prepare_corpus(corpus, table);
  }
  return *prep_;
}

const std::pair<Vocabulary, DocTermMatrix>& Pipeline::dtm() {
  if (!dtm_) {
    const auto cache = out_path("dtm.json");
    if (std::filesystem::exists(cache) && peek_config_hash(cache) == hash_) {
      dtm_ = load_dtm(cache);
      return *dtm_;
    }
    const PreparedCorpus& pc = prep();
    const std::set<std::string> stopwords = cfg_.stopwords.empty()
                                                ? builtin_stopwords()
                                                : load_stopwords(cfg_.stopwords);
    std::vector<std::vector<std::string>> docs_tokens;
    std::vector<std::string> ids;
    std::vector<Group> groups;
    docs_tokens.reserve(pc.docs.size());
    for (std::size_t i = 0; i < pc.docs.size(); ++i) {
      docs_tokens.push_back(preprocess_for_topics(pc.tokenized[i], stopwords));
      ids.push_back(pc.docs[i].id);
      groups.push_back(pc.docs[i].group);
    }
    dtm_ = build_dtm(docs_tokens, ids, groups, cfg_.min_count);
  }
  return *dtm_;
}

const TopicModel& Pipeline::model() {
  if (!model_) {
    const auto file = out_path("model.json");
    if (std::filesystem::exists(file) && peek_config_hash(file) == hash_) {
      model_ = load_model(file);
      return *model_;
    }
    const auto& [vocab, matrix] = dtm();
    LdaConfig lda_cfg = cfg_.lda;
    lda_cfg.seed = derive_seed(cfg_.seed, "lda");
    model_ = fit_lda(vocab, matrix, lda_cfg);
    save_model(file, *model_, hash_, cfg_.seed);
    if (std::find(written_.begin(), written_.end(), file) == written_.end())
      written_.push_back(file);
  }
  return *model_;
}

void Pipeline::preprocess() {
  StepTimer timer(timings_, "preprocess");
  const auto& [vocab, matrix] = dtm();
  std::filesystem::create_directories(cfg_.output_dir);
  save_dtm(out_path("dtm.json"), vocab, matrix, hash_, cfg_.seed);
  if (std::find(written_.begin(), written_.end(), out_path("dtm.json")) == written_.end())
    written_.push_back(out_path("dtm.json"));

  json section;
  section["documents"] = matrix.n_docs();
  section["vocabulary_size"] = vocab.size();
  section["total_tokens"] = matrix.total_tokens();
  json empties = json::array();
  for (const std::size_t d : matrix.empty_docs) empties.push_back(matrix.doc_ids[d]);
  section["empty_docs"] = std::move(empties);
  sections_["preprocess"] = section.dump();
}

void Pipeline::wordfreq() {
  StepTimer timer(timings_, "wordfreq");
  const std::vector<WordGroup> groups = cfg_.wordgroups.empty()
                                            ? default_word_groups()
                                            : load_word_groups(cfg_.wordgroups);
  std::ostringstream csv;
  csv << csv_preamble()
      << "group,mean_A,mean_B,rate_A,rate_B,t,df,p,t_rate,df_rate,p_rate\n";
  json rows = json::array();
  for (const WordGroup& g : groups) {
    const FrequencyComparison c = compare_word_group(prep(), g);
    csv << csv_escape(c.group_name) << "," << format_double(c.mean_a) << ","
        << format_double(c.mean_b) << "," << format_double(c.rate_a) << ","
        << format_double(c.rate_b) << "," << format_double(c.test.t) << ","
        << format_double(c.test.df) << "," << format_double(c.test.p_two_sided)
        << "," << format_double(c.test_rate.t) << ","
        << format_double(c.test_rate.df) << ","
        << format_double(c.test_rate.p_two_sided) << "\n";
    rows.push_back(json{{"group", c.group_name},
                        {"mean_A", c.mean_a},
                        {"mean_B", c.mean_b},
                        {"rate_A", c.rate_a},
                        {"rate_B", c.rate_b},
                        {"test", ttest_json(c.test)},
                        {"test_rate", ttest_json(c.test_rate)}});
  }
  write_artifact("wordfreq.csv", csv.str());

  const FrequencyComparison lens = compare_doc_lengths(prep());
  std::ostringstream lcsv;
  lcsv << csv_preamble() << "group,mean_A,mean_B,t,df,p\n";
  lcsv << lens.group_name << "," << format_double(lens.mean_a) << ","
       << format_double(lens.mean_b) << "," << format_double(lens.test.t) << ","
       << format_double(lens.test.df) << ","
       << format_double(lens.test.p_two_sided) << "\n";
  write_artifact("doc_lengths.csv", lcsv.str());

  json section;
  section["groups"] = std::move(rows);
  section["doc_lengths"] = json{{"mean_A", lens.mean_a},
                                {"mean_B", lens.mean_b},
                                {"test", ttest_json(lens.test)}};
  sections_["wordfreq"] = section.dump();
}

void Pipeline::sentiment() {
  StepTimer timer(timings_, "sentiment");
  if (cfg_.lexicon.empty())
    throw Error("sentiment requires a lexicon file (set `lexicon` in the config)");
  SentimentLexicon lexicon = SentimentLexicon::from_files(
      cfg_.lexicon, cfg_.exclusions.empty()
                        ? std::nullopt
                        : std::optional<std::filesystem::path>(cfg_.exclusions));
  if (cfg_.exclusions.empty()) lexicon.exclude("master");

  json targets = json::array();
  for (const std::string& target : cfg_.sentiment_targets) {
    const SentimentComparison c = compare_target_sentiment(prep(), target, lexicon);
    auto contributions = [&](Group g) {
      json arr = json::array();
      for (const WordContribution& wc : word_contributions(
               prep(), g, target, lexicon, static_cast<std::size_t>(cfg_.top_n)))
        arr.push_back(json{{"token", wc.token},
                           {"frequency", wc.frequency},
                           {"score", wc.score},
                           {"contribution", wc.contribution}});
      return arr;
    };
    targets.push_back(json{{"target", c.target},
                           {"mean_A", c.mean_a},
                           {"mean_B", c.mean_b},
                           {"n_sentences_A", c.n_sentences_a},
                           {"n_sentences_B", c.n_sentences_b},
                           {"test", ttest_json(c.test)},
                           {"contributions_A", contributions(Group::A)},
                           {"contributions_B", contributions(Group::B)}});
  }
  json out;
  out["config_hash"] = hash_;
  out["seed"] = cfg_.seed;
  out["targets"] = std::move(targets);
  write_artifact("sentiment.json", out.dump(2) + "\n");
  sections_["sentiment"] = out["targets"].dump();
}

void Pipeline::topics_fit() {
  StepTimer timer(timings_, "topics_fit");
  model_.reset();
  std::error_code ec;
  std::filesystem::remove(out_path("model.json"), ec);  // force a fresh fit
  const TopicModel& m = model();
  json section;
  section["topics"] = m.k();
  section["vocabulary_size"] = m.vocab_size();
  section["documents"] = m.n_docs();
  section["empty_docs"] = m.empty_docs;
  sections_["topics_fit"] = section.dump();
}

void Pipeline::topics_summary() {
  StepTimer timer(timings_, "topics_summary");
  const auto rows = topic_summary(model(), cfg_.lambdas,
                                  static_cast<std::size_t>(cfg_.top_n));
  std::ostringstream csv;
  csv << csv_preamble() << "topic,lambda,rank,term,relevance\n";
  json jrows = json::array();
  for (const auto& r : rows) {
    csv << r.topic << "," << format_double(r.lambda) << "," << r.rank << ","
        << csv_escape(r.term) << "," << format_double(r.relevance) << "\n";
    jrows.push_back(json{{"topic", r.topic},
                         {"lambda", r.lambda},
                         {"rank", r.rank},
                         {"term", r.term},
                         {"relevance", r.relevance}});
  }
  write_artifact("topic_summary.csv", csv.str());
  sections_["topics_summary"] = jrows.dump();
}

void Pipeline::compare_sweep() {
  StepTimer timer(timings_, "compare_sweep");
  const auto& [vocab, matrix] = dtm();
  std::vector<SplitDirection> directions;
  if (cfg_.sweep_direction == "both") {
    directions = {SplitDirection::SplitATestB, SplitDirection::SplitBTestA};
  } else if (cfg_.sweep_direction == "split_A") {
    directions = {SplitDirection::SplitATestB};
  } else if (cfg_.sweep_direction == "split_B") {
    directions = {SplitDirection::SplitBTestA};
  } else {
    throw Error("sweep direction must be both, split_A, or split_B");
  }

  json section;
  for (const SplitDirection dir : directions) {
    const std::string name = direction_name(dir);
    const auto rows =
        distance_sweep(vocab, matrix, dir, cfg_.sweep_k_min, cfg_.sweep_k_max,
                       cfg_.lda, derive_seed(cfg_.seed, "sweep-" + name));
    std::ostringstream csv;
    csv << csv_preamble() << "K,baseline,dist\n";
    SvgSeries baseline{"baseline", "#1f4fd8", {}};
    SvgSeries dist{"dist", "#d62728", {}};
    json jrows = json::array();
    for (const auto& row : rows) {
      csv << row.topics << "," << format_double(row.baseline) << ","
          << format_double(row.dist) << "\n";
      baseline.points.emplace_back(row.topics, row.baseline);
      dist.points.emplace_back(row.topics, row.dist);
      jrows.push_back(json{
          {"K", row.topics}, {"baseline", row.baseline}, {"dist", row.dist}});
    }
    write_artifact("sweep_" + name + ".csv", csv.str());
    write_artifact("sweep_" + name + ".svg",
                   svg_line_chart({baseline, dist},
                                  "average topic distance (" + name + ")",
                                  "number of topics K", "Euclidean distance",
                                  "config=" + hash_ + " seed=" + std::to_string(cfg_.seed)));
    section[name] = std::move(jrows);
  }
  sections_["compare_sweep"] = section.dump();
}

void Pipeline::compare_scores() {
  StepTimer timer(timings_, "compare_scores");
  const TopicModel& m = model();
  const auto rows = topic_score_table(m);
  std::ostringstream csv;
  csv << csv_preamble() << "topic,mean_A,mean_B,score,t,df,p\n";
  json jrows = json::array();
  for (const auto& r : rows) {
    csv << r.topic << "," << format_double(r.mean_theta_a) << ","
        << format_double(r.mean_theta_b) << "," << format_double(r.score) << ","
        << format_double(r.test.t) << "," << format_double(r.test.df) << ","
        << format_double(r.test.p_two_sided) << "\n";
    jrows.push_back(json{{"topic", r.topic},
                         {"mean_A", r.mean_theta_a},
                         {"mean_B", r.mean_theta_b},
                         {"score", r.score},
                         {"test", ttest_json(r.test)}});
  }
  write_artifact("topic_scores.csv", csv.str());

  // top-words sidecar so topics can be matched by inspection, not index
  std::ostringstream side;
  side << csv_preamble() << "topic,rank,term\n";
  json top_words;
  for (int k = 0; k < m.k(); ++k) {
    const RelevanceRanking ranking = relevance(m, k, 1.0);
    const std::size_t n =
        std::min<std::size_t>(static_cast<std::size_t>(cfg_.top_n), ranking.terms.size());
    json words = json::array();
    for (std::size_t i = 0; i < n; ++i) {
      side << k << "," << (i + 1) << "," << csv_escape(ranking.terms[i].first) << "\n";
      words.push_back(ranking.terms[i].first);
    }
    top_words[std::to_string(k)] = std::move(words);
  }
  write_artifact("topic_scores_topwords.csv", side.str());

  json section;
  section["rows"] = std::move(jrows);
  section["top_words"] = std::move(top_words);
  sections_["compare_scores"] = section.dump();
}

double Pipeline::clamped_perplexity(std::size_t n_points) const {
  const double limit = (static_cast<double>(n_points) - 1.0) / 3.0 - 1e-9;
  const double p = std::min(cfg_.tsne.perplexity, limit);
  if (!(p > 1.0))
    throw Error("tsne: too few points (" + std::to_string(n_points) +
                ") for any feasible perplexity");
  return p;
}

void Pipeline::embed() {
  StepTimer timer(timings_, "embed");
  const TopicModel& m = model();
  TsneConfig tcfg = cfg_.tsne;
  tcfg.perplexity = clamped_perplexity(m.n_docs());
  tcfg.seed = derive_seed(cfg_.seed, "tsne");
  TsneDiagnostics diag;
  const auto points = tsne_embed(m.theta, m.doc_ids, m.doc_groups, tcfg, &diag);

  std::ostringstream csv;
  csv << csv_preamble() << "doc_id,x,y,group\n";
  for (const auto& p : points)
    csv << csv_escape(p.doc_id) << "," << format_double(p.x) << ","
        << format_double(p.y) << "," << group_name(p.group) << "\n";
  write_artifact("embedding.csv", csv.str());
  write_artifact("embedding.svg",
                 svg_scatter(points, "topic distributions embedded in 2D",
                             "config=" + hash_ + " seed=" + std::to_string(cfg_.seed)));

  json section;
  section["n_points"] = points.size();
  section["perplexity_used"] = tcfg.perplexity;
  section["max_entropy_error"] = diag.max_entropy_error;
  section["kl_final"] = diag.kl_final;
  sections_["embed"] = section.dump();
}

std::vector<KnnResult> Pipeline::run_cv(int* best_k) {
  const TopicModel& m = model();
  std::vector<std::vector<double>> points;
  std::vector<Group> labels;
  std::vector<std::string> ids;
  for (std::size_t d = 0; d < m.n_docs(); ++d) {
    if (m.doc_groups[d] == Group::Unknown) continue;
    points.push_back(m.theta[d]);
    labels.push_back(m.doc_groups[d]);
    ids.push_back(m.doc_ids[d]);
  }
  std::vector<int> skipped;
  const auto results =
      knn_cross_validate(points, labels, ids, effective_k_values(cfg_),
                         cfg_.knn_folds, derive_seed(cfg_.seed, "knn-cv"), &skipped);
  if (results.empty()) throw Error("knn cross-validation produced no usable k");
  if (best_k) {
    const auto best = std::max_element(
        results.begin(), results.end(), [](const KnnResult& x, const KnnResult& y) {
          if (x.accuracy != y.accuracy) return x.accuracy < y.accuracy;
          return x.k > y.k;  // ties prefer the smaller k
        });
    *best_k = best->k;
  }
  return results;
}

void Pipeline::predict_cv() {
  StepTimer timer(timings_, "predict_cv");
  int best_k = 0;
  const auto results = run_cv(&best_k);

  std::ostringstream csv;
  csv << csv_preamble() << "# best_k=" << best_k << "\n"
      << "k,accuracy\n";
  SvgSeries acc{"accuracy", "#1f4fd8", {}};
  json jrows = json::array();
  for (const auto& r : results) {
    csv << r.k << "," << format_double(r.accuracy) << "\n";
    acc.points.emplace_back(r.k, r.accuracy);
    jrows.push_back(json{{"k", r.k},
                         {"accuracy", r.accuracy},
                         {"fold_accuracies", r.fold_accuracies},
                         {"confusion",
                          {{"AA", r.confusion[0][0]},
                           {"AB", r.confusion[0][1]},
                           {"BA", r.confusion[1][0]},
                           {"BB", r.confusion[1][1]}}}});
  }
  write_artifact("knn_cv.csv", csv.str());
  write_artifact("knn_cv.svg",
                 svg_line_chart({acc}, "kNN cross-validated accuracy",
                                "neighbours k", "accuracy",
                                "config=" + hash_ + " seed=" + std::to_string(cfg_.seed)));
  json section;
  section["results"] = std::move(jrows);
  section["best_k"] = best_k;
  sections_["predict_cv"] = section.dump();
}

void Pipeline::predict_label() {
  StepTimer timer(timings_, "predict_label");
  const TopicModel& m = model();
  std::vector<std::vector<double>> train, query;
  std::vector<Group> train_labels;
  std::vector<std::string> train_ids, query_ids;
  for (std::size_t d = 0; d < m.n_docs(); ++d) {
    if (m.doc_groups[d] == Group::Unknown) {
      query.push_back(m.theta[d]);
      query_ids.push_back(m.doc_ids[d]);
    } else {
      train.push_back(m.theta[d]);
      train_labels.push_back(m.doc_groups[d]);
      train_ids.push_back(m.doc_ids[d]);
    }
  }
  int k = cfg_.predict_k;
  if (k <= 0) run_cv(&k);

  std::ostringstream csv;
  csv << csv_preamble() << "doc_id,predicted_group,margin\n";
  json jrows = json::array();
  if (!query.empty()) {
    for (const auto& p : knn_predict(train, train_labels, train_ids, query, query_ids, k)) {
      csv << csv_escape(p.doc_id) << "," << group_name(p.predicted) << ","
          << format_double(p.margin) << "\n";
      jrows.push_back(json{{"doc_id", p.doc_id},
                           {"predicted_group", group_name(p.predicted)},
                           {"margin", p.margin}});
    }
  }
  write_artifact("predictions.csv", csv.str());
  json section;
  section["k"] = k;
  section["rows"] = std::move(jrows);
  sections_["predict_label"] = section.dump();
}

void Pipeline::report() {
  StepTimer timer(timings_, "report");
  preprocess();
  wordfreq();
  if (!cfg_.lexicon.empty()) sentiment();
  topics_fit();
  topics_summary();
  compare_sweep();
  compare_scores();
  embed();
  predict_cv();
  predict_label();

  json bundle;
  bundle["format"] = "corpusdiff-report";
  bundle["version"] = 1;
  bundle["config_hash"] = hash_;
  bundle["seed"] = cfg_.seed;
  bundle["toolkit_version"] = kToolkitVersion;
  bundle["config"] = json::parse(canonical_config(cfg_));
  json sections;
  for (const auto& [name, dumped] : sections_) sections[name] = json::parse(dumped);
  bundle["sections"] = std::move(sections);
  json artifact_names = json::array();
  for (const auto& path : written_) artifact_names.push_back(path.filename().string());
  bundle["artifacts"] = std::move(artifact_names);
  bundle["timestamp"] = utc_timestamp();
  write_artifact("report.json", bundle.dump(2) + "\n");

  json run;
  run["format"] = "corpusdiff-run";
  run["version"] = 1;
  run["config_hash"] = hash_;
  run["seed"] = cfg_.seed;
  run["toolkit_version"] = kToolkitVersion;
  run["timings_seconds"] = timings_;
  run["timestamp"] = utc_timestamp();
  write_artifact("run.json", run.dump(2) + "\n");
}

}  // namespace corpusdiff
