#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "corpusdiff/error.hpp"
#include "corpusdiff/pipeline.hpp"

namespace {

std::string one_line(std::string msg) {
  for (char& c : msg)
    if (c == '\n' || c == '\r') c = ' ';
  return msg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corpusdiff: content and sentiment comparison between two labeled document groups"};
  app.require_subcommand(1);

  std::string config_file;
  app.add_option("-c,--config", config_file, "JSON run configuration file");

  // global overrides; flags win over the config file
  std::string manifest, replacements, stopwords, lexicon, exclusions, wordgroups;
  std::string output_dir, group_a, group_b;
  std::uint64_t seed = 0;
  auto* opt_manifest = app.add_option("--manifest", manifest, "corpus manifest CSV");
  auto* opt_repl = app.add_option("--replacements", replacements, "replacement table CSV");
  auto* opt_stop = app.add_option("--stopwords", stopwords, "stopword list file");
  auto* opt_lex = app.add_option("--lexicon", lexicon, "sentiment lexicon TSV");
  auto* opt_excl = app.add_option("--exclusions", exclusions, "sentiment exclusion list");
  auto* opt_wg = app.add_option("--wordgroups", wordgroups, "word-group config JSON");
  auto* opt_out = app.add_option("--output-dir", output_dir, "artifact output directory");
  auto* opt_seed = app.add_option("--seed", seed, "master seed");
  auto* opt_ga = app.add_option("--group-a-label", group_a, "manifest token for group A");
  auto* opt_gb = app.add_option("--group-b-label", group_b, "manifest token for group B");

  int topics = 0, lda_iterations = 0, lda_burn_in = 0;
  double alpha = 0.0, beta = 0.0;
  int k_min = 0, k_max = 0;
  std::string direction;
  std::vector<std::string> targets;
  int predict_k = 0, folds = 0;
  double perplexity = 0.0;
  int min_count = 0;

  auto* cmd_preprocess = app.add_subcommand("preprocess", "build and cache the document-term matrix");
  auto* opt_min_count = cmd_preprocess->add_option("--min-count", min_count, "vocabulary frequency threshold");

  auto* cmd_wordfreq = app.add_subcommand("wordfreq", "word-group frequency comparison");

  auto* cmd_sentiment = app.add_subcommand("sentiment", "lexicon sentiment comparison around target words");
  auto* opt_targets = cmd_sentiment->add_option("--target", targets, "target word (repeatable)");

  auto* cmd_topics = app.add_subcommand("topics", "topic model operations");
  cmd_topics->require_subcommand(1);
  auto* cmd_topics_fit = cmd_topics->add_subcommand("fit", "fit the topic model");
  auto* opt_topics = cmd_topics_fit->add_option("-k,--topics", topics, "number of topics");
  auto* opt_alpha = cmd_topics_fit->add_option("--alpha", alpha, "document-topic prior (default 50/K)");
  auto* opt_beta = cmd_topics_fit->add_option("--beta", beta, "topic-word prior");
  auto* opt_iters = cmd_topics_fit->add_option("--iterations", lda_iterations, "sampler sweeps");
  auto* opt_burn = cmd_topics_fit->add_option("--burn-in", lda_burn_in, "burn-in sweeps");
  auto* cmd_topics_summary = cmd_topics->add_subcommand("summary", "per-topic top terms by relevance");

  auto* cmd_compare = app.add_subcommand("compare", "comparative topic modelling");
  cmd_compare->require_subcommand(1);
  auto* cmd_sweep = cmd_compare->add_subcommand("sweep", "distance sweep over K");
  auto* opt_kmin = cmd_sweep->add_option("--k-min", k_min, "smallest K");
  auto* opt_kmax = cmd_sweep->add_option("--k-max", k_max, "largest K");
  auto* opt_dir = cmd_sweep->add_option("--direction", direction, "both | split_A | split_B");
  auto* cmd_scores = cmd_compare->add_subcommand("scores", "per-topic score table with t-tests");

  auto* cmd_embed = app.add_subcommand("embed", "t-SNE embedding of topic distributions");
  auto* opt_perp = cmd_embed->add_option("--perplexity", perplexity, "t-SNE perplexity");

  auto* cmd_predict = app.add_subcommand("predict", "kNN group prediction");
  cmd_predict->require_subcommand(1);
  auto* cmd_cv = cmd_predict->add_subcommand("cv", "cross-validated accuracy per k");
  auto* opt_folds = cmd_cv->add_option("--folds", folds, "cross-validation folds");
  auto* cmd_label = cmd_predict->add_subcommand("label", "label unknown-group documents");
  auto* opt_pk = cmd_label->add_option("-k", predict_k, "neighbours (default: cv argmax)");

  auto* cmd_report = app.add_subcommand("report", "full pipeline + bundled report.json");

  CLI11_PARSE(app, argc, argv);

  corpusdiff::Pipeline* pipeline = nullptr;
  try {
    corpusdiff::RunConfig cfg;
    if (!config_file.empty()) cfg = corpusdiff::load_run_config(config_file);
    if (opt_manifest->count()) cfg.manifest = manifest;
    if (opt_repl->count()) cfg.replacements = replacements;
    if (opt_stop->count()) cfg.stopwords = stopwords;
    if (opt_lex->count()) cfg.lexicon = lexicon;
    if (opt_excl->count()) cfg.exclusions = exclusions;
    if (opt_wg->count()) cfg.wordgroups = wordgroups;
    if (opt_out->count()) cfg.output_dir = output_dir;
    if (opt_seed->count()) cfg.seed = seed;
    if (opt_ga->count()) cfg.group_a_label = group_a;
    if (opt_gb->count()) cfg.group_b_label = group_b;
    if (opt_min_count->count()) cfg.min_count = min_count;
    if (opt_topics->count()) cfg.lda.topics = topics;
    if (opt_alpha->count()) cfg.lda.alpha = alpha;
    if (opt_beta->count()) cfg.lda.beta = beta;
    if (opt_iters->count()) cfg.lda.iterations = lda_iterations;
    if (opt_burn->count()) cfg.lda.burn_in = lda_burn_in;
    if (opt_kmin->count()) cfg.sweep_k_min = k_min;
    if (opt_kmax->count()) cfg.sweep_k_max = k_max;
    if (opt_dir->count()) cfg.sweep_direction = direction;
    if (opt_targets->count()) cfg.sentiment_targets = targets;
    if (opt_perp->count()) cfg.tsne.perplexity = perplexity;
    if (opt_folds->count()) cfg.knn_folds = folds;
    if (opt_pk->count()) cfg.predict_k = predict_k;

    static corpusdiff::Pipeline p(cfg);
    pipeline = &p;

    if (cmd_preprocess->parsed()) p.preprocess();
    else if (cmd_wordfreq->parsed()) p.wordfreq();
    else if (cmd_sentiment->parsed()) p.sentiment();
    else if (cmd_topics->parsed() && cmd_topics_fit->parsed()) p.topics_fit();
    else if (cmd_topics->parsed() && cmd_topics_summary->parsed()) p.topics_summary();
    else if (cmd_compare->parsed() && cmd_sweep->parsed()) p.compare_sweep();
    else if (cmd_compare->parsed() && cmd_scores->parsed()) p.compare_scores();
    else if (cmd_embed->parsed()) p.embed();
    else if (cmd_predict->parsed() && cmd_cv->parsed()) p.predict_cv();
    else if (cmd_predict->parsed() && cmd_label->parsed()) p.predict_label();
    else if (cmd_report->parsed()) p.report();

    for (const auto& path : p.artifacts())
      std::cout << "wrote " << path.string() << "\n";
    return 0;
  } catch (const std::exception& e) {
    if (pipeline) pipeline->remove_artifacts();
    std::cerr << "error: " << one_line(e.what()) << "\n";
    return 1;
  }
}
