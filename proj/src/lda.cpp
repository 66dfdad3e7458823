#include "corpusdiff/lda.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "corpusdiff/csv.hpp"
#include "corpusdiff/error.hpp"
#include "corpusdiff/rng.hpp"

namespace corpusdiff {

using nlohmann::json;

void LdaConfig::validate() const {
  if (topics < 1) throw Error("lda config: topics must be >= 1");
  if (!(effective_alpha() > 0.0)) throw Error("lda config: alpha must be > 0");
  if (!(beta > 0.0)) throw Error("lda config: beta must be > 0");
  if (burn_in < 0) throw Error("lda config: burn_in must be >= 0");
  if (iterations <= burn_in)
    throw Error("lda config: iterations must exceed burn_in");
}

namespace {

// Token stream per document, term ids ascending; order within a document is
// irrelevant to the collapsed sampler but must be deterministic.
std::vector<std::vector<int>> expand_tokens(const DocTermMatrix& dtm) {
  std::vector<std::vector<int>> docs(dtm.n_docs());
  for (std::size_t d = 0; d < dtm.n_docs(); ++d) {
    docs[d].reserve(dtm.row_sum(d));
    for (const auto& [term, count] : dtm.rows[d])
      for (int c = 0; c < count; ++c) docs[d].push_back(term);
  }
  return docs;
}

}  // namespace

TopicModel fit_lda(const Vocabulary& vocab, const DocTermMatrix& dtm,
                   const LdaConfig& config) {
  config.validate();
  if (dtm.n_docs() == 0) throw Error("fit_lda: empty corpus");
  if (vocab.size() != dtm.n_terms)
    throw Error("fit_lda: vocabulary size does not match matrix");
  if (vocab.size() == 0) throw Error("fit_lda: empty vocabulary");

  const int K = config.topics;
  const std::size_t V = vocab.size();
  const std::size_t D = dtm.n_docs();
  const double alpha = config.effective_alpha();
  const double beta = config.beta;
  const double v_beta = static_cast<double>(V) * beta;

  const auto docs = expand_tokens(dtm);
  std::vector<std::vector<int>> z(D);
  std::vector<std::vector<int>> n_dk(D, std::vector<int>(K, 0));
  std::vector<std::vector<int>> n_kw(K, std::vector<int>(V, 0));
  std::vector<int> n_k(K, 0);

  Rng rng(config.seed);
  for (std::size_t d = 0; d < D; ++d) {
    z[d].resize(docs[d].size());
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(K)));
      z[d][i] = k;
      ++n_dk[d][k];
      ++n_kw[k][docs[d][i]];
      ++n_k[k];
    }
  }

  std::vector<double> cdf(K);
  for (int iter = 0; iter < config.iterations; ++iter) {
    for (std::size_t d = 0; d < D; ++d) {
      auto& zd = z[d];
      auto& nd = n_dk[d];
      const auto& wd = docs[d];
      for (std::size_t i = 0; i < wd.size(); ++i) {
        const int w = wd[i];
        const int old_k = zd[i];
        --nd[old_k];
        --n_kw[old_k][w];
        --n_k[old_k];

        double total = 0.0;
        for (int k = 0; k < K; ++k) {
          total += (nd[k] + alpha) * (n_kw[k][w] + beta) / (n_k[k] + v_beta);
          cdf[k] = total;
        }
        const double u = rng.uniform01() * total;
        int new_k = K - 1;
        for (int k = 0; k < K; ++k) {
          if (u < cdf[k]) {
            new_k = k;
            break;
          }
        }
        zd[i] = new_k;
        ++nd[new_k];
        ++n_kw[new_k][w];
        ++n_k[new_k];
      }
    }
  }

  TopicModel model;
  model.config = config;
  model.config.alpha = alpha;  // pin the value actually used
  model.vocab = vocab;
  model.doc_ids = dtm.doc_ids;
  model.doc_groups = dtm.doc_groups;

  model.phi.assign(static_cast<std::size_t>(K), std::vector<double>(V, 0.0));
  for (int k = 0; k < K; ++k) {
    const double denom = n_k[k] + v_beta;
    for (std::size_t w = 0; w < V; ++w)
      model.phi[static_cast<std::size_t>(k)][w] = (n_kw[k][w] + beta) / denom;
  }

  model.theta.assign(D, std::vector<double>(static_cast<std::size_t>(K), 0.0));
  for (std::size_t d = 0; d < D; ++d) {
    const double nd = static_cast<double>(docs[d].size());
    if (docs[d].empty()) {
      for (int k = 0; k < K; ++k)
        model.theta[d][static_cast<std::size_t>(k)] = 1.0 / K;
      model.empty_docs.push_back(d);
      continue;
    }
    const double denom = nd + K * alpha;
    for (int k = 0; k < K; ++k)
      model.theta[d][static_cast<std::size_t>(k)] = (n_dk[d][k] + alpha) / denom;
  }

  model.word_marginals.assign(V, 0.0);
  const double total_tokens = static_cast<double>(dtm.total_tokens());
  if (total_tokens > 0) {
    for (std::size_t d = 0; d < D; ++d)
      for (const auto& [term, count] : dtm.rows[d])
        model.word_marginals[static_cast<std::size_t>(term)] += count;
    for (double& p : model.word_marginals) p /= total_tokens;
  }
  return model;
}

std::vector<double> infer_theta(const TopicModel& model,
                                const std::vector<std::string>& tokens,
                                int iterations, std::uint64_t seed,
                                bool* all_oov) {
  const int K = model.k();
  if (K < 1 || model.phi.empty()) throw Error("infer_theta: model not fitted");
  if (iterations < 1) throw Error("infer_theta: iterations must be >= 1");

  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& tok : tokens) {
    const int id = model.vocab.id_of(tok);
    if (id >= 0) ids.push_back(id);  // unseen words are ignored by design
  }
  if (all_oov) *all_oov = ids.empty();
  if (ids.empty())
    return std::vector<double>(static_cast<std::size_t>(K), 1.0 / K);

  const double alpha = model.config.effective_alpha();
  Rng rng(seed);
  std::vector<int> z(ids.size());
  std::vector<int> nd(static_cast<std::size_t>(K), 0);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(K)));
    z[i] = k;
    ++nd[static_cast<std::size_t>(k)];
  }

  std::vector<double> cdf(static_cast<std::size_t>(K));
  for (int iter = 0; iter < iterations; ++iter) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const int w = ids[i];
      --nd[static_cast<std::size_t>(z[i])];
      double total = 0.0;
      for (int k = 0; k < K; ++k) {
        total += (nd[static_cast<std::size_t>(k)] + alpha) *
                 model.phi[static_cast<std::size_t>(k)][static_cast<std::size_t>(w)];
        cdf[static_cast<std::size_t>(k)] = total;
      }
      const double u = rng.uniform01() * total;
      int new_k = K - 1;
      for (int k = 0; k < K; ++k) {
        if (u < cdf[static_cast<std::size_t>(k)]) {
          new_k = k;
          break;
        }
      }
      z[i] = new_k;
      ++nd[static_cast<std::size_t>(new_k)];
    }
  }

  std::vector<double> theta(static_cast<std::size_t>(K));
  const double denom = static_cast<double>(ids.size()) + K * alpha;
  for (int k = 0; k < K; ++k)
    theta[static_cast<std::size_t>(k)] = (nd[static_cast<std::size_t>(k)] + alpha) / denom;
  return theta;
}

RelevanceRanking relevance(const TopicModel& model, int topic, double lambda) {
  if (topic < 0 || topic >= model.k()) throw Error("relevance: topic out of range");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw Error("relevance: lambda must be in [0, 1]");

  RelevanceRanking out;
  out.topic = topic;
  out.lambda = lambda;
  const auto& phi_k = model.phi[static_cast<std::size_t>(topic)];
  out.terms.reserve(model.vocab_size());
  for (std::size_t w = 0; w < model.vocab_size(); ++w) {
    const double pw = model.word_marginals[w];
    if (!(pw > 0.0))
      throw Error("relevance: zero corpus marginal for term `" + model.vocab.terms[w] + "`");
    const double r =
        lambda * std::log(phi_k[w]) + (1.0 - lambda) * std::log(phi_k[w] / pw);
    out.terms.emplace_back(model.vocab.terms[w], r);
  }
  std::sort(out.terms.begin(), out.terms.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  return out;
}

std::vector<TopicSummaryEntry> topic_summary(const TopicModel& model,
                                             const std::vector<double>& lambdas,
                                             std::size_t top_n) {
  const std::size_t n = std::min(top_n, model.vocab_size());
  std::vector<TopicSummaryEntry> rows;
  for (int k = 0; k < model.k(); ++k) {
    for (const double lambda : lambdas) {
      const RelevanceRanking ranking = relevance(model, k, lambda);
      for (std::size_t i = 0; i < n; ++i) {
        TopicSummaryEntry e;
        e.topic = k;
        e.lambda = lambda;
        e.rank = static_cast<int>(i) + 1;
        e.term = ranking.terms[i].first;
        e.relevance = ranking.terms[i].second;
        rows.push_back(std::move(e));
      }
    }
  }
  return rows;
}

namespace {

constexpr const char* kModelFormat = "corpusdiff-lda";
constexpr int kModelVersion = 1;

Group group_from_name(const std::string& name) {
  if (name == "A") return Group::A;
  if (name == "B") return Group::B;
  if (name == "unknown") return Group::Unknown;
  throw Error("unknown group name in file: " + name);
}

}  // namespace

void save_model(const std::filesystem::path& path, const TopicModel& model,
                const std::string& config_hash, std::uint64_t master_seed) {
  json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["config_hash"] = config_hash;
  j["seed"] = master_seed;
  json cfg;
  cfg["topics"] = model.config.topics;
  cfg["alpha"] = model.config.alpha;
  cfg["beta"] = model.config.beta;
  cfg["iterations"] = model.config.iterations;
  cfg["burn_in"] = model.config.burn_in;
  cfg["lda_seed"] = model.config.seed;
  if (model.config.doc_length_rate)
    cfg["doc_length_rate"] = *model.config.doc_length_rate;
  else
    cfg["doc_length_rate"] = nullptr;
  j["config"] = std::move(cfg);
  j["vocabulary"] = model.vocab.terms;
  j["phi"] = model.phi;
  j["theta"] = model.theta;
  j["word_marginals"] = model.word_marginals;
  j["doc_ids"] = model.doc_ids;
  json groups = json::array();
  for (const Group g : model.doc_groups) groups.push_back(group_name(g));
  j["doc_groups"] = std::move(groups);
  j["empty_docs"] = model.empty_docs;
  write_text_file(path, j.dump() + "\n");
}

TopicModel load_model(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw Error("model parse failed: " + std::string(e.what()));
  }
  if (j.value("format", "") != kModelFormat || j.value("version", -1) != kModelVersion)
    throw Error("model file has wrong format/version: " + path.string());

  TopicModel model;
  const auto& cfg = j.at("config");
  model.config.topics = cfg.at("topics").get<int>();
  model.config.alpha = cfg.at("alpha").get<double>();
  model.config.beta = cfg.at("beta").get<double>();
  model.config.iterations = cfg.at("iterations").get<int>();
  model.config.burn_in = cfg.at("burn_in").get<int>();
  model.config.seed = cfg.at("lda_seed").get<std::uint64_t>();
  if (!cfg.at("doc_length_rate").is_null())
    model.config.doc_length_rate = cfg.at("doc_length_rate").get<double>();
  model.vocab = Vocabulary::from_terms(j.at("vocabulary").get<std::vector<std::string>>());
  model.phi = j.at("phi").get<std::vector<std::vector<double>>>();
  model.theta = j.at("theta").get<std::vector<std::vector<double>>>();
  model.word_marginals = j.at("word_marginals").get<std::vector<double>>();
  model.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
  for (const auto& g : j.at("doc_groups"))
    model.doc_groups.push_back(group_from_name(g.get<std::string>()));
  model.empty_docs = j.at("empty_docs").get<std::vector<std::size_t>>();
  return model;
}

}  // namespace corpusdiff
