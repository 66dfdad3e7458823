#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "corpusdiff/csv.hpp"
#include "corpusdiff/error.hpp"
#include "corpusdiff/pipeline.hpp"

using namespace corpusdiff;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() /
                       ("corpusdiff_pipe_" + tag + "_" + std::to_string(::getpid()) +
                        "_" + std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

// two vocabulary families plus two unknown-group documents
fs::path make_corpus_dir() {
  const fs::path dir = temp_dir("corpus");
  const std::string farm =
      "We planted cotton and corn every spring. The mule pulled the plow all "
      "day long. Mother cooked supper after the field work was finished. ";
  const std::string war =
      "The soldiers marched past the court house. Yankees burned the bridge "
      "and the mill that winter. The war took every young man away. ";
  std::ostringstream manifest;
  manifest << "id,path,group,state\n";
  for (int i = 0; i < 7; ++i) {
    const std::string name = "a" + std::to_string(i) + ".txt";
    write(dir / name, farm + (i % 2 ? "Cotton rows went on forever. " : ""));
    manifest << "a" << i << "," << name << ",A,Arkansas\n";
  }
  for (int i = 0; i < 7; ++i) {
    const std::string name = "b" + std::to_string(i) + ".txt";
    write(dir / name, war + (i % 2 ? "Cannon fire shook the windows. " : ""));
    manifest << "b" << i << "," << name << ",B,Arkansas\n";
  }
  for (int i = 0; i < 2; ++i) {
    const std::string name = "u" + std::to_string(i) + ".txt";
    write(dir / name, farm);
    manifest << "u" << i << "," << name << ",unknown,\n";
  }
  write(dir / "manifest.csv", manifest.str());
  write(dir / "lexicon.tsv", "good\t0.7\nbad\t-0.6\nburned\t-0.5\nforever\t0.1\n");
  return dir;
}

RunConfig small_config(const fs::path& corpus_dir, const fs::path& out_dir) {
  RunConfig cfg;
  cfg.manifest = corpus_dir / "manifest.csv";
  cfg.output_dir = out_dir;
  cfg.seed = 2026;
  cfg.min_count = 1;
  cfg.lda.topics = 3;
  cfg.lda.alpha = 0.5;
  cfg.lda.iterations = 80;
  cfg.lda.burn_in = 20;
  cfg.sweep_k_min = 2;
  cfg.sweep_k_max = 4;
  cfg.tsne.perplexity = 3.0;
  cfg.tsne.iterations = 150;
  cfg.tsne.exaggeration_iters = 50;
  cfg.knn_k_values = {1, 3};
  cfg.knn_folds = 3;
  return cfg;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::istringstream in(read_text_file(p));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("config hash: stable and sensitive") {
  const auto dir = make_corpus_dir();
  const auto cfg1 = small_config(dir, temp_dir("h1"));
  auto cfg2 = small_config(dir, temp_dir("h2"));
  CHECK(config_hash(cfg1) == config_hash(cfg2));  // output_dir excluded
  cfg2.seed = 1;
  CHECK(config_hash(cfg1) != config_hash(cfg2));
  auto cfg3 = small_config(dir, temp_dir("h3"));
  cfg3.lda.topics = 4;
  CHECK(config_hash(cfg1) != config_hash(cfg3));
}

TEST_CASE("config file round-trip") {
  const auto dir = temp_dir("cfg");
  write(dir / "run.json", R"({
    "manifest": "m.csv",
    "seed": 99,
    "lda": {"topics": 5, "iterations": 200, "burn_in": 10},
    "sweep": {"k_min": 2, "k_max": 9, "direction": "split_B"},
    "knn": {"k_values": [1, 5], "folds": 4},
    "sentiment_targets": ["master", "overseer"],
    "top_n": 8
  })");
  const RunConfig cfg = load_run_config(dir / "run.json");
  CHECK(cfg.manifest == "m.csv");
  CHECK(cfg.seed == 99);
  CHECK(cfg.lda.topics == 5);
  CHECK(cfg.sweep_direction == "split_B");
  CHECK(cfg.knn_k_values == std::vector<int>{1, 5});
  CHECK(cfg.sentiment_targets == std::vector<std::string>{"master", "overseer"});
  CHECK(cfg.top_n == 8);
}

TEST_CASE("subcommands emit schema-exact artifacts") {
  const auto corpus_dir = make_corpus_dir();
  const auto out = temp_dir("art");
  auto cfg = small_config(corpus_dir, out);
  cfg.lexicon = corpus_dir / "lexicon.tsv";
  cfg.sentiment_targets = {"cotton"};
  Pipeline pipe(cfg);

  pipe.preprocess();
  CHECK(fs::exists(out / "dtm.json"));
  const auto dtm_json = nlohmann::json::parse(read_text_file(out / "dtm.json"));
  CHECK(dtm_json["format"] == "corpusdiff-dtm");
  CHECK(dtm_json["config_hash"] == pipe.hash());
  CHECK(dtm_json["doc_ids"].size() == 16);

  pipe.wordfreq();
  const auto wf = lines_of(out / "wordfreq.csv");
  REQUIRE(wf.size() >= 2);
  CHECK(wf[0] == "# config=" + pipe.hash() + " seed=2026");
  CHECK(wf[1] == "group,mean_A,mean_B,rate_A,rate_B,t,df,p,t_rate,df_rate,p_rate");
  CHECK(wf.size() == 2 + 7);  // seven default groups
  const auto dl = lines_of(out / "doc_lengths.csv");
  CHECK(dl[1] == "group,mean_A,mean_B,t,df,p");

  pipe.sentiment();
  const auto sj = nlohmann::json::parse(read_text_file(out / "sentiment.json"));
  REQUIRE(sj["targets"].size() == 1);
  CHECK(sj["targets"][0]["target"] == "cotton");
  CHECK(sj["targets"][0]["n_sentences_A"].get<int>() >= 2);

  pipe.topics_fit();
  CHECK(fs::exists(out / "model.json"));
  pipe.topics_summary();
  const auto ts = lines_of(out / "topic_summary.csv");
  CHECK(ts[1] == "topic,lambda,rank,term,relevance");
  // 3 topics x 3 lambdas x top_n rows (vocabulary is larger than top_n)
  CHECK(ts.size() == 2 + 3 * 3 * 15);

  pipe.compare_sweep();
  for (const std::string name : {"sweep_split_A_test_B", "sweep_split_B_test_A"}) {
    const auto sw = lines_of(out / (name + ".csv"));
    CHECK(sw[1] == "K,baseline,dist");
    CHECK(sw.size() == 2 + 3);  // K = 2, 3, 4
    CHECK(fs::exists(out / (name + ".svg")));
  }

  pipe.compare_scores();
  const auto sc = lines_of(out / "topic_scores.csv");
  CHECK(sc[1] == "topic,mean_A,mean_B,score,t,df,p");
  CHECK(sc.size() == 2 + 3);
  const auto tw = lines_of(out / "topic_scores_topwords.csv");
  CHECK(tw[1] == "topic,rank,term");

  pipe.embed();
  const auto em = lines_of(out / "embedding.csv");
  CHECK(em[1] == "doc_id,x,y,group");
  CHECK(em.size() == 2 + 16);
  std::size_t unknown_rows = 0;
  for (const auto& line : em)
    if (line.find(",unknown") != std::string::npos) ++unknown_rows;
  CHECK(unknown_rows == 2);
  CHECK(fs::exists(out / "embedding.svg"));

  pipe.predict_cv();
  const auto cv = lines_of(out / "knn_cv.csv");
  CHECK(cv[1].rfind("# best_k=", 0) == 0);
  CHECK(cv[2] == "k,accuracy");
  CHECK(cv.size() == 3 + 2);  // k = 1 and 3

  pipe.predict_label();
  const auto pr = lines_of(out / "predictions.csv");
  CHECK(pr[1] == "doc_id,predicted_group,margin");
  REQUIRE(pr.size() == 2 + 2);
  for (std::size_t i = 2; i < pr.size(); ++i) {
    CHECK(pr[i].rfind("u", 0) == 0);
    const bool labeled = pr[i].find(",A,") != std::string::npos ||
                         pr[i].find(",B,") != std::string::npos;
    CHECK(labeled);
  }
}

TEST_CASE("report: full pipeline bundles sections and reruns byte-identically") {
  const auto corpus_dir = make_corpus_dir();
  const auto out1 = temp_dir("rep1");
  const auto out2 = temp_dir("rep2");
  auto cfg1 = small_config(corpus_dir, out1);
  auto cfg2 = small_config(corpus_dir, out2);
  cfg1.lexicon = corpus_dir / "lexicon.tsv";
  cfg2.lexicon = corpus_dir / "lexicon.tsv";
  cfg1.sentiment_targets = {"cotton"};
  cfg2.sentiment_targets = {"cotton"};

  Pipeline p1(cfg1), p2(cfg2);
  p1.report();
  p2.report();

  const auto report = nlohmann::json::parse(read_text_file(out1 / "report.json"));
  CHECK(report["config_hash"] == p1.hash());
  for (const std::string section :
       {"preprocess", "wordfreq", "sentiment", "topics_fit", "topics_summary",
        "compare_sweep", "compare_scores", "embed", "predict_cv", "predict_label"})
    CHECK(report["sections"].contains(section));

  std::set<std::string> names;
  for (const auto& entry : fs::directory_iterator(out1))
    names.insert(entry.path().filename().string());
  CHECK(names.count("run.json") == 1);

  for (const auto& name : names) {
    CAPTURE(name);
    REQUIRE(fs::exists(out2 / name));
    if (name == "run.json") continue;  // carries wall-clock timings
    std::string c1 = read_text_file(out1 / name);
    std::string c2 = read_text_file(out2 / name);
    if (name == "report.json") {
      // the timestamp line is the single allowed difference
      auto strip = [](const std::string& s) {
        std::istringstream in(s);
        std::string line, out_str;
        while (std::getline(in, line))
          if (line.find("\"timestamp\"") == std::string::npos) out_str += line + "\n";
        return out_str;
      };
      c1 = strip(c1);
      c2 = strip(c2);
    }
    CHECK(c1 == c2);
  }
}

TEST_CASE("pipeline errors: missing inputs and partial-output cleanup") {
  const auto corpus_dir = make_corpus_dir();
  const auto out = temp_dir("err");
  auto cfg = small_config(corpus_dir, out);

  SUBCASE("missing manifest") {
    cfg.manifest = corpus_dir / "absent.csv";
    Pipeline pipe(cfg);
    CHECK_THROWS_AS(pipe.wordfreq(), Error);
  }
  SUBCASE("sentiment without a lexicon") {
    Pipeline pipe(cfg);
    CHECK_THROWS_AS(pipe.sentiment(), Error);
  }
  SUBCASE("remove_artifacts clears this run's outputs") {
    Pipeline pipe(cfg);
    pipe.preprocess();
    pipe.wordfreq();
    CHECK(fs::exists(out / "wordfreq.csv"));
    pipe.remove_artifacts();
    CHECK(!fs::exists(out / "wordfreq.csv"));
    CHECK(!fs::exists(out / "dtm.json"));
  }
}

TEST_CASE("cli binary: smoke and failure behavior") {
  const char* cli = std::getenv("CORPUSDIFF_CLI");
  REQUIRE_MESSAGE(cli != nullptr, "CORPUSDIFF_CLI must point at the binary");
  const auto corpus_dir = make_corpus_dir();
  const auto out = temp_dir("cli");

  SUBCASE("wordfreq runs end to end") {
    const std::string cmd = std::string(cli) + " wordfreq --manifest " +
                            (corpus_dir / "manifest.csv").string() +
                            " --output-dir " + out.string() +
                            " --seed 7 > /dev/null 2>&1";
    CHECK(std::system(cmd.c_str()) == 0);
    CHECK(fs::exists(out / "wordfreq.csv"));
  }
  SUBCASE("failures exit nonzero with a one-line error and no partial outputs") {
    const auto err_file = out / "stderr.txt";
    // one A document: preprocess succeeds, the comparison then fails
    write(corpus_dir / "tiny.csv",
          "id,path,group,state\nn1,a0.txt,A,\nn2,b0.txt,B,\nn3,b1.txt,B,\n");
    const std::string cmd = std::string(cli) + " report --manifest " +
                            (corpus_dir / "tiny.csv").string() + " --output-dir " +
                            (out / "partial").string() + " > /dev/null 2> " +
                            err_file.string();
    CHECK(std::system(cmd.c_str()) != 0);
    const auto err_lines = lines_of(err_file);
    REQUIRE(err_lines.size() == 1);
    CHECK(err_lines[0].rfind("error: ", 0) == 0);
    // the partially written dtm cache was cleaned up
    CHECK(!fs::exists(out / "partial" / "dtm.json"));
  }
}
