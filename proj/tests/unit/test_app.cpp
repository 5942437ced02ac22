#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ascnet/app/run.hpp"
#include "ascnet/calib/metrics.hpp"
#include "ascnet/common/error.hpp"
#include "ascnet/common/log.hpp"
#include "doctest.h"

using namespace ascnet;
using namespace ascnet::app;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("ascnet_test_app_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const fs::path& p, const std::string& body) {
  std::ofstream(p, std::ios::binary) << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path sample(const std::string& name) { return fs::path(ASCNET_SOURCE_DIR) / "data" / "sample" / name; }

template <class Fn>
std::string error_text(Fn fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("task specs") {
  const auto voc = TaskSpec::make("V-oc");
  CHECK(voc.classes() == 7);
  CHECK(voc.class_values() == std::vector<double>{-3, -2, -1, 0, 1, 2, 3});
  CHECK(voc.metric() == "pearson");
  CHECK(voc.class_to_unit(-3) == 0.0);
  CHECK(voc.class_to_unit(3) == 1.0);
  CHECK(voc.class_to_unit(0) == 0.5);
  const auto eioc = TaskSpec::make("EI-oc", "joy");
  CHECK(eioc.classes() == 4);
  CHECK(eioc.dimension() == "joy");
  CHECK(eioc.class_to_unit(1) == doctest::Approx(1.0 / 3.0));
  CHECK(TaskSpec::make("E-c").metric() == "jaccard");
  CHECK(TaskSpec::make("EI-reg", "fear").metric() == "pearson");
  CHECK_THROWS_AS(TaskSpec::make("EI-reg"), UsageError);
  CHECK_THROWS_AS(TaskSpec::make("EI-reg", "disgust"), UsageError);
  CHECK_THROWS_AS(TaskSpec::make("V-reg", "joy"), UsageError);
  CHECK_THROWS_AS(TaskSpec::make("V-regression"), UsageError);
}

TEST_CASE("ingest formats") {
  const auto dir = scratch("ingest");
  auto reg = ingest(write_file(dir / "reg.txt", "ID\tTweet\tAffect Dimension\tIntensity Score\n"
                                                "a1\tgood day\tvalence\t0.75\n"
                                                "a2\tbad day\tvalence\t0.125\r\n"),
                    Format::semeval, {TaskSpec::make("V-reg"), false});
  REQUIRE(reg.rows.size() == 2);
  CHECK(reg.rows[1].label == 0.125);
  CHECK(reg.rows[0].dimension == "valence");
  CHECK_FALSE(reg.ordinal);

  auto oc = ingest(write_file(dir / "oc.txt", "b1\tyay\tjoy\t3: high amount of joy can be inferred\n"
                                              "b2\tmeh\tjoy\t0: no joy can be inferred\n"),
                   Format::semeval, {TaskSpec::make("EI-oc", "joy"), false});
  CHECK(oc.ordinal);
  CHECK(oc.labels() == std::vector<double>{3, 0});

  auto three = ingest(write_file(dir / "three.tsv", "c1\tok\t1\nc2\tno\t-1\nc3\thm\t0\n"), Format::three_class);
  CHECK(three.labels() == std::vector<double>{1, -1, 0});

  std::string header = "ID\tTweet";
  for (const auto& e : heads::kEmotionLabels) header += "\t" + e;
  auto ml = ingest(write_file(dir / "ec.txt", header + "\nd1\tgrr\t1\t0\t0\t0\t0\t0\t0\t0\t0\t0\t1\n"), Format::multilabel,
                   {TaskSpec::make("E-c"), false});
  CHECK(ml.label_matrix().rows == 1);
  CHECK(ml.label_matrix()(0, 10) == 1.0);
}

TEST_CASE("ingest errors carry line numbers") {
  const auto dir = scratch("ingest_err");
  const auto voc = IngestOptions{TaskSpec::make("V-oc"), false};
  CHECK_THROWS_AS(ingest(write_file(dir / "empty.txt", ""), Format::semeval), DataError);
  CHECK_THROWS_AS(ingest(dir / "missing.txt", Format::semeval), DataError);
  auto msg = error_text([&] {
    ingest(write_file(dir / "short.txt", "a\tfine\tvalence\t1: x\nb\tbroken row\n"), Format::semeval, voc);
  });
  CHECK(msg.find("short.txt:2") != std::string::npos);
  msg = error_text([&] {
    ingest(write_file(dir / "dom.txt", "a\tx\tvalence\t1: x\nb\ty\tvalence\t4: x\n"), Format::semeval, voc);
  });
  CHECK(msg.find("dom.txt:2") != std::string::npos);
  CHECK_THROWS_AS(ingest(write_file(dir / "dup.txt", "a\tx\t1\na\ty\t0\n"), Format::three_class), DataError);
  CHECK_THROWS_AS(ingest(write_file(dir / "dim.txt", "a\tx\tanger\t0.5\n"), Format::semeval,
                         {TaskSpec::make("EI-reg", "fear"), false}),
                  DataError);
  CHECK_THROWS_AS(ingest(write_file(dir / "score.txt", "a\tx\tvalence\t1.5\n"), Format::semeval,
                         {TaskSpec::make("V-reg"), false}),
                  DataError);
  CHECK_THROWS_AS(ingest(write_file(dir / "five.tsv", "a\tx\t2\n"), Format::three_class), DataError);
}

TEST_CASE("five labels compress to three") {
  const auto dir = scratch("five");
  const auto p = write_file(dir / "five.tsv", "a\tx\t-2\nb\tx\t-1\nc\tx\t0\nd\tx\t1\ne\tx\t2\n");
  const auto d = ingest(p, Format::three_class, {std::nullopt, true});
  CHECK(d.labels() == std::vector<double>{-1, -1, 0, 1, 1});
  CHECK_THROWS_AS(ingest(write_file(dir / "six.tsv", "a\tx\t3\n"), Format::three_class, {std::nullopt, true}),
                  DataError);
}

TEST_CASE("class distribution of the combined sentiment corpus") {
  const auto dir = scratch("dist");
  std::ofstream out(dir / "corpus.tsv");
  const std::pair<int, int> counts[] = {{1, 30097}, {0, 35818}, {-1, 22708}};
  std::size_t id = 0;
  for (auto [label, n] : counts)
    for (int i = 0; i < n; ++i) out << "t" << id++ << "\tsome text\t" << label << '\n';
  out.close();
  const auto report = distribution_report(ingest(dir / "corpus.tsv", Format::three_class));
  CHECK(report.find("positive: 30097 (34%)") != std::string::npos);
  CHECK(report.find("neutral: 35818 (40%)") != std::string::npos);
  CHECK(report.find("negative: 22708 (26%)") != std::string::npos);
  CHECK(report.find("total: 88623") != std::string::npos);
}

TEST_CASE("config files") {
  const auto dir = scratch("config");
  write_file(dir / "train.txt", "a\tx\tvalence\t0.5\n");
  const auto good = write_file(dir / "run.ini", "[run]\nseed = 42\ntask = EI-reg\nemotion = fear\nout_dir = out\n"
                                                "[data]\ntrain = train.txt\n[features]\nasc = false\n"
                                                "[head]\nepochs = 3\n[embeddings]\nw2v_200 = vec.txt\n");
  const auto cfg = RunConfig::load(good);
  CHECK(cfg.seed == 42);
  CHECK(cfg.task_spec().emotion == "fear");
  CHECK(cfg.train == dir / "train.txt");
  CHECK(cfg.out_dir == dir / "out");
  CHECK(cfg.head_epochs == 3);
  CHECK(cfg.embeddings.at("w2v_200") == dir / "vec.txt");
  // The embedding file does not exist.
  CHECK_THROWS_AS(cfg.validate(), UsageError);

  auto msg = error_text([&] { RunConfig::load(write_file(dir / "bad.ini", "[run]\nseed = 1\nsede = 2\n")); });
  CHECK(msg.find("[run] sede") != std::string::npos);
  CHECK_THROWS_AS(RunConfig::load(write_file(dir / "sect.ini", "[model]\nx = 1\n")), UsageError);
  CHECK_THROWS_AS(RunConfig::load(write_file(dir / "num.ini", "[run]\nseed = many\n")), UsageError);
  CHECK_THROWS_AS(RunConfig::load(dir / "absent.ini"), UsageError);

  auto a = cfg, b = cfg;
  b.out_dir = "/elsewhere";
  b.threads = 7;
  CHECK(a.digest() == b.digest());
  b.seed = 43;
  CHECK(a.digest() != b.digest());

  RunConfig off;
  off.lexical = off.asc = off.distant = false;
  CHECK_THROWS_AS(off.validate(), UsageError);
}

TEST_CASE("predictions round trip and evaluation") {
  const auto dir = scratch("eval");
  const auto gold_path = write_file(dir / "gold.txt", "x1\ta\tvalence\t0.1\nx2\tb\tvalence\t0.4\nx3\tc\tvalence\t0.9\n");
  const auto task = TaskSpec::make("V-reg");
  const auto gold = ingest(gold_path, Format::semeval, {task, false});

  Predictions p;
  p.ids = {"x3", "x1", "x2"};
  p.scores = {0.9, 0.1, 0.4};
  write_predictions(dir / "pred.tsv", p, task);
  const auto back = read_predictions(dir / "pred.tsv", task);
  CHECK(back.ids == p.ids);
  CHECK(back.scores == p.scores);
  const auto e = evaluate(back, gold, task);
  CHECK(e.metric == "pearson");
  CHECK(e.value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e.n == 3);

  p.ids = {"x1", "x2", "x4"};
  const auto msg = error_text([&] { evaluate(p, gold, task); });
  CHECK(msg.find("x4") != std::string::npos);
  p.ids = {"x1", "x2"};
  p.scores = {0.1, 0.4};
  CHECK(error_text([&] { evaluate(p, gold, task); }).find("x3") != std::string::npos);

  const auto ec = TaskSpec::make("E-c");
  Predictions m;
  m.ids = {"y1", "y2"};
  m.flags = Matrix(2, 11);
  m.flags(0, 0) = m.flags(0, 4) = 1;
  m.flags(1, 8) = 1;
  write_predictions(dir / "ec.tsv", m, ec);
  const auto mb = read_predictions(dir / "ec.tsv", ec);
  CHECK(mb.flags.data == m.flags.data);
}

TEST_CASE("EI evaluation macro-averages the emotion files") {
  const auto dir = scratch("macro");
  const auto g1 = write_file(dir / "anger.txt", "a1\tt\tanger\t0.1\na2\tt\tanger\t0.5\na3\tt\tanger\t0.9\n");
  const auto g2 = write_file(dir / "joy.txt", "j1\tt\tjoy\t0.2\nj2\tt\tjoy\t0.3\nj3\tt\tjoy\t0.4\nj4\tt\tjoy\t0.5\n");
  const auto p1 = write_file(dir / "p_anger.tsv", "a1\t0.2\na2\t0.5\na3\t0.8\n");
  // Pearson of (1,2,3,4) with (1,3,2,4) is 0.8.
  const auto p2 = write_file(dir / "p_joy.tsv", "j1\t0.1\nj2\t0.3\nj3\t0.2\nj4\t0.4\n");
  RunConfig cfg;
  cfg.task = "EI-reg";
  const auto rep = evaluate_files({p1, p2}, {g1, g2}, cfg);
  REQUIRE(rep.parts.size() == 2);
  CHECK(rep.parts[0].first == "anger");
  CHECK(rep.parts[0].second.value == doctest::Approx(1.0));
  CHECK(rep.parts[1].second.value == doctest::Approx(0.8));
  REQUIRE(rep.macro_average);
  CHECK(*rep.macro_average == doctest::Approx(0.9));
  CHECK(rep.text().find("macro-average") != std::string::npos);
  CHECK_THROWS_AS(evaluate_files({p1}, {g1, g2}, cfg), UsageError);
}

TEST_CASE("output lock, manifest and stage errors") {
  const auto dir = scratch("lock");
  {
    OutputLock lock(dir);
    CHECK_THROWS_AS(OutputLock{dir}, UsageError);
  }
  CHECK_NOTHROW(OutputLock{dir});

  const auto f = write_file(dir / "a.txt", "hello");
  Manifest m(dir, 5, "abc");
  m.record("a", f);
  const auto first = slurp(dir / "run_manifest.json");
  CHECK(first.find("\"a.txt\"") != std::string::npos);
  Manifest again(dir, 5, "abc");
  again.record("a", f);
  CHECK(slurp(dir / "run_manifest.json") == first);
  Manifest other(dir, 6, "abc");
  CHECK(other.json()["artifacts"].empty());

  CHECK_THROWS_AS(in_stage("featurize", [] { throw DataError("bad row"); }), DataError);
  CHECK(error_text([] { in_stage("featurize", [] { throw NumericalError("nan"); }); }) == "featurize: nan");
  CHECK(in_stage("x", [] { return 4; }) == 4);
}

TEST_CASE("pipeline on the sample data") {
  log::set_level(log::Level::warn);
  SUBCASE("V-oc predicts seven classes") {
    auto cfg = RunConfig::load(sample("v_oc.ini"));
    cfg.out_dir = scratch("run_voc");
    const auto s = run_pipeline(cfg);
    CHECK(s.metrics.at("dev").metric == "pearson");
    const auto pred = read_predictions(cfg.out_dir / "predictions_dev.tsv", cfg.task_spec());
    for (double c : pred.scores) CHECK((c >= -3 && c <= 3 && c == std::round(c)));
    CHECK(fs::exists(cfg.out_dir / "thresholds.json"));
    CHECK(fs::exists(cfg.out_dir / "run_manifest.json"));
    CHECK_FALSE(fs::exists(cfg.out_dir / ".lock"));
    // Stages restart from the persisted intermediates.
    const auto b = load_bundle(cfg.out_dir / "head.ckpt");
    const auto t = read_thresholds(cfg.out_dir / "thresholds.json");
    const auto again = finalize(b, predict_raw(b, lex::read_csv(cfg.out_dir / "features_dev.csv")), t);
    CHECK(again.scores == pred.scores);
  }
  SUBCASE("EI-oc predicts four classes with distant features") {
    auto cfg = RunConfig::load(sample("ei_oc_anger.ini"));
    cfg.out_dir = scratch("run_eioc");
    run_pipeline(cfg);
    const auto pred = read_predictions(cfg.out_dir / "predictions_dev.tsv", cfg.task_spec());
    std::set<double> seen(pred.scores.begin(), pred.scores.end());
    for (double c : seen) CHECK((c == 0 || c == 1 || c == 2 || c == 3));
    const auto names = lex::read_csv(cfg.out_dir / "features_train.csv").names;
    CHECK(std::find(names.begin(), names.end(), "ASC_fear_0") != names.end());
  }
  SUBCASE("E-c reports Jaccard") {
    auto cfg = RunConfig::load(sample("e_c.ini"));
    cfg.out_dir = scratch("run_ec");
    const auto s = run_pipeline(cfg);
    CHECK(s.metrics.at("dev").metric == "jaccard");
    CHECK(s.metrics.at("dev").value > 0.0);
    CHECK_FALSE(s.importance_written);
  }
  SUBCASE("an occupied output directory is refused") {
    auto cfg = RunConfig::load(sample("v_reg.ini"));
    cfg.out_dir = scratch("run_locked");
    OutputLock held(cfg.out_dir);
    CHECK_THROWS_AS(run_pipeline(cfg), UsageError);
  }
}
