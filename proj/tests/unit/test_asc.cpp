#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "ascnet/asc/distant.hpp"
#include "ascnet/asc/embeddings.hpp"
#include "ascnet/asc/hidden.hpp"
#include "ascnet/asc/persist.hpp"
#include "ascnet/asc/train.hpp"
#include "ascnet/common/error.hpp"
#include "ascnet/tensor/gradcheck.hpp"
#include "ascnet/text/tokenizer.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace ascnet;
using namespace ascnet::asc;
using tensor::Shape;
using tensor::Tensor;

namespace {

std::vector<double> copy_values(const Tensor& t) { return {t.values().begin(), t.values().end()}; }

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "ascnet_test_asc";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("vocab ordering and encoding") {
  auto v = Vocab::build({{"b", "a", "b"}, {"c", "a", "b"}});
  CHECK(v.size() == 5);
  CHECK(v.word(0) == "<pad>");
  CHECK(v.word(1) == "<unk>");
  CHECK(v.word(2) == "b");
  CHECK(v.word(3) == "a");
  CHECK(v.word(4) == "c");
  CHECK(v.id("zzz") == Vocab::kUnk);

  auto toks = text::pos_tag(text::tokenize("a b zzz"));
  auto e = encode(toks, v, 5);
  CHECK(e.words == std::vector<std::size_t>{3, 2, 1, 0, 0});
  CHECK(e.pos[3] == 0);
  CHECK(e.pos[0] == text::tag_id(toks[0].pos));
  auto t = encode(toks, v, 2);
  CHECK(t.words == std::vector<std::size_t>{3, 2});

  text::Token untagged{"a", '\0', text::TokenKind::Word, {}};
  CHECK_THROWS_AS(encode({untagged}, v, 3), DataError);
}

TEST_CASE("embedding file round trip and table init") {
  EmbeddingFile f;
  f.dim = 2;
  f.words = {"good", "bad"};
  f.values = {0.25, -1.5, 3.0, 1e-7};
  auto path = temp_file("emb.txt");
  f.write(path);
  auto g = EmbeddingFile::read(path);
  CHECK(g.dim == 2);
  CHECK(g.words == f.words);
  CHECK(g.values == f.values);

  auto v = Vocab::from_words({"<pad>", "<unk>", "good", "other"});
  Rng rng(3);
  auto table = init_embedding_table(v, 2, rng, &g);
  CHECK(table.shape() == Shape{4, 2});
  CHECK(table[0] == 0.0);
  CHECK(table[1] == 0.0);
  CHECK(table[4] == 0.25);
  CHECK(table[5] == -1.5);
  for (std::size_t i : {2u, 3u, 6u, 7u}) CHECK(std::abs(table[i]) <= kEmbeddingInitScale);

  CHECK_THROWS_AS(init_embedding_table(v, 3, rng, &g), DataError);
  {
    std::ofstream bad(path);
    bad << "2 2\ngood 1 2\nbad 1\n";
  }
  CHECK_THROWS_AS(EmbeddingFile::read(path), DataError);
}

TEST_CASE("canonical sub-model shape chain") {
  auto c = fixtures::sentiment_corpus(3);
  for (const auto& slot : kSlots) {
    auto cfg = SubModelConfig::canonical(slot);
    Rng rng(1);
    SubModel m(cfg, fixtures::vocab_of(c.tweets, cfg.variant), rng);
    const std::size_t d = cfg.word_embed_dim;
    auto tr = m.trace(m.encode(c.tweets[0]));
    CHECK(tr.inputs.shape() == Shape{40, d + 8});
    CHECK(tr.states.shape() == Shape{40, 400});
    CHECK(tr.attention.shape() == Shape{600});
    CHECK(tr.penultimate.shape() == Shape{1, 30});
    CHECK(tr.probs.shape() == Shape{1, 3});
    CHECK(m.pos_table().shape() == Shape{26, 8});
    CHECK(m.word_table().dim(1) == d);
  }
}

TEST_CASE("sub-model config pairing") {
  auto cfg = SubModelConfig::canonical("w2v_200");
  cfg.variant = CleaningVariant::complex;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = SubModelConfig::canonical("ft_150");
  cfg.variant = CleaningVariant::simple;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  cfg = SubModelConfig::canonical("ft_150");
  cfg.seq_len = 5;
  CHECK_THROWS_AS(cfg.validate(), UsageError);
  CHECK_THROWS_AS(SubModelConfig::canonical("glove_300"), UsageError);
  auto j = SubModelConfig::canonical("ft_200").to_json();
  CHECK(SubModelConfig::from_json(j).to_json() == j);
}

TEST_CASE("combined model shapes and errors") {
  auto c = fixtures::sentiment_corpus(4);
  std::vector<SubModelConfig> cfgs;
  for (const auto& s : kSlots) cfgs.push_back(SubModelConfig::canonical(s));
  auto m = fixtures::small_asc(c.tweets, cfgs, 5);
  CHECK(m.concat_dim() == 120);
  auto a = m.encode(c.tweets[0]);
  auto b = m.encode(c.tweets[1]);
  std::vector<const AscModel::Input*> batch = {&a, &b};
  CHECK(m.concat_penultimate(batch).shape() == Shape{2, 120});
  CHECK(m.combiner_hidden(batch).shape() == Shape{2, 25});
  auto p = m.probs(batch);
  CHECK(p.shape() == Shape{2, 3});
  for (std::size_t r = 0; r < 2; ++r) CHECK(p[r * 3] + p[r * 3 + 1] + p[r * 3 + 2] == doctest::Approx(1.0).epsilon(1e-12));

  auto simple = fixtures::vocab_of(c.tweets, CleaningVariant::simple);
  Rng rng(1);
  auto three = std::vector<SubModelConfig>(cfgs.begin(), cfgs.begin() + 3);
  CHECK_THROWS_AS(build_asc(three, simple, simple, rng), UsageError);
  auto swapped = cfgs;
  std::swap(swapped[0], swapped[1]);
  CHECK_THROWS_AS(build_asc(swapped, simple, simple, rng), UsageError);
}

TEST_CASE("sub-model batch rows sum to one") {
  auto c = fixtures::sentiment_corpus(6);
  auto cfg = fixtures::small_config("w2v_150", 12, 6, 3, 5);
  Rng rng(2);
  SubModel m(cfg, fixtures::vocab_of(c.tweets, cfg.variant), rng);
  std::vector<EncodedTweet> enc;
  for (const auto& t : c.tweets) enc.push_back(m.encode(t));
  auto p = predict_proba(m, enc, 4);
  CHECK(p.rows == 6);
  for (std::size_t r = 0; r < p.rows; ++r) {
    double s = 0;
    for (double v : p.row(r)) {
      CHECK(v > 0.0);
      s += v;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("full model gradient check at toy scale") {
  auto c = fixtures::sentiment_corpus(3);
  auto m = fixtures::small_asc(c.tweets, fixtures::small_configs(8, 4, 2, 3, 10), 9);
  std::vector<AscModel::Input> enc;
  for (const auto& t : c.tweets) enc.push_back(m.encode(t));
  std::vector<const AscModel::Input*> batch;
  for (const auto& e : enc) batch.push_back(&e);
  auto y = Tensor::from({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  tensor::GradCheckOptions opt;
  opt.max_coords = 12;
  auto r = tensor::grad_check([&] { return tensor::cross_entropy(m.probs(batch), y); }, m.params(), opt);
  INFO("worst coordinate: " << r.worst);
  CHECK(r.checked > 300);
  CHECK(r.max_rel_error < 1e-3);
}

TEST_CASE("freeze contract under the distant schedule") {
  auto c = fixtures::sentiment_corpus(9);
  auto m = fixtures::small_asc(c.tweets, fixtures::small_configs(10, 4, 2, 4, 10), 4);
  std::vector<std::vector<double>> before;
  for (const auto& s : m.subs()) before.push_back(copy_values(s.word_table()));
  std::vector<std::vector<double>> after_frozen;
  bool changed_after = false;
  TrainOptions o;
  o.batch_size = 4;
  o.schedule = DistantSchedule{1, 2};
  o.on_epoch = [&](const EpochReport& r) {
    if (r.epoch == 1) {
      CHECK_FALSE(r.embeddings_trainable);
      for (const auto& s : m.subs()) after_frozen.push_back(copy_values(s.word_table()));
    } else if (r.epoch == 2) {
      CHECK(r.embeddings_trainable);
      for (std::size_t i = 0; i < 4; ++i) changed_after |= copy_values(m.subs()[i].word_table()) != after_frozen[i];
    }
  };
  auto h = train_asc(m, c.tweets, c.labels, o);
  CHECK(h.epochs.size() == 3);
  REQUIRE(after_frozen.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(after_frozen[i] == before[i]);
  CHECK(changed_after);
}

TEST_CASE("training memorizes a small corpus") {
  auto c = fixtures::sentiment_corpus(20);
  auto m = fixtures::small_asc(c.tweets, fixtures::small_configs(12, 6, 3, 8, 10), 21);
  TrainOptions o;
  o.epochs = 40;
  o.batch_size = 5;
  o.optimizer = tensor::OptimizerConfig::adagrad(0.05);
  auto h = train_asc(m, c.tweets, c.labels, o);
  std::vector<AscModel::Input> enc;
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < c.tweets.size(); ++i) {
    enc.push_back(m.encode(c.tweets[i]));
    targets.push_back(slot_of(c.labels[i]));
  }
  CHECK(accuracy(predict_proba(m, enc), targets) == 1.0);
  CHECK(h.losses().back() < h.losses().front());
}

TEST_CASE("no-signal labels plateau at ln 3") {
  // Every tweet appears once with each label, so the best achievable mean
  // cross-entropy is ln 3.
  auto base = fixtures::sentiment_corpus(3);
  std::vector<text::CleanedTweet> tweets;
  std::vector<Sentiment> labels;
  for (const auto& t : base.tweets)
    for (auto s : {Sentiment::positive, Sentiment::neutral, Sentiment::negative}) {
      tweets.push_back(t);
      labels.push_back(s);
    }
  auto m = fixtures::small_asc(tweets, fixtures::small_configs(8, 4, 2, 3, 10), 8);
  TrainOptions o;
  o.epochs = 30;
  o.batch_size = 9;
  o.optimizer = tensor::OptimizerConfig::adagrad(0.05);
  auto h = train_asc(m, tweets, labels, o);
  CHECK(h.losses().back() >= std::log(3.0) - 1e-9);
  CHECK(h.losses().back() == doctest::Approx(std::log(3.0)).epsilon(0.01));
}

TEST_CASE("training input errors") {
  auto c = fixtures::sentiment_corpus(3);
  auto m = fixtures::small_asc(c.tweets, fixtures::small_configs(8, 4, 2, 3, 10), 1);
  CHECK_THROWS_AS(train_asc(m, {}, {}, {}), DataError);
  CHECK_THROWS_AS(train_asc(m, c.tweets, {Sentiment::neutral}, {}), DataError);
  CHECK(sentiment_from_int(-1) == Sentiment::negative);
  CHECK(sentiment_from_int(1) == Sentiment::positive);
  CHECK_THROWS_AS(sentiment_from_int(2), DataError);
}

TEST_CASE("training is reproducible for a fixed seed") {
  auto c = fixtures::sentiment_corpus(6);
  auto run = [&] {
    auto m = fixtures::small_asc(c.tweets, fixtures::small_configs(8, 4, 2, 3, 10), 13);
    TrainOptions o;
    o.epochs = 2;
    o.batch_size = 4;
    o.seed = 99;
    train_asc(m, c.tweets, c.labels, o);
    std::vector<double> all;
    for (const auto& p : m.params()) all.insert(all.end(), p.tensor.values().begin(), p.tensor.values().end());
    return all;
  };
  CHECK(run() == run());
}

TEST_CASE("distant datasets partition the corpus") {
  auto specs = load_distant_keywords(default_distant_keywords());
  REQUIRE(specs.size() == 4);
  for (const auto& s : specs) CHECK(s.keywords.size() >= 30);

  SUBCASE("every tweet has a joy keyword") {
    auto corpus = fixtures::clean_all({"so happy today", "i love it", "#joy is here"});
    auto splits = build_distant_datasets(corpus, specs);
    CHECK(splits[2].emotion == "joy");
    CHECK(splits[2].without.empty());
    CHECK(splits[2].with.size() == 3);
  }
  SUBCASE("keywords absent from the corpus") {
    auto corpus = fixtures::clean_all({"the table is brown", "meeting at noon"});
    auto splits = build_distant_datasets(corpus, {{"anger", {"furious"}}});
    CHECK(splits[0].with.empty());
    CHECK(splits[0].without.size() == 2);
  }
  SUBCASE("random corpus: exact disjoint cover") {
    Rng rng(17);
    std::vector<std::string> words = {"happy", "sad", "angry", "scared", "table", "the", "go", "blue", "rain", "cat"};
    std::vector<std::string> texts;
    for (int i = 0; i < 100; ++i) {
      std::string t;
      for (std::size_t k = 0, n = 1 + rng.below(6); k < n; ++k) t += words[rng.below(words.size())] + " ";
      texts.push_back(t);
    }
    auto corpus = fixtures::clean_all(texts);
    auto splits = build_distant_datasets(corpus, specs);
    for (std::size_t e = 0; e < splits.size(); ++e) {
      const auto& s = splits[e];
      std::vector<int> seen(corpus.size(), 0);
      for (auto i : s.with) {
        seen[i]++;
        CHECK(has_keyword(corpus[i], specs[e].keywords));
      }
      for (auto i : s.without) {
        seen[i]++;
        CHECK_FALSE(has_keyword(corpus[i], specs[e].keywords));
      }
      CHECK(std::all_of(seen.begin(), seen.end(), [](int n) { return n == 1; }));
    }
  }
  SUBCASE("labels use the positive and negative slots") {
    DistantSplit s{"fear", {0, 3}, {1, 2}};
    std::vector<std::size_t> idx;
    std::vector<Sentiment> labels;
    distant_training_set(s, idx, labels);
    CHECK(idx == std::vector<std::size_t>{0, 3, 1, 2});
    CHECK(labels == std::vector<Sentiment>{Sentiment::positive, Sentiment::positive, Sentiment::negative,
                                           Sentiment::negative});
  }
  CHECK_THROWS_AS(build_distant_datasets({}, {{"joy", {}}}), UsageError);
}

TEST_CASE("hidden-layer features") {
  auto c = fixtures::sentiment_corpus(4);
  auto m = fixtures::small_asc(c.tweets, fixtures::small_configs(8, 4, 2, 3, 10), 2);
  std::vector<text::CleanedTweet> tweets = {c.tweets[0], c.tweets[1], c.tweets[0]};

  auto h = extract_hidden(m, tweets, HiddenLayer::combiner_hidden);
  REQUIRE(h.size() == 3);
  CHECK(h[0].size() == 25);
  CHECK(h[0].names.front() == "ASC_0");
  CHECK(h[0].group.at("ASC_24") == "ASC");
  CHECK(h[0].values == h[2].values);
  CHECK(h[0].values != h[1].values);

  auto named = extract_hidden(m, tweets, hidden_layer_from_string("combiner_hidden"), "ASC_anger");
  CHECK(named[0].names[3] == "ASC_anger_3");

  auto pen = extract_hidden(m, tweets, HiddenLayer::submodel_penultimate);
  CHECK(pen[0].size() == 12);
  CHECK(pen[0].names[3] == "ASC_w2v_150_0");

  auto cfg = fixtures::small_config("w2v_200", 8, 4, 2, 15, 20);
  Rng rng(3);
  SubModel sm(cfg, fixtures::vocab_of(c.tweets, cfg.variant), rng);
  auto f = extract_hidden(sm, tweets, HiddenLayer::submodel_penultimate, "w2v_200_fear");
  CHECK(f[0].size() == 15);
  CHECK(f[0].names[14] == "w2v_200_fear_14");
  CHECK(f[0].values == f[2].values);
  CHECK_THROWS_AS(extract_hidden(sm, tweets, HiddenLayer::combiner_hidden, "x"), UsageError);
  CHECK_THROWS_AS(hidden_layer_from_string("output"), UsageError);
}

TEST_CASE("model checkpoints round trip") {
  auto c = fixtures::sentiment_corpus(5);
  auto m = fixtures::small_asc(c.tweets, fixtures::small_configs(8, 4, 2, 3, 10), 6);
  auto path = temp_file("asc.ckpt");
  save_asc(path, m, 6);
  auto loaded = load_asc(path);
  std::vector<AscModel::Input> a, b;
  for (const auto& t : c.tweets) {
    a.push_back(m.encode(t));
    b.push_back(loaded.encode(t));
  }
  CHECK(predict_proba(m, a).data == predict_proba(loaded, b).data);
  CHECK_THROWS_AS(load_submodel(path), DataError);

  auto cfg = fixtures::small_config("ft_150", 8, 4, 2, 15, 15);
  Rng rng(4);
  SubModel sm(cfg, fixtures::vocab_of(c.tweets, cfg.variant), rng);
  auto spath = temp_file("sub.ckpt");
  save_submodel(spath, sm, 4);
  auto sl = load_submodel(spath);
  CHECK(sl.config().to_json() == cfg.to_json());
  CHECK(copy_values(sl.word_table()) == copy_values(sm.word_table()));
}
