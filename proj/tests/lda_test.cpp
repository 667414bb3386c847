#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <set>

#include "xlnews/lda.hpp"

using namespace xlnews;

namespace {

// 20 docs over {a, b} and 20 over {x, y}.
std::vector<TokenizedDoc> disjoint_corpus() {
  std::mt19937 rng(9);
  std::vector<TokenizedDoc> docs;
  for (int d = 0; d < 40; ++d) {
    const bool first = d < 20;
    TokenizedDoc doc{"d" + std::to_string(d), {}};
    for (int i = 0; i < 12; ++i) {
      const bool pick = rng() % 2;
      doc.tokens.push_back(first ? (pick ? "a" : "b") : (pick ? "x" : "y"));
    }
    docs.push_back(doc);
  }
  return docs;
}

LdaConfig toy_config() {
  LdaConfig cfg = LdaConfig::with_topics(2);
  cfg.seed = 3;
  return cfg;
}

int topic_of(const LdaModel& model, const std::string& word) {
  const int w = *model.word_id(word);
  Eigen::Index k;
  model.phi().col(w).maxCoeff(&k);
  return static_cast<int>(k);
}

}  // namespace

TEST_CASE("config validation") {
  LdaConfig cfg = LdaConfig::with_topics(22);
  CHECK(cfg.alpha == doctest::Approx(50.0 / 22));
  CHECK(cfg.beta == 0.01);
  CHECK_NOTHROW(cfg.validate());
  cfg.K = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = LdaConfig::with_topics(3);
  cfg.burn_in = cfg.train_iters;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = LdaConfig::with_topics(3);
  cfg.beta = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  const auto from = LdaConfig::from_json({{"K", 4}, {"seed", 12}});
  CHECK(from.alpha == doctest::Approx(12.5));
  CHECK(from.seed == 12);
}

TEST_CASE("training separates a disjoint-vocabulary corpus") {
  const auto docs = disjoint_corpus();
  const LdaModel model = train_lda(docs, toy_config());
  REQUIRE(model.num_topics() == 2);
  REQUIRE(model.vocab_size() == 4);
  for (Eigen::Index k = 0; k < 2; ++k) CHECK(std::abs(model.phi().row(k).sum() - 1.0) < 1e-9);
  CHECK((model.phi().array() > 0).all());

  const int ta = topic_of(model, "a");
  CHECK(topic_of(model, "b") == ta);
  CHECK(topic_of(model, "x") != ta);
  CHECK(topic_of(model, "y") == topic_of(model, "x"));
  for (int k = 0; k < 2; ++k) {
    const auto top = top_words(model, k, 2);
    const std::set<std::string> got(top.begin(), top.end());
    CHECK((got == std::set<std::string>{"a", "b"} || got == std::set<std::string>{"x", "y"}));
    // ordered by probability
    CHECK(model.phi()(k, *model.word_id(top[0])) >= model.phi()(k, *model.word_id(top[1])));
  }
}

TEST_CASE("training is deterministic for a fixed seed") {
  const auto docs = disjoint_corpus();
  const LdaModel m1 = train_lda(docs, toy_config());
  const LdaModel m2 = train_lda(docs, toy_config());
  CHECK(m1.phi() == m2.phi());
  CHECK(m1.to_json().dump() == m2.to_json().dump());
}

TEST_CASE("training errors and warnings") {
  CHECK_THROWS_WITH_AS(train_lda(std::vector<TokenizedDoc>{}, toy_config()), doctest::Contains("empty corpus"), Error);
  TrainStats stats;
  LdaConfig cfg = LdaConfig::with_topics(5);
  cfg.train_iters = 20;
  cfg.burn_in = 0;
  train_lda(std::vector<TokenizedDoc>{{"d", {"a", "b"}}}, cfg, &stats);
  CHECK(stats.warnings.size() == 1);
  CHECK(stats.num_tokens == 2);
}

TEST_CASE("inference") {
  const LdaModel model = train_lda(disjoint_corpus(), toy_config());
  const int tx = topic_of(model, "x");
  LdaConfig cfg = toy_config();

  SUBCASE("a single-topic document concentrates on that topic") {
    TokenizedDoc doc{"q", {}};
    for (int i = 0; i < 300; ++i) doc.tokens.push_back(i % 3 ? "x" : "y");
    const auto probs = infer_topics(model, doc, cfg);
    CHECK(probs[tx] > 0.9);
    cfg.alpha = 0.1;
    const auto short_doc = infer_topics(model, TokenizedDoc{"s", {"x", "y", "x", "x"}}, cfg);
    CHECK(short_doc[tx] > 0.9);
  }
  SUBCASE("all out-of-vocabulary gives the uniform distribution") {
    InferStats stats;
    const auto probs = infer_topics(model, TokenizedDoc{"q", {"zzz", "qqq"}}, cfg, &stats);
    CHECK(probs[0] == doctest::Approx(0.5));
    CHECK(probs[1] == doctest::Approx(0.5));
    CHECK(stats.dropped_tokens == 2);
  }
  SUBCASE("out-of-vocabulary tokens are dropped") {
    InferStats stats;
    infer_topics(model, TokenizedDoc{"q", {"a", "zzz", "b"}}, cfg, &stats);
    CHECK(stats.kept_tokens == 2);
    CHECK(stats.dropped_tokens == 1);
  }
  SUBCASE("sums to one, deterministic, order-invariant") {
    std::mt19937 rng(21);
    const std::vector<std::string> pool{"a", "b", "x", "y", "oov"};
    for (int trial = 0; trial < 30; ++trial) {
      TokenizedDoc doc{"r", {}};
      for (int i = 0; i < 1 + static_cast<int>(rng() % 15); ++i) doc.tokens.push_back(pool[rng() % pool.size()]);
      const auto p = infer_topics(model, doc, cfg);
      CHECK(std::abs(p.sum() - 1.0) < 1e-9);
      CHECK((p.array() >= 0).all());
      CHECK(p == infer_topics(model, doc, cfg));
      TokenizedDoc shuffled = doc;
      std::shuffle(shuffled.tokens.begin(), shuffled.tokens.end(), rng);
      CHECK(p == infer_topics(model, shuffled, cfg));
    }
  }
}

TEST_CASE("top_words ordering and ties") {
  Eigen::MatrixXd phi(2, 4);
  phi << 0.25, 0.25, 0.25, 0.25,
         0.1, 0.4, 0.4, 0.1;
  const LdaModel model({"d", "c", "b", "a"}, phi, 0.01);
  CHECK(top_words(model, 0, 4) == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(top_words(model, 1, 2) == std::vector<std::string>{"b", "c"});
  CHECK(top_words(model, 1, 3) == std::vector<std::string>{"b", "c", "a"});
  CHECK_THROWS_AS(top_words(model, 2, 1), Error);
  CHECK_THROWS_AS(top_words(model, -1, 1), Error);
  CHECK_THROWS_AS(top_words(model, 0, 0), Error);
  CHECK_THROWS_AS(top_words(model, 0, 5), Error);
}

TEST_CASE("model validation and persistence") {
  Eigen::MatrixXd bad(1, 2);
  bad << 0.5, 0.6;
  CHECK_THROWS_AS(LdaModel({"a", "b"}, bad, 0.01), Error);
  Eigen::MatrixXd zero(1, 2);
  zero << 1.0, 0.0;
  CHECK_THROWS_AS(LdaModel({"a", "b"}, zero, 0.01), Error);
  Eigen::MatrixXd ok(1, 2);
  ok << 0.5, 0.5;
  CHECK_THROWS_AS(LdaModel({"a", "a"}, ok, 0.01), Error);
  CHECK_THROWS_AS(LdaModel({"a"}, ok, 0.01), Error);

  const LdaModel model = train_lda(disjoint_corpus(), toy_config());
  const auto path = std::filesystem::temp_directory_path() / "xlnews_lda_test_model.json";
  model.save(path);
  const LdaModel back = LdaModel::load(path);
  CHECK(back.phi() == model.phi());
  CHECK(back.vocab() == model.vocab());
  CHECK(back.beta() == model.beta());
  std::filesystem::remove(path);

  auto j = model.to_json();
  j["phi"][0][0] = j["phi"][0][0].get<double>() + 1e-6;
  CHECK_THROWS_WITH_AS(LdaModel::from_json(j), doctest::Contains("sums to"), Error);
}
