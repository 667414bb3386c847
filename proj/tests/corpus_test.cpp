#include <doctest.h>

#include <random>
#include <sstream>

#include "xlnews/corpus.hpp"

using namespace xlnews;

namespace {

const char* kThreeLines =
    R"({"id":"a1","title":"NBA Finals","body":"The NBA Finals","lang":"en","published_at":"2021-07-20","label":"nba"})"
    "\n"
    R"({"id":"a2","title":"世界杯决赛","body":"世界杯","tokens":["世界杯","决赛"],"lang":"zh","published_at":"2018-07-15"})"
    "\n"
    R"({"id":"a3","title":"Opening ceremony","body":"Beijing opens.","lang":"en","published_at":"2022-02-04"})"
    "\n";

}  // namespace

TEST_CASE("read_articles keeps file order") {
  std::istringstream in(kThreeLines);
  const auto articles = read_articles(in);
  REQUIRE(articles.size() == 3);
  CHECK(articles[0].id == "a1");
  CHECK(articles[1].id == "a2");
  CHECK(articles[2].id == "a3");
  CHECK(articles[0].label == std::optional<std::string>("nba"));
  CHECK_FALSE(articles[2].label.has_value());
  CHECK(articles[1].lang == Lang::zh);
  CHECK(articles[1].published_at == Date::from_ymd(2018, 7, 15));
}

TEST_CASE("empty input yields no articles") {
  std::istringstream in("");
  CHECK(read_articles(in).empty());
}

TEST_CASE("missing field is reported with line number and field name") {
  std::istringstream in(
      R"({"id":"a1","title":"t","body":"b","lang":"en","published_at":"2021-01-01"})"
      "\n"
      R"({"id":"a2","body":"b","lang":"en","published_at":"2021-01-01"})"
      "\n");
  try {
    read_articles(in);
    FAIL("expected CorpusError");
  } catch (const CorpusError& e) {
    REQUIRE(e.errors().size() == 1);
    CHECK(e.errors()[0].line == 2);
    CHECK(e.errors()[0].message.find("\"title\"") != std::string::npos);
  }
}

TEST_CASE("duplicate id names both lines") {
  std::istringstream in(
      R"({"id":"x","title":"t","body":"b","lang":"en","published_at":"2021-01-01"})"
      "\n\n"
      R"({"id":"x","title":"u","body":"c","lang":"en","published_at":"2021-01-02"})"
      "\n");
  try {
    read_articles(in);
    FAIL("expected CorpusError");
  } catch (const CorpusError& e) {
    REQUIRE(e.errors().size() == 1);
    CHECK(e.errors()[0].line == 3);
    CHECK(e.errors()[0].message.find("line 1") != std::string::npos);
  }
}

TEST_CASE("bad values are rejected") {
  auto fails = [](const std::string& line) {
    std::istringstream in(line + "\n");
    CHECK_THROWS_AS(read_articles(in), CorpusError);
  };
  fails(R"({"id":"a","title":"t","body":"b","lang":"fr","published_at":"2021-01-01"})");
  fails(R"({"id":"a","title":"t","body":"b","lang":"en","published_at":"2021-02-30"})");
  fails(R"({"id":"a","title":"t","body":"b","lang":"en","published_at":"21-01-01"})");
  fails(R"({"id":"","title":"t","body":"b","lang":"en","published_at":"2021-01-01"})");
  fails(R"({"id":"a","title":"","body":"b","lang":"en","published_at":"2021-01-01"})");
  fails(R"({"id":"a","title":"t","body":"b","lang":"en","published_at":"2021-01-01","tokens":[1]})");
  fails("not json");
}

TEST_CASE("missing corpus file is a config error") {
  CHECK_THROWS_AS(load_articles("/nonexistent/corpus.jsonl"), ConfigError);
}

TEST_CASE("tokenize") {
  NewsArticle a;
  a.id = "t";
  a.title = "x";

  SUBCASE("english whitespace split, punctuation stripped, lowercased") {
    a.lang = Lang::en;
    a.body = "The NBA Finals";
    CHECK(tokenize(a).tokens == std::vector<std::string>{"the", "nba", "finals"});
    a.body = "  Grizzlies beat the Nets!  (again) ";
    CHECK(tokenize(a).tokens ==
          std::vector<std::string>{"grizzlies", "beat", "the", "nets", "again"});
  }
  SUBCASE("pre-tokenized passthrough") {
    a.lang = Lang::zh;
    a.body = "ignored";
    a.tokens = std::vector<std::string>{"世界杯", "决赛"};
    CHECK(tokenize(a).tokens == std::vector<std::string>{"世界杯", "决赛"});
  }
  SUBCASE("chinese character bigrams") {
    a.lang = Lang::zh;
    a.body = "世界杯";
    CHECK(tokenize(a).tokens == std::vector<std::string>{"世界", "界杯"});
    a.body = "世界杯，决赛";
    CHECK(tokenize(a).tokens == std::vector<std::string>{"世界", "界杯", "决赛"});
    a.body = "好";
    CHECK(tokenize(a).tokens == std::vector<std::string>{"好"});
  }
  SUBCASE("empty document") {
    a.lang = Lang::en;
    a.body = " ... !! ";
    CHECK_THROWS_WITH_AS(tokenize(a), doctest::Contains("empty document"), Error);
  }
}

TEST_CASE("serialization round-trip is lossless and tokenize is deterministic") {
  std::mt19937 rng(3);
  const std::vector<std::string> words = {"news", "世界", "event", "杯", "Finals", "ceremony"};
  std::vector<NewsArticle> articles;
  for (int i = 0; i < 50; ++i) {
    NewsArticle a;
    a.id = "id" + std::to_string(i);
    a.lang = rng() % 2 ? Lang::zh : Lang::en;
    for (int w = 0; w < 1 + static_cast<int>(rng() % 5); ++w) {
      a.title += words[rng() % words.size()] + " ";
      a.body += words[rng() % words.size()] + " ";
    }
    a.published_at = Date::from_ymd(2000, 1, 1).plus_days(rng() % 9000);
    if (rng() % 2) a.label = "label" + std::to_string(rng() % 3);
    if (rng() % 3 == 0) a.tokens = std::vector<std::string>{words[rng() % words.size()]};
    articles.push_back(a);
  }
  std::stringstream buf;
  write_articles(buf, articles);
  const auto back = read_articles(buf);
  CHECK(back == articles);
  for (const auto& a : articles) CHECK(tokenize(a).tokens == tokenize(a).tokens);
}

TEST_CASE("dates") {
  CHECK(Date::parse("2024-02-29").to_string() == "2024-02-29");
  CHECK_THROWS(Date::parse("2023-02-29"));
  CHECK(days_between(Date::parse("2018-06-01"), Date::parse("2022-06-01")) == 1461);
}
