#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "xlnews/embedding.hpp"

using namespace xlnews;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("vector store lookup") {
  VectorStore store(2);
  store.insert("a", vec({1, 0}));
  CHECK(embed(store, "a") == vec({1, 0}));
  CHECK_THROWS_WITH_AS(embed(store, "b"), doctest::Contains("\"b\""), Error);
  CHECK_THROWS_AS(embed(store, ""), Error);
  CHECK_THROWS_AS(store.insert("c", vec({1, 0, 0})), Error);
}

TEST_CASE("embed truncates to 128 characters before lookup") {
  VectorStore store(2);
  std::string long_title;
  for (int i = 0; i < 200; ++i) long_title += "新";
  std::string head;
  for (int i = 0; i < 128; ++i) head += "新";
  store.insert(head, vec({0, 1}));
  CHECK(embed(store, long_title) == vec({0, 1}));
  CHECK(truncate_chars("abc", 2) == "ab");
  CHECK(truncate_chars("abc", 5) == "abc");
}

TEST_CASE("vector store file format") {
  const std::string file =
      "{\"dim\": 3}\n"
      "{\"key\": \"hello\", \"vec\": [1.5e-3, -2E+1, 0]}\n"
      "{\"key\": \"世界\", \"vec\": [0.1, 0.2, 0.3]}\n";
  std::istringstream in(file);
  std::vector<std::string> warnings;
  const VectorStore store = VectorStore::read(in, &warnings);
  CHECK(warnings.empty());
  CHECK(store.dim() == 3);
  CHECK(store.size() == 2);
  CHECK(store.lookup("hello")[0] == doctest::Approx(1.5e-3));
  CHECK(store.lookup("hello")[1] == -20.0);

  std::stringstream out;
  store.write(out);
  const VectorStore again = VectorStore::read(out);
  CHECK(again.lookup("世界") == store.lookup("世界"));
  CHECK(again.lookup("hello") == store.lookup("hello"));

  SUBCASE("length mismatch") {
    std::istringstream bad("{\"dim\": 2}\n{\"key\": \"a\", \"vec\": [1]}\n");
    CHECK_THROWS_WITH_AS(VectorStore::read(bad), doctest::Contains("line 2"), Error);
  }
  SUBCASE("missing header") {
    std::istringstream bad("{\"key\": \"a\", \"vec\": [1]}\n");
    CHECK_THROWS_AS(VectorStore::read(bad), Error);
  }
  SUBCASE("repeated identical key warns") {
    std::istringstream rep("{\"dim\": 1}\n{\"key\": \"a\", \"vec\": [1]}\n{\"key\": \"a\", \"vec\": [1]}\n");
    std::vector<std::string> w;
    CHECK(VectorStore::read(rep, &w).size() == 1);
    CHECK(w.size() == 1);
  }
  SUBCASE("conflicting key fails") {
    std::istringstream rep("{\"dim\": 1}\n{\"key\": \"a\", \"vec\": [1]}\n{\"key\": \"a\", \"vec\": [2]}\n");
    CHECK_THROWS_AS(VectorStore::read(rep), Error);
  }
}

TEST_CASE("hash embedder is deterministic and unit-norm") {
  const HashEmbedder h(768, 5);
  const Vector a = embed(h, "x");
  CHECK(a == embed(h, "x"));
  CHECK(a.size() == 768);
  CHECK(std::abs(a.norm() - 1.0) < 1e-9);
  CHECK(a != embed(h, "y"));
  CHECK(a != embed(HashEmbedder(768, 6), "x"));
  const HashEmbedder odd(5, 1);
  CHECK(std::abs(embed(odd, "z").norm() - 1.0) < 1e-9);
}

TEST_CASE("cosine similarity") {
  CHECK(cosine_similarity(vec({1, 0}), vec({1, 0})) == doctest::Approx(1.0));
  CHECK(cosine_similarity(vec({1, 0}), vec({0, 1})) == doctest::Approx(0.0));
  // 32 / (sqrt(14) sqrt(77))
  CHECK(std::abs(cosine_similarity(vec({1, 2, 3}), vec({4, 5, 6})) - 0.974632) < 1e-6);
  CHECK_THROWS_WITH_AS(cosine_similarity(vec({0, 0}), vec({1, 0})), doctest::Contains("undefined cosine"), Error);
  CHECK_THROWS_AS(cosine_similarity(vec({1}), vec({1, 0})), Error);
}

TEST_CASE("cosine properties on random vectors") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 200; ++trial) {
    Vector a(8), b(8);
    for (int i = 0; i < 8; ++i) {
      a[i] = n(rng);
      b[i] = n(rng);
    }
    const double ab = cosine_similarity(a, b);
    CHECK(ab == doctest::Approx(cosine_similarity(b, a)).epsilon(1e-12));
    CHECK(ab == doctest::Approx(oracle::cosine({a.begin(), a.end()}, {b.begin(), b.end()})).epsilon(1e-12));
    CHECK(cosine_similarity(a, (3.7 * a).eval()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ab >= -1.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("distillation loss") {
  const std::vector<Vector> sc{vec({0, 0})}, te{vec({1, 0})}, se{vec({0, 0})}, tc{vec({0, 1})};
  CHECK(distillation_loss(sc, se, tc, te) == doctest::Approx(2.0));

  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  std::vector<Vector> a, b, c, d;
  for (int i = 0; i < 6; ++i) {
    Vector x(4), y(4), z(4), w(4);
    for (int k = 0; k < 4; ++k) {
      x[k] = n(rng);
      y[k] = n(rng);
      z[k] = n(rng);
      w[k] = n(rng);
    }
    a.push_back(x);
    b.push_back(y);
    c.push_back(z);
    d.push_back(w);
  }
  // perfect alignment: student_zh == teacher_en, student_en == teacher_zh
  CHECK(distillation_loss(a, b, b, a) == 0.0);
  const double loss = distillation_loss(a, b, c, d);
  CHECK(loss > 0.0);
  auto scaled = [](std::vector<Vector> v) {
    for (auto& x : v) x *= 2.0;
    return v;
  };
  CHECK(distillation_loss(scaled(a), scaled(b), scaled(c), scaled(d)) ==
        doctest::Approx(4.0 * loss).epsilon(1e-12));

  CHECK_THROWS_AS(distillation_loss(a, b, c, std::vector<Vector>{}), Error);
  std::vector<Vector> short_dim = d;
  short_dim[2] = vec({1, 2});
  CHECK_THROWS_AS(distillation_loss(a, b, c, short_dim), Error);
}
