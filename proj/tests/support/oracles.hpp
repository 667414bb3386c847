#pragma once

// Literal loop implementations used as independent references. Nothing in
// here calls into the library's similarity code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

inline double cosine(const Vec& a, const Vec& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline double word_to_topic(const Vec& word, const Mat& topic) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : topic) best = std::max(best, cosine(word, v));
  return best;
}

// Enumerates every word pair in both directions.
inline double raw_topic_sim(const Mat& a, const Mat& b) {
  const std::size_t m = a.size();
  double sum = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double best_ab = -std::numeric_limits<double>::infinity();
    double best_ba = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      best_ab = std::max(best_ab, cosine(a[i], b[j]));
      best_ba = std::max(best_ba, cosine(b[i], a[j]));
    }
    sum += best_ab + best_ba;
  }
  return sum / (2.0 * static_cast<double>(m));
}

inline double topic_similarity(const Vec& ca, const Vec& cb, const Mat& tm) {
  double s = 0;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    for (std::size_t j = 0; j < cb.size(); ++j) s += ca[i] * cb[j] * tm[i][j];
  }
  return s;
}

inline Vec mean(const Mat& rows) {
  Vec out(rows.front().size(), 0.0);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out[i] += r[i];
  }
  for (auto& x : out) x /= static_cast<double>(rows.size());
  return out;
}

}  // namespace oracle
