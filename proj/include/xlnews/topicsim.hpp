#pragma once

#include <cstddef>
#include <filesystem>
#include <span>

#include <Eigen/Dense>
#include <json.hpp>

#include "xlnews/embedding.hpp"
#include "xlnews/lda.hpp"

namespace xlnews {

// K x K topic-to-topic similarity. `raw` holds the symmetrized mean of
// best word matches; `norm` is its sine remap into [0, 1] with a unit
// diagonal. `raw` is empty for matrices loaded from disk.
struct TopicSimMatrix {
  Eigen::MatrixXd raw;
  Eigen::MatrixXd norm;
  double sim_min = 0.0;
  double sim_max = 0.0;
  std::size_t m = 0;
  bool degenerate = false;  // all off-diagonal raw values were equal

  int K() const { return static_cast<int>(norm.rows()); }

  nlohmann::json to_json() const;
  static TopicSimMatrix from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static TopicSimMatrix load(const std::filesystem::path& path);
};

// Best cosine between a word and any of a topic's words.
double word_to_topic_sim(const Vector& word_vec, std::span<const Vector> topic_vecs);

// Mean best-match similarity taken in both directions, so symmetric in
// its arguments. Computed from one Gram matrix of normalized word vectors.
double raw_topic_sim(std::span<const Vector> topic_a, std::span<const Vector> topic_b);

struct Remapped {
  Eigen::MatrixXd norm;
  double sim_min = 0.0;
  double sim_max = 0.0;
  bool degenerate = false;
};

// y = 0.5 sin(a x + b) + 0.5 with a = pi / (max - min), b = pi/2 - max a,
// extremes taken over off-diagonal entries. The diagonal is pinned to 1.
// Equal extremes map every off-diagonal entry to 0.5 and set `degenerate`.
Remapped remap_similarities(const Eigen::MatrixXd& raw);

TopicSimMatrix build_topic_matrix(const LdaModel& model, const EmbeddingProvider& provider,
                                  std::size_t m = 10);

// Wraps an already-normalized matrix (tests, hand-built fixtures).
TopicSimMatrix topic_matrix_from_norm(Eigen::MatrixXd norm);

}  // namespace xlnews
