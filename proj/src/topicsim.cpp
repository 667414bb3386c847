#include "xlnews/topicsim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

namespace xlnews {

using nlohmann::json;

double word_to_topic_sim(const Vector& word_vec, std::span<const Vector> topic_vecs) {
  if (topic_vecs.empty()) throw Error("word_to_topic_sim: topic has no word vectors");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : topic_vecs) best = std::max(best, cosine_similarity(word_vec, v));
  return best;
}

namespace {

// Columns are unit-normalized word vectors.
Eigen::MatrixXd unit_columns(std::span<const Vector> vecs) {
  const auto dim = vecs.front().size();
  Eigen::MatrixXd out(dim, static_cast<Eigen::Index>(vecs.size()));
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    if (vecs[i].size() != dim) throw Error("raw_topic_sim: dimension mismatch");
    const double n = vecs[i].norm();
    if (n == 0) throw Error("undefined cosine: zero vector");
    out.col(static_cast<Eigen::Index>(i)) = vecs[i] / n;
  }
  return out;
}

}  // namespace

double raw_topic_sim(std::span<const Vector> topic_a, std::span<const Vector> topic_b) {
  if (topic_a.size() != topic_b.size()) {
    throw Error("raw_topic_sim: topics have different word counts");
  }
  if (topic_a.empty()) throw Error("raw_topic_sim: empty topic");
  const Eigen::MatrixXd A = unit_columns(topic_a);
  const Eigen::MatrixXd B = unit_columns(topic_b);
  if (A.rows() != B.rows()) throw Error("raw_topic_sim: dimension mismatch");
  const Eigen::MatrixXd gram = (A.transpose() * B).cwiseMax(-1.0).cwiseMin(1.0);
  const double a_to_b = gram.rowwise().maxCoeff().sum();
  const double b_to_a = gram.colwise().maxCoeff().sum();
  return (a_to_b + b_to_a) / (2.0 * static_cast<double>(topic_a.size()));
}

Remapped remap_similarities(const Eigen::MatrixXd& raw) {
  if (raw.rows() != raw.cols()) throw Error("remap_similarities: matrix must be square");
  const Eigen::Index K = raw.rows();
  Remapped out;
  out.norm = Eigen::MatrixXd::Identity(K, K);
  if (K < 2) {
    out.degenerate = true;
    return out;
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < K; ++i) {
    for (Eigen::Index j = 0; j < K; ++j) {
      if (i == j) continue;
      lo = std::min(lo, raw(i, j));
      hi = std::max(hi, raw(i, j));
    }
  }
  out.sim_min = lo;
  out.sim_max = hi;
  if (!(hi > lo)) {
    out.degenerate = true;
    for (Eigen::Index i = 0; i < K; ++i) {
      for (Eigen::Index j = 0; j < K; ++j) {
        if (i != j) out.norm(i, j) = 0.5;
      }
    }
    return out;
  }
  const double a = std::numbers::pi / (hi - lo);
  const double b = std::numbers::pi / 2 - hi * a;
  for (Eigen::Index i = 0; i < K; ++i) {
    for (Eigen::Index j = 0; j < K; ++j) {
      if (i == j) continue;
      const double y = 0.5 * std::sin(a * raw(i, j) + b) + 0.5;
      out.norm(i, j) = std::clamp(y, 0.0, 1.0);
    }
  }
  return out;
}

TopicSimMatrix build_topic_matrix(const LdaModel& model, const EmbeddingProvider& provider,
                                  std::size_t m) {
  const int K = model.num_topics();
  if (m < 1 || m > model.vocab_size()) {
    throw Error("build_topic_matrix: m must be in [1, " + std::to_string(model.vocab_size()) + "]");
  }
  std::vector<std::vector<Vector>> topic_vecs(K);
  for (int k = 0; k < K; ++k) {
    for (const auto& word : top_words(model, k, m)) {
      try {
        topic_vecs[k].push_back(embed(provider, word));
      } catch (const Error& e) {
        throw Error("topic " + std::to_string(k) + ", word \"" + word + "\": " + e.what());
      }
    }
  }
  TopicSimMatrix tm;
  tm.m = m;
  tm.raw.resize(K, K);
  for (int i = 0; i < K; ++i) {
    for (int j = i; j < K; ++j) {
      tm.raw(i, j) = tm.raw(j, i) = raw_topic_sim(topic_vecs[i], topic_vecs[j]);
    }
  }
  auto remapped = remap_similarities(tm.raw);
  tm.norm = std::move(remapped.norm);
  tm.sim_min = remapped.sim_min;
  tm.sim_max = remapped.sim_max;
  tm.degenerate = remapped.degenerate;
  return tm;
}

TopicSimMatrix topic_matrix_from_norm(Eigen::MatrixXd norm) {
  if (norm.rows() != norm.cols()) throw Error("topic matrix must be square");
  TopicSimMatrix tm;
  tm.norm = std::move(norm);
  tm.sim_min = 0.0;
  tm.sim_max = 1.0;
  return tm;
}

json TopicSimMatrix::to_json() const {
  json rows = json::array();
  for (Eigen::Index i = 0; i < norm.rows(); ++i) {
    rows.push_back(std::vector<double>(norm.row(i).begin(), norm.row(i).end()));
  }
  return {{"K", norm.rows()}, {"m", m}, {"sim_min", sim_min}, {"sim_max", sim_max},
          {"norm", std::move(rows)}};
}

TopicSimMatrix TopicSimMatrix::from_json(const json& j) {
  try {
    TopicSimMatrix tm;
    const int K = j.at("K").get<int>();
    tm.m = j.at("m").get<std::size_t>();
    tm.sim_min = j.at("sim_min").get<double>();
    tm.sim_max = j.at("sim_max").get<double>();
    tm.degenerate = !(tm.sim_max > tm.sim_min);
    const auto& rows = j.at("norm");
    if (K < 1 || static_cast<int>(rows.size()) != K) throw Error("topic matrix: K does not match norm rows");
    tm.norm.resize(K, K);
    for (int i = 0; i < K; ++i) {
      const auto row = rows[i].get<std::vector<double>>();
      if (static_cast<int>(row.size()) != K) throw Error("topic matrix: row length mismatch");
      for (int c = 0; c < K; ++c) {
        if (!(row[c] >= 0.0 && row[c] <= 1.0)) throw Error("topic matrix: entry outside [0,1]");
        tm.norm(i, c) = row[c];
      }
    }
    if (tm.norm != tm.norm.transpose()) {
      throw Error("topic matrix: not symmetric");
    }
    return tm;
  } catch (const json::exception& e) {
    throw Error(std::string("topic matrix: ") + e.what());
  }
}

void TopicSimMatrix::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write topic matrix: " + path.string());
  out << to_json().dump() << '\n';
}

TopicSimMatrix TopicSimMatrix::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("topic matrix not found: " + path.string());
  try {
    return from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error("topic matrix " + path.string() + ": " + e.what());
  }
}

}  // namespace xlnews
