#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "xlnews/corpus.hpp"
#include "xlnews/embedding.hpp"
#include "xlnews/lda.hpp"
#include "xlnews/topicsim.hpp"

namespace xlnews {

// An article as the clusterer sees it: title embedding plus topic mixture.
struct NewsRepr {
  std::string article_id;
  Vector T;
  TopicDistribution C;
  Date published_at;
  Lang lang = Lang::en;
  std::optional<std::string> label;

  nlohmann::json to_json() const;
  static NewsRepr from_json(const nlohmann::json& j);
};

// Title vs topic weighting; the two weights sum to one.
struct SimWeights {
  double alpha = 0.5;  // title
  double beta = 0.5;   // topic

  static SimWeights make(double alpha, double beta);  // validates
  void validate() const;
};

NewsRepr represent(const NewsArticle& article, const EmbeddingProvider& provider,
                   const LdaModel& model, const LdaConfig& cfg);

// 0.5 cos(T_a, T_b) + 0.5, in [0, 1].
double title_similarity(const NewsRepr& a, const NewsRepr& b);

// Bilinear form C_a' * TM * C_b.
template <typename DerivedA, typename DerivedB, typename DerivedM>
typename DerivedA::Scalar topic_similarity(const Eigen::MatrixBase<DerivedA>& ca,
                                           const Eigen::MatrixBase<DerivedB>& cb,
                                           const Eigen::MatrixBase<DerivedM>& tm) {
  if (ca.size() != tm.rows() || cb.size() != tm.cols()) {
    throw Error("topic_similarity: distribution length does not match topic matrix");
  }
  return ca.dot(tm * cb);
}

double topic_similarity(const NewsRepr& a, const NewsRepr& b, const TopicSimMatrix& tm);

double news_similarity(const NewsRepr& a, const NewsRepr& b, const SimWeights& w,
                       const TopicSimMatrix& tm);

}  // namespace xlnews
