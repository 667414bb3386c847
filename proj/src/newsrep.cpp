#include "xlnews/newsrep.hpp"

#include <cmath>

namespace xlnews {

using nlohmann::json;

SimWeights SimWeights::make(double alpha, double beta) {
  SimWeights w{alpha, beta};
  w.validate();
  return w;
}

void SimWeights::validate() const {
  if (!(alpha >= 0) || !(beta >= 0)) throw ConfigError("similarity weights must be non-negative");
  if (std::abs(alpha + beta - 1.0) > 1e-9) {
    throw ConfigError("similarity weights must sum to 1 (alpha=" + std::to_string(alpha) +
                      ", beta=" + std::to_string(beta) + ")");
  }
}

NewsRepr represent(const NewsArticle& article, const EmbeddingProvider& provider,
                   const LdaModel& model, const LdaConfig& cfg) {
  try {
    NewsRepr r;
    r.article_id = article.id;
    r.T = embed(provider, article.title);
    r.C = infer_topics(model, tokenize(article), cfg);
    r.published_at = article.published_at;
    r.lang = article.lang;
    r.label = article.label;
    return r;
  } catch (const Error& e) {
    throw Error("article \"" + article.id + "\": " + e.what());
  }
}

double title_similarity(const NewsRepr& a, const NewsRepr& b) {
  return 0.5 * cosine_similarity(a.T, b.T) + 0.5;
}

double topic_similarity(const NewsRepr& a, const NewsRepr& b, const TopicSimMatrix& tm) {
  return topic_similarity(a.C, b.C, tm.norm);
}

double news_similarity(const NewsRepr& a, const NewsRepr& b, const SimWeights& w,
                       const TopicSimMatrix& tm) {
  return w.alpha * title_similarity(a, b) + w.beta * topic_similarity(a, b, tm);
}

json NewsRepr::to_json() const {
  json j = {{"id", article_id},
            {"T", std::vector<double>(T.begin(), T.end())},
            {"C", std::vector<double>(C.begin(), C.end())},
            {"published_at", published_at.to_string()},
            {"lang", to_string(lang)}};
  if (label) j["label"] = *label;
  return j;
}

NewsRepr NewsRepr::from_json(const json& j) {
  try {
    NewsRepr r;
    r.article_id = j.at("id").get<std::string>();
    const auto t = j.at("T").get<std::vector<double>>();
    const auto c = j.at("C").get<std::vector<double>>();
    r.T = Eigen::Map<const Vector>(t.data(), static_cast<Eigen::Index>(t.size()));
    r.C = Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size()));
    r.published_at = Date::parse(j.at("published_at").get<std::string>());
    r.lang = parse_lang(j.at("lang").get<std::string>());
    if (auto it = j.find("label"); it != j.end() && !it->is_null()) r.label = it->get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw Error(std::string("news repr: ") + e.what());
  }
}

}  // namespace xlnews
