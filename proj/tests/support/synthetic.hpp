#pragma once

// Planted-structure article streams built from HashEmbedder directions.
//
// Each event e owns a Chinese topic (index e) and an English topic (index
// n_events + e). The topic matrix gives those two a moderate similarity,
// so pure-language articles of one event open separate clusters at first;
// later "balanced" articles carry both topics, leaning slightly toward
// their own language so each joins its own-language cluster, and pull the
// two centroids together until merging folds them into one.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "xlnews/cluster.hpp"
#include "xlnews/embedding.hpp"
#include "xlnews/newsrep.hpp"
#include "xlnews/topicsim.hpp"

namespace synthetic {

struct StreamSpec {
  int n_events = 5;
  int per_event = 60;
  int pure_lead = 4;            // leading pure-language articles per event
  double balanced_share = 1.0;  // share of balanced articles after the lead
  double own_weight = 0.52;     // own-language topic mass of a balanced article
  double title_noise = 0.25;    // relative size of per-article title jitter
  double topic_noise = 0.005;
  double pair_sim = 0.6;        // zh/en topic pair in the topic matrix
  double off_sim = 0.02;        // unrelated topics
  std::size_t dim = 256;
  std::uint64_t seed = 7;
  xlnews::Date start = xlnews::Date::from_ymd(2022, 1, 1);
};

struct Stream {
  std::vector<xlnews::NewsRepr> reprs;
  xlnews::TopicSimMatrix tm;
  std::vector<xlnews::Vector> event_bases;
};

inline xlnews::Vector jitter(const xlnews::Vector& base, const xlnews::Vector& noise, double scale) {
  xlnews::Vector v = base + scale * noise;
  return v / v.norm();
}

inline xlnews::TopicSimMatrix pair_matrix(int n_events, double pair_sim, double off_sim) {
  const int K = 2 * n_events;
  Eigen::MatrixXd norm = Eigen::MatrixXd::Constant(K, K, off_sim);
  for (int e = 0; e < n_events; ++e) {
    norm(e, n_events + e) = norm(n_events + e, e) = pair_sim;
  }
  norm.diagonal().setOnes();
  return xlnews::topic_matrix_from_norm(norm);
}

// Events interleave round-robin; dates advance one day per round.
inline Stream bilingual_stream(const StreamSpec& spec) {
  const xlnews::HashEmbedder hash(spec.dim, spec.seed);
  const int K = 2 * spec.n_events;
  std::mt19937_64 rng(spec.seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  Stream s;
  s.tm = pair_matrix(spec.n_events, spec.pair_sim, spec.off_sim);
  for (int e = 0; e < spec.n_events; ++e) s.event_bases.push_back(hash.lookup("event-" + std::to_string(e)));

  for (int i = 0; i < spec.per_event; ++i) {
    for (int e = 0; e < spec.n_events; ++e) {
      const std::string id = "e" + std::to_string(e) + "-a" + std::to_string(i);
      xlnews::NewsRepr r;
      r.article_id = id;
      r.label = "event-" + std::to_string(e);
      r.lang = i % 2 == 0 ? xlnews::Lang::zh : xlnews::Lang::en;
      r.published_at = spec.start.plus_days(i);
      r.T = jitter(s.event_bases[e], hash.lookup(id), spec.title_noise);

      Eigen::VectorXd c = Eigen::VectorXd::Zero(K);
      const bool balanced = i >= spec.pure_lead && uniform() < spec.balanced_share;
      if (balanced) {
        const bool zh = r.lang == xlnews::Lang::zh;
        c[e] = zh ? spec.own_weight : 1 - spec.own_weight;
        c[spec.n_events + e] = zh ? 1 - spec.own_weight : spec.own_weight;
      } else {
        c[r.lang == xlnews::Lang::zh ? e : spec.n_events + e] = 1.0;
      }
      for (int k = 0; k < K; ++k) c[k] += spec.topic_noise * uniform();
      r.C = c / c.sum();
      s.reprs.push_back(std::move(r));
    }
  }
  return s;
}

// Two events sharing one headline direction, `gap_days` apart, each
// `per_event` articles over consecutive days. Ascending dates.
inline Stream repeated_headline_stream(int per_event, int gap_days, std::uint64_t seed = 11,
                                       std::size_t dim = 256) {
  const xlnews::HashEmbedder hash(dim, seed);
  Stream s;
  s.tm = pair_matrix(1, 0.9, 0.9);
  const xlnews::Vector base = hash.lookup("grizzlies beat the nets");
  s.event_bases = {base, base};
  const xlnews::Date first = xlnews::Date::from_ymd(2018, 3, 1);
  for (int ev = 0; ev < 2; ++ev) {
    for (int i = 0; i < per_event; ++i) {
      const std::string id = "game" + std::to_string(ev) + "-a" + std::to_string(i);
      xlnews::NewsRepr r;
      r.article_id = id;
      r.label = "game-" + std::to_string(ev);
      r.lang = i % 2 == 0 ? xlnews::Lang::zh : xlnews::Lang::en;
      r.published_at = first.plus_days(ev * gap_days + i);
      r.T = jitter(base, hash.lookup(id), 0.2);
      r.C = Eigen::VectorXd::Constant(2, 0.5);
      s.reprs.push_back(std::move(r));
    }
  }
  return s;
}

}  // namespace synthetic
