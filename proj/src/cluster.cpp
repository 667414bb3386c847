#include "xlnews/cluster.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>

namespace xlnews {

using nlohmann::json;

std::string_view to_string(ClusterMode mode) {
  return mode == ClusterMode::coarse ? "coarse" : "fine";
}

ClusterMode parse_cluster_mode(std::string_view s) {
  if (s == "coarse") return ClusterMode::coarse;
  if (s == "fine") return ClusterMode::fine;
  throw ConfigError("unknown cluster mode '" + std::string(s) + "', expected coarse or fine");
}

// ---------------------------------------------------------------- params

ClusterParams ClusterParams::coarse_defaults() {
  ClusterParams p;
  p.mode = ClusterMode::coarse;
  p.weights = {0.25, 0.75};
  p.news_threshold = 0.7;
  p.cluster_threshold = 0.82;
  return p;
}

ClusterParams ClusterParams::fine_defaults() {
  ClusterParams p;
  p.mode = ClusterMode::fine;
  p.weights = {0.9, 0.1};
  p.news_threshold = 0.7;
  p.cluster_threshold = 0.8;
  p.time_threshold_days = 365;
  return p;
}

void ClusterParams::validate() const {
  weights.validate();
  auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!unit(news_threshold)) throw ConfigError("news_threshold must be in [0,1]");
  if (!unit(cluster_threshold)) throw ConfigError("cluster_threshold must be in [0,1]");
  if (time_threshold_days && *time_threshold_days < 0) {
    throw ConfigError("time_threshold must be >= 0 days");
  }
}

json ClusterParams::to_json() const {
  json j = {{"mode", to_string(mode)},
            {"alpha", weights.alpha},
            {"beta", weights.beta},
            {"news_threshold", news_threshold},
            {"cluster_threshold", cluster_threshold},
            {"time_threshold", nullptr},
            {"merge", merge}};
  if (time_threshold_days) j["time_threshold"] = *time_threshold_days;
  return j;
}

ClusterParams ClusterParams::from_json(const json& j) {
  try {
    const ClusterMode mode = parse_cluster_mode(j.value("mode", std::string("coarse")));
    ClusterParams p = mode == ClusterMode::coarse ? coarse_defaults() : fine_defaults();
    p.weights.alpha = j.value("alpha", p.weights.alpha);
    p.weights.beta = j.value("beta", p.weights.beta);
    p.news_threshold = j.value("news_threshold", p.news_threshold);
    p.cluster_threshold = j.value("cluster_threshold", p.cluster_threshold);
    if (auto it = j.find("time_threshold"); it != j.end()) {
      if (it->is_null()) {
        p.time_threshold_days.reset();
      } else {
        p.time_threshold_days = it->get<int>();
      }
    }
    p.merge = j.value("merge", p.merge);
    p.validate();
    return p;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cluster params: ") + e.what());
  }
}

// ---------------------------------------------------------------- cluster

Cluster Cluster::singleton(int id, const NewsRepr& repr) {
  Cluster c;
  c.id = id;
  c.member_ids.push_back(repr.article_id);
  c.T_sum = repr.T;
  c.C_sum = repr.C;
  c.min_date = c.max_date = repr.published_at;
  return c;
}

void Cluster::absorb(const NewsRepr& repr) {
  member_ids.push_back(repr.article_id);
  T_sum += repr.T;
  C_sum += repr.C;
  min_date = std::min(min_date, repr.published_at);
  max_date = std::max(max_date, repr.published_at);
}

void Cluster::absorb(const Cluster& other) {
  member_ids.insert(member_ids.end(), other.member_ids.begin(), other.member_ids.end());
  T_sum += other.T_sum;
  C_sum += other.C_sum;
  min_date = std::min(min_date, other.min_date);
  max_date = std::max(max_date, other.max_date);
}

long long Cluster::span_with(Date d) const {
  return days_between(std::min(min_date, d), std::max(max_date, d));
}

long long Cluster::span_with(const Cluster& other) const {
  return days_between(std::min(min_date, other.min_date), std::max(max_date, other.max_date));
}

NewsRepr centroid(const Cluster& cluster) {
  const double n = static_cast<double>(cluster.size());
  NewsRepr r;
  r.article_id = "cluster:" + std::to_string(cluster.id);
  r.T = cluster.T_sum / n;
  r.C = cluster.C_sum / n;
  r.C /= r.C.sum();
  r.published_at = cluster.max_date;
  return r;
}

// ---------------------------------------------------------------- state

const Cluster* ClusterState::find(int id) const {
  auto it = std::lower_bound(clusters.begin(), clusters.end(), id,
                             [](const Cluster& c, int v) { return c.id < v; });
  return it != clusters.end() && it->id == id ? &*it : nullptr;
}

Cluster* ClusterState::find(int id) {
  return const_cast<Cluster*>(std::as_const(*this).find(id));
}

std::size_t ClusterState::num_articles() const {
  std::size_t n = 0;
  for (const auto& c : clusters) n += c.size();
  return n;
}

std::unordered_map<std::string, int> ClusterState::assignments() const {
  std::unordered_map<std::string, int> out;
  for (const auto& c : clusters) {
    for (const auto& id : c.member_ids) out.emplace(id, c.id);
  }
  return out;
}

json ClusterState::to_json(const ClusterParams& params) const {
  json arr = json::array();
  for (const auto& c : clusters) {
    arr.push_back({{"id", c.id},
                   {"member_ids", c.member_ids},
                   {"size", c.size()},
                   {"T_sum", std::vector<double>(c.T_sum.begin(), c.T_sum.end())},
                   {"C_sum", std::vector<double>(c.C_sum.begin(), c.C_sum.end())},
                   {"min_date", c.min_date.to_string()},
                   {"max_date", c.max_date.to_string()}});
  }
  return {{"params", params.to_json()},
          {"clusters", std::move(arr)},
          {"sim_eval_counter", sim_eval_counter},
          {"next_id", next_id}};
}

ClusterState ClusterState::from_json(const json& j, ClusterParams* params) {
  try {
    ClusterState s;
    if (params) *params = ClusterParams::from_json(j.at("params"));
    s.sim_eval_counter = j.at("sim_eval_counter").get<std::uint64_t>();
    int max_id = -1;
    for (const auto& jc : j.at("clusters")) {
      Cluster c;
      c.id = jc.at("id").get<int>();
      c.member_ids = jc.at("member_ids").get<std::vector<std::string>>();
      if (c.member_ids.empty() || jc.at("size").get<std::size_t>() != c.member_ids.size()) {
        throw Error("cluster state: cluster " + std::to_string(c.id) + " has inconsistent size");
      }
      const auto t = jc.at("T_sum").get<std::vector<double>>();
      const auto cs = jc.at("C_sum").get<std::vector<double>>();
      c.T_sum = Eigen::Map<const Vector>(t.data(), static_cast<Eigen::Index>(t.size()));
      c.C_sum = Eigen::Map<const Vector>(cs.data(), static_cast<Eigen::Index>(cs.size()));
      c.min_date = Date::parse(jc.at("min_date").get<std::string>());
      c.max_date = Date::parse(jc.at("max_date").get<std::string>());
      max_id = std::max(max_id, c.id);
      s.clusters.push_back(std::move(c));
    }
    std::sort(s.clusters.begin(), s.clusters.end(),
              [](const Cluster& a, const Cluster& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < s.clusters.size(); ++i) {
      if (s.clusters[i].id == s.clusters[i - 1].id) throw Error("cluster state: duplicate cluster id");
    }
    s.next_id = j.value("next_id", max_id + 1);
    if (s.next_id <= max_id) throw Error("cluster state: next_id must exceed every cluster id");
    return s;
  } catch (const json::exception& e) {
    throw Error(std::string("cluster state: ") + e.what());
  }
}

void ClusterState::save(const std::filesystem::path& path, const ClusterParams& params) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write cluster state: " + path.string());
  out << to_json(params).dump() << '\n';
}

ClusterState ClusterState::load(const std::filesystem::path& path, ClusterParams* params) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cluster state not found: " + path.string());
  try {
    return from_json(json::parse(in), params);
  } catch (const json::exception& e) {
    throw Error("cluster state " + path.string() + ": " + e.what());
  }
}

json Assignment::to_json() const {
  json j = {{"id", article_id},
            {"cluster", cluster_id},
            {"best_similarity", nullptr},
            {"opened_cluster", opened_cluster},
            {"merged", merged_ids}};
  if (best_similarity) j["best_similarity"] = *best_similarity;
  return j;
}

// ---------------------------------------------------------------- assign

namespace {

int open_cluster(ClusterState& state, const NewsRepr& repr) {
  const int id = state.next_id++;
  state.clusters.push_back(Cluster::singleton(id, repr));
  return id;
}

std::vector<double> centroid_similarities(ClusterState& state, const NewsRepr& repr,
                                          const ClusterParams& p, const TopicSimMatrix& tm) {
  std::vector<double> sims;
  sims.reserve(state.clusters.size());
  for (const auto& c : state.clusters) sims.push_back(news_similarity(repr, centroid(c), p.weights, tm));
  state.sim_eval_counter += state.clusters.size();
  return sims;
}

bool within_gate(const ClusterParams& p, long long span) {
  return p.mode != ClusterMode::fine || !p.time_threshold_days || span <= *p.time_threshold_days;
}

Assignment finish(ClusterState& state, Assignment a, const ClusterParams& p,
                  const TopicSimMatrix& tm) {
  if (p.merge) a.merged_ids = merge_pass(state, a.cluster_id, p, tm);
  return a;
}

}  // namespace

Assignment assign_coarse(ClusterState& state, const NewsRepr& repr, const ClusterParams& p,
                         const TopicSimMatrix& tm) {
  Assignment a;
  a.article_id = repr.article_id;
  const auto sims = centroid_similarities(state, repr, p, tm);
  std::size_t best = sims.size();
  for (std::size_t i = 0; i < sims.size(); ++i) {
    if (best == sims.size() || sims[i] > sims[best]) best = i;
  }
  if (best < sims.size()) a.best_similarity = sims[best];
  if (best < sims.size() && sims[best] > p.news_threshold) {
    state.clusters[best].absorb(repr);
    a.cluster_id = state.clusters[best].id;
  } else {
    a.cluster_id = open_cluster(state, repr);
    a.opened_cluster = true;
  }
  return finish(state, std::move(a), p, tm);
}

Assignment assign_fine(ClusterState& state, const NewsRepr& repr, const ClusterParams& p,
                       const TopicSimMatrix& tm) {
  Assignment a;
  a.article_id = repr.article_id;
  const auto sims = centroid_similarities(state, repr, p, tm);
  std::vector<std::size_t> order(sims.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // clusters are stored by ascending id, so a stable sort breaks ties by id
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sims[x] > sims[y]; });
  if (!order.empty()) a.best_similarity = sims[order.front()];
  for (std::size_t idx : order) {
    if (!(sims[idx] > p.news_threshold)) break;
    Cluster& c = state.clusters[idx];
    if (within_gate(p, c.span_with(repr.published_at))) {
      c.absorb(repr);
      a.cluster_id = c.id;
      return finish(state, std::move(a), p, tm);
    }
  }
  a.cluster_id = open_cluster(state, repr);
  a.opened_cluster = true;
  return finish(state, std::move(a), p, tm);
}

Assignment assign(ClusterState& state, const NewsRepr& repr, const ClusterParams& p,
                  const TopicSimMatrix& tm) {
  return p.mode == ClusterMode::coarse ? assign_coarse(state, repr, p, tm)
                                       : assign_fine(state, repr, p, tm);
}

std::vector<int> merge_pass(ClusterState& state, int changed_id, const ClusterParams& p,
                            const TopicSimMatrix& tm) {
  if (!state.find(changed_id)) throw Error("merge_pass: no cluster " + std::to_string(changed_id));
  std::vector<int> merged;
  for (;;) {
    const Cluster& c = *state.find(changed_id);
    const NewsRepr center = centroid(c);
    const Cluster* best = nullptr;
    double best_sim = -std::numeric_limits<double>::infinity();
    for (const auto& t : state.clusters) {
      if (t.id == changed_id || !within_gate(p, c.span_with(t))) continue;
      const double s = news_similarity(center, centroid(t), p.weights, tm);
      ++state.merge_eval_counter;
      if (s > best_sim) {
        best_sim = s;
        best = &t;
      }
    }
    if (!best || !(best_sim > p.cluster_threshold)) break;
    const int absorbed = best->id;
    Cluster donor = std::move(*state.find(absorbed));
    state.clusters.erase(std::find_if(state.clusters.begin(), state.clusters.end(),
                                      [&](const Cluster& x) { return x.id == absorbed; }));
    state.find(changed_id)->absorb(donor);
    merged.push_back(absorbed);
  }
  return merged;
}

// ---------------------------------------------------------------- baseline

double baseline_distance(const NewsRepr& repr, const Cluster& cluster, const ReprIndex& members,
                         const SimWeights& w, const TopicSimMatrix& tm) {
  if (cluster.member_ids.empty()) throw Error("baseline_distance: empty cluster");
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& id : cluster.member_ids) {
    auto it = members.find(id);
    if (it == members.end()) throw Error("baseline_distance: no representation for member \"" + id + "\"");
    best = std::max(best, news_similarity(repr, it->second, w, tm));
  }
  return best;
}

Assignment assign_baseline(ClusterState& state, ReprIndex& members, const NewsRepr& repr,
                           const ClusterParams& p, const TopicSimMatrix& tm) {
  Assignment a;
  a.article_id = repr.article_id;
  Cluster* best = nullptr;
  double best_sim = -std::numeric_limits<double>::infinity();
  for (auto& c : state.clusters) {
    const double s = baseline_distance(repr, c, members, p.weights, tm);
    state.sim_eval_counter += c.size();
    if (s > best_sim) {
      best_sim = s;
      best = &c;
    }
  }
  if (best) a.best_similarity = best_sim;
  if (best && best_sim > p.news_threshold) {
    best->absorb(repr);
    a.cluster_id = best->id;
  } else {
    a.cluster_id = open_cluster(state, repr);
    a.opened_cluster = true;
  }
  members.insert_or_assign(repr.article_id, repr);
  return a;
}

}  // namespace xlnews
