#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "xlnews/newsrep.hpp"

namespace xlnews {

enum class ClusterMode { coarse, fine };

std::string_view to_string(ClusterMode mode);
ClusterMode parse_cluster_mode(std::string_view s);

struct ClusterParams {
  ClusterMode mode = ClusterMode::coarse;
  SimWeights weights{0.25, 0.75};
  double news_threshold = 0.7;
  double cluster_threshold = 0.82;
  // Maximum date span of an event cluster, fine mode only. nullopt turns
  // the gate off.
  std::optional<int> time_threshold_days;
  bool merge = true;

  // Topic-level settings: alpha 0.25, beta 0.75, thresholds 0.7 / 0.82.
  static ClusterParams coarse_defaults();
  // Event-level settings: alpha 0.9, beta 0.1, thresholds 0.7 / 0.8, 365 days.
  static ClusterParams fine_defaults();

  void validate() const;  // throws ConfigError
  nlohmann::json to_json() const;
  static ClusterParams from_json(const nlohmann::json& j);
};

// Running sums make the centroid O(dim + K) to refresh after an insert or
// a merge.
struct Cluster {
  int id = 0;
  std::vector<std::string> member_ids;
  Vector T_sum;
  Eigen::VectorXd C_sum;
  Date min_date;
  Date max_date;

  std::size_t size() const { return member_ids.size(); }

  static Cluster singleton(int id, const NewsRepr& repr);
  void absorb(const NewsRepr& repr);
  void absorb(const Cluster& other);

  // Date span in days if `d` (or `other`) joined this cluster.
  long long span_with(Date d) const;
  long long span_with(const Cluster& other) const;
};

// Virtual representative article: mean title vector and mean topic mixture
// (renormalized). Its id is "cluster:<id>".
NewsRepr centroid(const Cluster& cluster);

struct ClusterState {
  std::vector<Cluster> clusters;  // ascending id
  int next_id = 0;
  // Sample-to-cluster similarity evaluations made by assignments.
  std::uint64_t sim_eval_counter = 0;
  // Cluster-to-cluster evaluations made by merge passes (not persisted).
  std::uint64_t merge_eval_counter = 0;

  const Cluster* find(int id) const;
  Cluster* find(int id);
  std::size_t num_articles() const;
  // article id -> cluster id
  std::unordered_map<std::string, int> assignments() const;

  nlohmann::json to_json(const ClusterParams& params) const;
  static ClusterState from_json(const nlohmann::json& j, ClusterParams* params = nullptr);
  void save(const std::filesystem::path& path, const ClusterParams& params) const;
  static ClusterState load(const std::filesystem::path& path, ClusterParams* params = nullptr);
};

struct Assignment {
  std::string article_id;
  int cluster_id = -1;  // cluster holding the article once merging settles
  std::optional<double> best_similarity;  // empty when there was no cluster
  bool opened_cluster = false;
  std::vector<int> merged_ids;  // clusters folded into cluster_id

  nlohmann::json to_json() const;
};

// Joins the most similar centroid (ties to the lowest id) when similarity
// exceeds news_threshold, otherwise opens a singleton; then merges around
// the changed cluster.
Assignment assign_coarse(ClusterState& state, const NewsRepr& repr, const ClusterParams& p,
                         const TopicSimMatrix& tm);

// Walks clusters in descending centroid similarity and joins the first one
// that clears news_threshold and keeps the date span within the time gate.
// Stream must arrive in ascending publication date.
Assignment assign_fine(ClusterState& state, const NewsRepr& repr, const ClusterParams& p,
                       const TopicSimMatrix& tm);

// Dispatches on p.mode.
Assignment assign(ClusterState& state, const NewsRepr& repr, const ClusterParams& p,
                  const TopicSimMatrix& tm);

// Repeatedly folds the most similar qualifying cluster into `changed_id`
// while centroid similarity exceeds cluster_threshold. Returns absorbed ids.
std::vector<int> merge_pass(ClusterState& state, int changed_id, const ClusterParams& p,
                            const TopicSimMatrix& tm);

using ReprIndex = std::unordered_map<std::string, NewsRepr>;

// Max-linkage: the best similarity to any member.
double baseline_distance(const NewsRepr& repr, const Cluster& cluster, const ReprIndex& members,
                         const SimWeights& w, const TopicSimMatrix& tm);

// Classic Single-Pass with max-linkage distance, no merging, no time gate.
// Every processed sample is compared, so sim_eval_counter grows by the
// number of articles seen so far. The repr is added to `members`.
Assignment assign_baseline(ClusterState& state, ReprIndex& members, const NewsRepr& repr,
                           const ClusterParams& p, const TopicSimMatrix& tm);

}  // namespace xlnews
