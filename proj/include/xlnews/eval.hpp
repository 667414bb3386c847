#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "xlnews/corpus.hpp"

namespace xlnews {

using AssignmentMap = std::unordered_map<std::string, int>;  // article -> cluster
using LabelMap = std::unordered_map<std::string, std::string>;
using LangMap = std::unordered_map<std::string, Lang>;
using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Rows are gold classes, columns predictions, in `labels` order.
struct ConfusionMatrix {
  std::vector<std::string> labels;
  CountMatrix counts;

  std::int64_t total() const { return counts.sum(); }
};

struct KappaResult {
  double p0 = 0.0;  // observed agreement
  double pe = 0.0;  // chance agreement from row/column marginals
  double k = 0.0;
};

KappaResult kappa(const ConfusionMatrix& cm);

struct ClusterPurity {
  int cluster_id = 0;
  std::size_t size = 0;
  std::map<std::string, std::size_t> histogram;
  std::string majority_label;  // ties go to the smaller label
  std::size_t majority_count = 0;
  double purity = 0.0;
  bool excluded = false;  // below the noise fraction
};

struct ClusterReport {
  std::vector<ClusterPurity> per_cluster;  // ascending cluster id
  std::vector<int> excluded;
  std::size_t total_articles = 0;
  // Majority members over members, pooled across retained clusters.
  double average_purity = 0.0;
  // Unweighted mean of retained per-cluster purities.
  double mean_purity = 0.0;
};

// Default share of all articles below which a cluster counts as noise.
inline constexpr double kDefaultNoiseFraction = 0.04;

// Throws when an assigned article has no label, naming the unlabeled ids.
ClusterReport purity(const AssignmentMap& assignments, const LabelMap& labels,
                     double noise_fraction = kDefaultNoiseFraction);

struct LanguageBalance {
  int cluster_id = 0;
  std::string majority_label;
  std::size_t zh = 0;
  std::size_t en = 0;
  double zh_proportion = 0.0;
};

struct LanguageBalanceReport {
  std::vector<LanguageBalance> per_cluster;  // retained clusters only
  std::size_t zh_total = 0;
  std::size_t en_total = 0;
  double zh_proportion = 0.0;
};

// Language split among each retained cluster's majority-label members.
LanguageBalanceReport language_balance(const AssignmentMap& assignments, const LangMap& langs,
                                       const LabelMap& labels,
                                       double noise_fraction = kDefaultNoiseFraction);

struct EventScore {
  std::string event;
  std::optional<int> cluster;
  std::size_t overlap = 0;
  std::size_t cluster_size = 0;
  std::size_t event_size = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EventReport {
  std::vector<EventScore> per_event;  // ascending event name
  std::size_t total_articles = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
};

// `mapping` sends each evaluated cluster to one event; an event may be the
// target of at most one cluster. Events without a cluster score zero.
EventReport event_prf(const AssignmentMap& assignments, const LabelMap& labels,
                      const std::map<int, std::string>& mapping);

// Each non-excluded cluster maps to its majority label. When two clusters
// claim the same event the larger overlap wins (ties: lower cluster id).
std::map<int, std::string> majority_mapping(const AssignmentMap& assignments,
                                            const LabelMap& labels,
                                            const std::set<int>& excluded = {});

inline constexpr const char* kUnmappedLabel = "(unmapped)";

// Gold event vs the event of the cluster the article landed in; articles
// in unmapped clusters fall in the "(unmapped)" column.
ConfusionMatrix mapped_confusion(const AssignmentMap& assignments, const LabelMap& labels,
                                 const std::map<int, std::string>& mapping);

nlohmann::json to_json(const KappaResult& r);
nlohmann::json to_json(const ClusterReport& r);
nlohmann::json to_json(const LanguageBalanceReport& r);
nlohmann::json to_json(const EventReport& r);

// Aligned plain-text tables.
std::string format_purity_table(const ClusterReport& r);
std::string format_language_table(const LanguageBalanceReport& r);
std::string format_event_table(const EventReport& r);

}  // namespace xlnews
