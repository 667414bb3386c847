#include "xlnews/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace xlnews {

using nlohmann::json;

KappaResult kappa(const ConfusionMatrix& cm) {
  if (cm.counts.rows() != cm.counts.cols()) throw Error("kappa: confusion matrix must be square");
  if ((cm.counts.array() < 0).any()) throw Error("kappa: negative count");
  const double total = static_cast<double>(cm.total());
  if (total <= 0) throw Error("kappa: empty confusion matrix");
  const Eigen::VectorXd rows = cm.counts.rowwise().sum().cast<double>();
  const Eigen::VectorXd cols = cm.counts.colwise().sum().transpose().cast<double>();
  KappaResult r;
  r.p0 = static_cast<double>(cm.counts.trace()) / total;
  r.pe = rows.dot(cols) / (total * total);
  if (r.pe >= 1.0) throw Error("kappa: chance agreement is 1 (single-class data)");
  r.k = (r.p0 - r.pe) / (1.0 - r.pe);
  return r;
}

namespace {

using Histograms = std::map<int, std::map<std::string, std::size_t>>;

Histograms label_histograms(const AssignmentMap& assignments, const LabelMap& labels) {
  Histograms h;
  std::vector<std::string> missing;
  for (const auto& [article, cluster] : assignments) {
    auto it = labels.find(article);
    if (it == labels.end()) {
      missing.push_back(article);
      continue;
    }
    ++h[cluster][it->second];
  }
  if (!missing.empty()) {
    std::sort(missing.begin(), missing.end());
    std::string msg = "missing labels for " + std::to_string(missing.size()) + " article(s):";
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) msg += " " + missing[i];
    if (missing.size() > 20) msg += " ...";
    throw Error(msg);
  }
  return h;
}

std::pair<std::string, std::size_t> majority(const std::map<std::string, std::size_t>& hist) {
  std::pair<std::string, std::size_t> best{"", 0};
  for (const auto& [label, n] : hist) {  // ascending label: first max wins ties
    if (n > best.second) best = {label, n};
  }
  return best;
}

std::string fmt4(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

// Right-aligned columns sized to the widest cell.
std::string render(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    width.resize(std::max(width.size(), r.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  std::ostringstream out;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out << "  ";
      out << std::string(width[i] - r[i].size(), ' ') << r[i];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

ClusterReport purity(const AssignmentMap& assignments, const LabelMap& labels,
                     double noise_fraction) {
  if (!(noise_fraction >= 0.0 && noise_fraction < 1.0)) {
    throw Error("purity: noise fraction must be in [0, 1)");
  }
  const auto hist = label_histograms(assignments, labels);
  ClusterReport report;
  report.total_articles = assignments.size();
  std::size_t pooled_major = 0;
  std::size_t pooled_size = 0;
  double purity_sum = 0.0;
  for (const auto& [cluster, h] : hist) {
    ClusterPurity cp;
    cp.cluster_id = cluster;
    cp.histogram = h;
    for (const auto& [label, n] : h) cp.size += n;
    std::tie(cp.majority_label, cp.majority_count) = majority(h);
    cp.purity = static_cast<double>(cp.majority_count) / static_cast<double>(cp.size);
    cp.excluded = static_cast<double>(cp.size) <
                  noise_fraction * static_cast<double>(report.total_articles);
    if (cp.excluded) {
      report.excluded.push_back(cluster);
    } else {
      pooled_major += cp.majority_count;
      pooled_size += cp.size;
      purity_sum += cp.purity;
    }
    report.per_cluster.push_back(std::move(cp));
  }
  const std::size_t retained = report.per_cluster.size() - report.excluded.size();
  if (retained > 0) {
    report.average_purity = static_cast<double>(pooled_major) / static_cast<double>(pooled_size);
    report.mean_purity = purity_sum / static_cast<double>(retained);
  }
  return report;
}

LanguageBalanceReport language_balance(const AssignmentMap& assignments, const LangMap& langs,
                                       const LabelMap& labels, double noise_fraction) {
  const ClusterReport pr = purity(assignments, labels, noise_fraction);
  std::map<int, LanguageBalance> by_cluster;
  for (const auto& cp : pr.per_cluster) {
    if (!cp.excluded) by_cluster[cp.cluster_id] = {cp.cluster_id, cp.majority_label, 0, 0, 0.0};
  }
  for (const auto& [article, cluster] : assignments) {
    auto it = by_cluster.find(cluster);
    if (it == by_cluster.end() || labels.at(article) != it->second.majority_label) continue;
    auto lang = langs.find(article);
    if (lang == langs.end()) throw Error("language_balance: no language for article \"" + article + "\"");
    ++(lang->second == Lang::zh ? it->second.zh : it->second.en);
  }
  LanguageBalanceReport report;
  for (auto& [id, lb] : by_cluster) {
    const std::size_t n = lb.zh + lb.en;
    lb.zh_proportion = n ? static_cast<double>(lb.zh) / static_cast<double>(n) : 0.0;
    report.zh_total += lb.zh;
    report.en_total += lb.en;
    report.per_cluster.push_back(lb);
  }
  const std::size_t n = report.zh_total + report.en_total;
  report.zh_proportion = n ? static_cast<double>(report.zh_total) / static_cast<double>(n) : 0.0;
  return report;
}

EventReport event_prf(const AssignmentMap& assignments, const LabelMap& labels,
                      const std::map<int, std::string>& mapping) {
  const auto hist = label_histograms(assignments, labels);
  std::map<std::string, int> event_cluster;
  for (const auto& [cluster, event] : mapping) {
    auto [it, inserted] = event_cluster.emplace(event, cluster);
    if (!inserted) {
      throw Error("event_prf: clusters " + std::to_string(it->second) + " and " +
                  std::to_string(cluster) + " both map to event \"" + event + "\"");
    }
  }
  std::map<std::string, std::size_t> event_size;
  std::map<int, std::size_t> cluster_size;
  for (const auto& [cluster, h] : hist) {
    for (const auto& [label, n] : h) {
      event_size[label] += n;
      cluster_size[cluster] += n;
    }
  }
  EventReport report;
  report.total_articles = assignments.size();
  for (const auto& [event, size] : event_size) {
    EventScore s;
    s.event = event;
    s.event_size = size;
    if (auto it = event_cluster.find(event); it != event_cluster.end()) {
      s.cluster = it->second;
      s.cluster_size = cluster_size[it->second];
      if (auto h = hist.find(it->second); h != hist.end()) {
        if (auto n = h->second.find(event); n != h->second.end()) s.overlap = n->second;
      }
    }
    if (s.cluster_size) s.precision = static_cast<double>(s.overlap) / static_cast<double>(s.cluster_size);
    s.recall = static_cast<double>(s.overlap) / static_cast<double>(s.event_size);
    if (s.overlap) s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
    report.correct += s.overlap;
    report.per_event.push_back(std::move(s));
  }
  if (report.total_articles) {
    report.accuracy = static_cast<double>(report.correct) / static_cast<double>(report.total_articles);
  }
  return report;
}

std::map<int, std::string> majority_mapping(const AssignmentMap& assignments,
                                            const LabelMap& labels, const std::set<int>& excluded) {
  const auto hist = label_histograms(assignments, labels);
  std::map<std::string, std::pair<int, std::size_t>> winner;  // event -> (cluster, overlap)
  for (const auto& [cluster, h] : hist) {
    if (excluded.contains(cluster)) continue;
    const auto [label, n] = majority(h);
    auto it = winner.find(label);
    if (it == winner.end() || n > it->second.second) winner[label] = {cluster, n};
  }
  std::map<int, std::string> mapping;
  for (const auto& [event, cn] : winner) mapping[cn.first] = event;
  return mapping;
}

ConfusionMatrix mapped_confusion(const AssignmentMap& assignments, const LabelMap& labels,
                                 const std::map<int, std::string>& mapping) {
  std::set<std::string> events;
  for (const auto& [article, cluster] : assignments) {
    auto it = labels.find(article);
    if (it == labels.end()) throw Error("mapped_confusion: no label for article \"" + article + "\"");
    events.insert(it->second);
  }
  for (const auto& [cluster, event] : mapping) events.insert(event);
  ConfusionMatrix cm;
  cm.labels.assign(events.begin(), events.end());
  cm.labels.push_back(kUnmappedLabel);
  std::map<std::string, Eigen::Index> index;
  for (std::size_t i = 0; i < cm.labels.size(); ++i) index[cm.labels[i]] = static_cast<Eigen::Index>(i);
  const auto L = static_cast<Eigen::Index>(cm.labels.size());
  cm.counts = CountMatrix::Zero(L, L);
  for (const auto& [article, cluster] : assignments) {
    auto m = mapping.find(cluster);
    const auto col = m == mapping.end() ? L - 1 : index.at(m->second);
    ++cm.counts(index.at(labels.at(article)), col);
  }
  return cm;
}

// ---------------------------------------------------------------- output

json to_json(const KappaResult& r) { return {{"p0", r.p0}, {"pe", r.pe}, {"kappa", r.k}}; }

json to_json(const ClusterReport& r) {
  json clusters = json::array();
  for (const auto& c : r.per_cluster) {
    clusters.push_back({{"cluster", c.cluster_id},
                        {"size", c.size},
                        {"labels", c.histogram},
                        {"majority_label", c.majority_label},
                        {"majority_count", c.majority_count},
                        {"purity", c.purity},
                        {"excluded", c.excluded}});
  }
  return {{"clusters", std::move(clusters)},
          {"excluded", r.excluded},
          {"total_articles", r.total_articles},
          {"average_purity", r.average_purity},
          {"mean_purity", r.mean_purity}};
}

json to_json(const LanguageBalanceReport& r) {
  json clusters = json::array();
  for (const auto& c : r.per_cluster) {
    clusters.push_back({{"cluster", c.cluster_id},
                        {"majority_label", c.majority_label},
                        {"zh", c.zh},
                        {"en", c.en},
                        {"zh_proportion", c.zh_proportion}});
  }
  return {{"clusters", std::move(clusters)},
          {"zh_total", r.zh_total},
          {"en_total", r.en_total},
          {"zh_proportion", r.zh_proportion}};
}

json to_json(const EventReport& r) {
  json events = json::array();
  for (const auto& e : r.per_event) {
    events.push_back({{"event", e.event},
                      {"cluster", e.cluster ? json(*e.cluster) : json(nullptr)},
                      {"overlap", e.overlap},
                      {"cluster_size", e.cluster_size},
                      {"event_size", e.event_size},
                      {"precision", e.precision},
                      {"recall", e.recall},
                      {"f1", e.f1}});
  }
  return {{"events", std::move(events)},
          {"total_articles", r.total_articles},
          {"correct", r.correct},
          {"accuracy", r.accuracy}};
}

std::string format_purity_table(const ClusterReport& r) {
  std::vector<std::vector<std::string>> rows{{"Cluster", "Size", "Majority", "Purity"}};
  for (const auto& c : r.per_cluster) {
    rows.push_back({std::to_string(c.cluster_id) + (c.excluded ? "*" : ""), std::to_string(c.size),
                    c.majority_label, fmt4(c.purity)});
  }
  rows.push_back({"AVG", "", "", fmt4(r.average_purity)});
  rows.push_back({"MEAN", "", "", fmt4(r.mean_purity)});
  std::string out = render(rows);
  if (!r.excluded.empty()) out += "* excluded as noise\n";
  return out;
}

std::string format_language_table(const LanguageBalanceReport& r) {
  std::vector<std::vector<std::string>> rows{{"Cluster", "Majority", "zh", "en", "Total", "zh share"}};
  for (const auto& c : r.per_cluster) {
    rows.push_back({std::to_string(c.cluster_id), c.majority_label, std::to_string(c.zh),
                    std::to_string(c.en), std::to_string(c.zh + c.en), fmt4(c.zh_proportion)});
  }
  rows.push_back({"total", "", std::to_string(r.zh_total), std::to_string(r.en_total),
                  std::to_string(r.zh_total + r.en_total), fmt4(r.zh_proportion)});
  return render(rows);
}

std::string format_event_table(const EventReport& r) {
  std::vector<std::vector<std::string>> rows{{"Event", "Cluster", "Precision", "Recall", "F1"}};
  for (const auto& e : r.per_event) {
    rows.push_back({e.event, e.cluster ? std::to_string(*e.cluster) : "-", fmt4(e.precision),
                    fmt4(e.recall), fmt4(e.f1)});
  }
  std::string out = render(rows);
  out += "accuracy " + fmt4(r.accuracy) + " (" + std::to_string(r.correct) + "/" +
         std::to_string(r.total_articles) + ")\n";
  return out;
}

}  // namespace xlnews
