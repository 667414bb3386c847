#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>

#include <json.hpp>

#include "xlnews/cluster.hpp"
#include "xlnews/embedding.hpp"
#include "xlnews/eval.hpp"
#include "xlnews/lda.hpp"
#include "xlnews/topicsim.hpp"

namespace xlnews {

struct EmbedderChoice {
  enum class Kind { store, hash };
  Kind kind = Kind::store;
  std::uint64_t seed = 0;  // hash only
  std::size_t dim = 768;   // hash only
};

// Paths in a config file are resolved against the file's directory.
struct PipelineConfig {
  std::filesystem::path corpus;
  std::filesystem::path vector_store;
  std::filesystem::path lda_model;
  std::filesystem::path topic_matrix;
  std::filesystem::path cluster_state;
  std::filesystem::path assignment_log;
  std::filesystem::path report;

  LdaConfig lda = LdaConfig::with_topics(22);
  ClusterParams coarse = ClusterParams::coarse_defaults();
  ClusterParams fine = ClusterParams::fine_defaults();
  ClusterMode mode = ClusterMode::coarse;
  std::size_t topic_words = 10;
  EmbedderChoice embedder;
  double noise_fraction = kDefaultNoiseFraction;
  bool resume = false;

  const ClusterParams& params(ClusterMode m) const { return m == ClusterMode::coarse ? coarse : fine; }

  static PipelineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static PipelineConfig load(const std::filesystem::path& path);
};

std::unique_ptr<EmbeddingProvider> make_provider(const PipelineConfig& cfg);

// Each command writes its artifact(s) and a short summary to `log`.
void cmd_train_lda(const PipelineConfig& cfg, std::ostream& log);
void cmd_topic_matrix(const PipelineConfig& cfg, std::ostream& log);
void cmd_cluster(const PipelineConfig& cfg, ClusterMode mode, std::ostream& log);
void cmd_evaluate(const PipelineConfig& cfg, std::ostream& log);
void cmd_pipeline(const PipelineConfig& cfg, ClusterMode mode, std::ostream& log);

// Everything cmd_evaluate writes, as one JSON document.
nlohmann::json evaluation_report(const ClusterState& state, std::span<const NewsArticle> articles,
                                 double noise_fraction);

}  // namespace xlnews
