#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "xlnews/corpus.hpp"

namespace xlnews {

// Collapsed Gibbs sampler settings. Defaults follow common practice:
// alpha = 50/K, beta = 0.01, 1000 training sweeps, 100 inference sweeps of
// which the first 20 are burn-in.
struct LdaConfig {
  int K = 22;
  double alpha = 50.0 / 22;
  double beta = 0.01;
  int train_iters = 1000;
  int burn_in = 200;
  int infer_iters = 100;
  int infer_burn_in = 20;
  std::uint64_t seed = 1;

  static LdaConfig with_topics(int K);
  void validate() const;  // throws ConfigError

  nlohmann::json to_json() const;
  // Missing keys keep their defaults; alpha defaults to 50/K for the given K.
  static LdaConfig from_json(const nlohmann::json& j);
};

// Per-document topic mixture, length K, sums to 1.
using TopicDistribution = Eigen::VectorXd;

// Topic-word matrix plus its vocabulary. The document-topic side of training
// is discarded: inference only ever needs phi.
class LdaModel {
 public:
  // phi is K x V with rows summing to one. Throws on invalid input.
  LdaModel(std::vector<std::string> vocab, Eigen::MatrixXd phi, double beta);

  int num_topics() const { return static_cast<int>(phi_.rows()); }
  std::size_t vocab_size() const { return vocab_.size(); }
  const std::vector<std::string>& vocab() const { return vocab_; }
  const Eigen::MatrixXd& phi() const { return phi_; }
  double beta() const { return beta_; }
  std::optional<int> word_id(const std::string& word) const;

  nlohmann::json to_json() const;
  static LdaModel from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static LdaModel load(const std::filesystem::path& path);

 private:
  std::vector<std::string> vocab_;
  Eigen::MatrixXd phi_;
  double beta_;
  std::unordered_map<std::string, int> index_;
};

struct TrainStats {
  std::size_t num_docs = 0;
  std::size_t num_tokens = 0;
  std::vector<std::string> warnings;
};

LdaModel train_lda(std::span<const TokenizedDoc> docs, const LdaConfig& cfg,
                   TrainStats* stats = nullptr);

struct InferStats {
  std::size_t kept_tokens = 0;
  std::size_t dropped_tokens = 0;  // out of vocabulary
};

// Out-of-vocabulary tokens are dropped. A document with no known tokens gets
// the uniform distribution.
TopicDistribution infer_topics(const LdaModel& model, const TokenizedDoc& doc,
                               const LdaConfig& cfg, InferStats* stats = nullptr);

// The m most probable words of a topic, ties broken by ascending word.
std::vector<std::string> top_words(const LdaModel& model, int topic, std::size_t m);

}  // namespace xlnews
