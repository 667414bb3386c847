#include "xlnews/lda.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

namespace xlnews {

using nlohmann::json;

// ---------------------------------------------------------------- config

LdaConfig LdaConfig::with_topics(int K) {
  LdaConfig cfg;
  cfg.K = K;
  cfg.alpha = K > 0 ? 50.0 / K : 0.0;
  return cfg;
}

void LdaConfig::validate() const {
  if (K < 2) throw ConfigError("lda: K must be >= 2");
  if (!(alpha > 0) || !(beta > 0)) throw ConfigError("lda: alpha and beta must be positive");
  if (burn_in < 0 || train_iters <= burn_in) {
    throw ConfigError("lda: need train_iters > burn_in >= 0");
  }
  if (infer_burn_in < 0 || infer_iters <= infer_burn_in) {
    throw ConfigError("lda: need infer_iters > infer_burn_in >= 0");
  }
}

json LdaConfig::to_json() const {
  return {{"K", K},
          {"alpha", alpha},
          {"beta", beta},
          {"train_iters", train_iters},
          {"burn_in", burn_in},
          {"infer_iters", infer_iters},
          {"infer_burn_in", infer_burn_in},
          {"seed", seed}};
}

LdaConfig LdaConfig::from_json(const json& j) {
  try {
    LdaConfig cfg = with_topics(j.value("K", 22));
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.beta = j.value("beta", cfg.beta);
    cfg.train_iters = j.value("train_iters", cfg.train_iters);
    cfg.burn_in = j.value("burn_in", cfg.burn_in);
    cfg.infer_iters = j.value("infer_iters", cfg.infer_iters);
    cfg.infer_burn_in = j.value("infer_burn_in", cfg.infer_burn_in);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("lda config: ") + e.what());
  }
}

// ---------------------------------------------------------------- model

LdaModel::LdaModel(std::vector<std::string> vocab, Eigen::MatrixXd phi, double beta)
    : vocab_(std::move(vocab)), phi_(std::move(phi)), beta_(beta) {
  if (phi_.rows() < 1) throw Error("lda model: no topics");
  if (static_cast<std::size_t>(phi_.cols()) != vocab_.size()) {
    throw Error("lda model: phi has " + std::to_string(phi_.cols()) + " columns but vocab has " +
                std::to_string(vocab_.size()) + " words");
  }
  for (Eigen::Index k = 0; k < phi_.rows(); ++k) {
    const double s = phi_.row(k).sum();
    if (std::abs(s - 1.0) > 1e-9) {
      throw Error("lda model: phi row " + std::to_string(k) + " sums to " + std::to_string(s));
    }
  }
  if (!(phi_.array() > 0.0).all()) throw Error("lda model: phi entries must be positive");
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], static_cast<int>(i)).second) {
      throw Error("lda model: duplicate vocabulary word \"" + vocab_[i] + "\"");
    }
  }
}

std::optional<int> LdaModel::word_id(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

json LdaModel::to_json() const {
  json rows = json::array();
  for (Eigen::Index k = 0; k < phi_.rows(); ++k) {
    rows.push_back(std::vector<double>(phi_.row(k).begin(), phi_.row(k).end()));
  }
  return {{"K", phi_.rows()}, {"beta", beta_}, {"vocab", vocab_}, {"phi", std::move(rows)}};
}

LdaModel LdaModel::from_json(const json& j) {
  try {
    const int K = j.at("K").get<int>();
    auto vocab = j.at("vocab").get<std::vector<std::string>>();
    const auto& rows = j.at("phi");
    if (static_cast<int>(rows.size()) != K) throw Error("lda model: K does not match phi rows");
    Eigen::MatrixXd phi(K, static_cast<Eigen::Index>(vocab.size()));
    for (int k = 0; k < K; ++k) {
      const auto row = rows[k].get<std::vector<double>>();
      if (row.size() != vocab.size()) throw Error("lda model: phi row length mismatch");
      phi.row(k) = Eigen::Map<const Eigen::RowVectorXd>(row.data(), static_cast<Eigen::Index>(row.size()));
    }
    return LdaModel(std::move(vocab), std::move(phi), j.at("beta").get<double>());
  } catch (const json::exception& e) {
    throw Error(std::string("lda model: ") + e.what());
  }
}

void LdaModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write lda model: " + path.string());
  out << to_json().dump() << '\n';
}

LdaModel LdaModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("lda model not found: " + path.string());
  try {
    return from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error("lda model " + path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------- sampling

namespace {

// mt19937_64 output is fully specified by the standard; the conversion to
// [0,1) is done here so results do not depend on the library's
// distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  int below(int n) { return static_cast<int>(uniform() * n); }

 private:
  std::mt19937_64 engine_;
};

int sample_index(const std::vector<double>& weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = rng.uniform() * total;
  const int n = static_cast<int>(weights.size());
  for (int k = 0; k < n; ++k) {
    u -= weights[k];
    if (u < 0.0) return k;
  }
  return n - 1;
}

}  // namespace

LdaModel train_lda(std::span<const TokenizedDoc> docs, const LdaConfig& cfg, TrainStats* stats) {
  cfg.validate();
  std::set<std::string> words;
  std::size_t total_tokens = 0;
  for (const auto& d : docs) {
    for (const auto& t : d.tokens) words.insert(t);
    total_tokens += d.tokens.size();
  }
  if (total_tokens == 0) throw Error("train_lda: empty corpus");

  std::vector<std::string> vocab(words.begin(), words.end());
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < vocab.size(); ++i) index.emplace(vocab[i], static_cast<int>(i));

  const int K = cfg.K;
  const int V = static_cast<int>(vocab.size());
  if (stats) {
    stats->num_docs = docs.size();
    stats->num_tokens = total_tokens;
    if (V < K) {
      stats->warnings.push_back("vocabulary size " + std::to_string(V) +
                                " is smaller than the number of topics " + std::to_string(K));
    }
  }

  Rng rng(cfg.seed);
  std::vector<std::vector<int>> word_ids(docs.size());
  std::vector<std::vector<int>> z(docs.size());
  std::vector<int> n_wk(static_cast<std::size_t>(V) * K, 0);  // word-major
  std::vector<int> n_k(K, 0);
  std::vector<std::vector<int>> n_dk(docs.size(), std::vector<int>(K, 0));

  for (std::size_t d = 0; d < docs.size(); ++d) {
    for (const auto& t : docs[d].tokens) {
      const int w = index.at(t);
      const int k = rng.below(K);
      word_ids[d].push_back(w);
      z[d].push_back(k);
      ++n_wk[static_cast<std::size_t>(w) * K + k];
      ++n_k[k];
      ++n_dk[d][k];
    }
  }

  const double vbeta = V * cfg.beta;
  std::vector<double> p(K);
  for (int it = 0; it < cfg.train_iters; ++it) {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      auto& zd = z[d];
      auto& nd = n_dk[d];
      for (std::size_t i = 0; i < zd.size(); ++i) {
        const int w = word_ids[d][i];
        int* nw = &n_wk[static_cast<std::size_t>(w) * K];
        int k = zd[i];
        --nw[k];
        --n_k[k];
        --nd[k];
        for (int t = 0; t < K; ++t) {
          p[t] = (nd[t] + cfg.alpha) * (nw[t] + cfg.beta) / (n_k[t] + vbeta);
        }
        k = sample_index(p, rng);
        zd[i] = k;
        ++nw[k];
        ++n_k[k];
        ++nd[k];
      }
    }
    assert(static_cast<std::size_t>(std::accumulate(n_k.begin(), n_k.end(), 0)) == total_tokens);
  }

  Eigen::MatrixXd phi(K, V);
  for (int k = 0; k < K; ++k) {
    for (int w = 0; w < V; ++w) {
      phi(k, w) = (n_wk[static_cast<std::size_t>(w) * K + k] + cfg.beta) / (n_k[k] + vbeta);
    }
  }
  return LdaModel(std::move(vocab), std::move(phi), cfg.beta);
}

TopicDistribution infer_topics(const LdaModel& model, const TokenizedDoc& doc,
                               const LdaConfig& cfg, InferStats* stats) {
  const int K = model.num_topics();
  std::vector<int> ids;
  std::size_t dropped = 0;
  for (const auto& t : doc.tokens) {
    if (auto id = model.word_id(t)) {
      ids.push_back(*id);
    } else {
      ++dropped;
    }
  }
  if (stats) {
    stats->kept_tokens = ids.size();
    stats->dropped_tokens = dropped;
  }
  if (ids.empty()) return TopicDistribution::Constant(K, 1.0 / K);

  // Canonical visit order: the result does not depend on token order.
  std::sort(ids.begin(), ids.end());

  const auto& phi = model.phi();
  Rng rng(cfg.seed);
  std::vector<int> z(ids.size());
  std::vector<int> n_k(K, 0);
  for (auto& k : z) {
    k = rng.below(K);
    ++n_k[k];
  }
  Eigen::VectorXd accum = Eigen::VectorXd::Zero(K);
  std::vector<double> p(K);
  for (int it = 0; it < cfg.infer_iters; ++it) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      --n_k[z[i]];
      for (int t = 0; t < K; ++t) p[t] = (n_k[t] + cfg.alpha) * phi(t, ids[i]);
      z[i] = sample_index(p, rng);
      ++n_k[z[i]];
    }
    if (it >= cfg.infer_burn_in) {
      for (int t = 0; t < K; ++t) accum[t] += n_k[t];
    }
  }
  accum /= static_cast<double>(cfg.infer_iters - cfg.infer_burn_in);
  const double n = static_cast<double>(ids.size());
  TopicDistribution probs = (accum.array() + cfg.alpha) / (n + K * cfg.alpha);
  return probs / probs.sum();
}

std::vector<std::string> top_words(const LdaModel& model, int topic, std::size_t m) {
  if (topic < 0 || topic >= model.num_topics()) {
    throw Error("top_words: topic index " + std::to_string(topic) + " out of range");
  }
  if (m < 1 || m > model.vocab_size()) {
    throw Error("top_words: m must be in [1, " + std::to_string(model.vocab_size()) + "]");
  }
  const auto& vocab = model.vocab();
  const auto row = model.phi().row(topic);
  std::vector<int> order(vocab.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m), order.end(),
                    [&](int a, int b) {
                      if (row[a] != row[b]) return row[a] > row[b];
                      return vocab[a] < vocab[b];
                    });
  std::vector<std::string> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) out.push_back(vocab[order[i]]);
  return out;
}

}  // namespace xlnews
