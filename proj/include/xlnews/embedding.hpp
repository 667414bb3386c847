#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "xlnews/error.hpp"

namespace xlnews {

using Vector = Eigen::VectorXd;

// Sentence-embedding models accept at most this many characters.
inline constexpr std::size_t kMaxEmbedChars = 128;

// Truncates to the first n Unicode code points.
std::string truncate_chars(std::string_view text, std::size_t n = kMaxEmbedChars);

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dim() const = 0;
  // Receives already-truncated text.
  virtual Vector lookup(const std::string& text) const = 0;
};

// Truncates, then delegates to the provider. Throws on empty text.
Vector embed(const EmbeddingProvider& provider, std::string_view text);

// Exact-key lookup table loaded from the vector-store JSONL format:
//   {"dim": d}
//   {"key": "...", "vec": [d doubles]}
class VectorStore final : public EmbeddingProvider {
 public:
  explicit VectorStore(std::size_t dim);

  // Non-fatal oddities (e.g. a repeated key with an identical vector) are
  // appended to *warnings when given.
  static VectorStore load(const std::filesystem::path& path,
                          std::vector<std::string>* warnings = nullptr);
  static VectorStore read(std::istream& in, std::vector<std::string>* warnings = nullptr);
  void save(const std::filesystem::path& path) const;
  void write(std::ostream& out) const;

  // Key is stored verbatim; callers pass already-truncated text.
  void insert(std::string key, Vector vec);
  bool contains(const std::string& key) const { return entries_.contains(key); }
  std::size_t size() const { return entries_.size(); }

  std::size_t dim() const override { return dim_; }
  Vector lookup(const std::string& text) const override;

 private:
  std::size_t dim_;
  std::map<std::string, Vector> entries_;
};

// Deterministic pseudo-random unit vectors keyed by (text, seed, dim).
// Stands in for a real cross-language model in tests and demos.
class HashEmbedder final : public EmbeddingProvider {
 public:
  explicit HashEmbedder(std::size_t dim = 768, std::uint64_t seed = 0);
  std::size_t dim() const override { return dim_; }
  std::uint64_t seed() const { return seed_; }
  Vector lookup(const std::string& text) const override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cosine_similarity(const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) throw Error("cosine_similarity: dimension mismatch");
  const auto na = a.norm();
  const auto nb = b.norm();
  if (na == 0 || nb == 0) throw Error("undefined cosine: zero vector");
  const auto c = a.dot(b) / (na * nb);
  return std::clamp(c, typename DerivedA::Scalar(-1), typename DerivedA::Scalar(1));
}

// Sum over pairs of ||S_zh - T_en||^2 + ||S_en - T_zh||^2: each student
// sentence should land on the teacher vector of its translation.
double distillation_loss(std::span<const Vector> student_zh, std::span<const Vector> student_en,
                         std::span<const Vector> teacher_zh, std::span<const Vector> teacher_en);

}  // namespace xlnews
