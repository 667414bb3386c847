#include "xlnews/embedding.hpp"

#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "xlnews/corpus.hpp"

namespace xlnews {

using nlohmann::json;

std::string truncate_chars(std::string_view text, std::size_t n) {
  const auto cps = decode_utf8(text);
  if (cps.size() <= n) return std::string(text);
  return encode_utf8(std::span(cps).first(n));
}

Vector embed(const EmbeddingProvider& provider, std::string_view text) {
  if (text.empty()) throw Error("embed: empty text");
  Vector v = provider.lookup(truncate_chars(text));
  if (static_cast<std::size_t>(v.size()) != provider.dim()) {
    throw Error("embed: provider returned wrong dimension");
  }
  return v;
}

// ---------------------------------------------------------------- store

VectorStore::VectorStore(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error("vector store dim must be positive");
}

void VectorStore::insert(std::string key, Vector vec) {
  if (static_cast<std::size_t>(vec.size()) != dim_) {
    throw Error("vector for key \"" + key + "\" has dim " + std::to_string(vec.size()) +
                ", expected " + std::to_string(dim_));
  }
  if (!vec.allFinite()) throw Error("vector for key \"" + key + "\" has non-finite entries");
  entries_.insert_or_assign(std::move(key), std::move(vec));
}

Vector VectorStore::lookup(const std::string& text) const {
  auto it = entries_.find(text);
  if (it == entries_.end()) throw Error("vector store has no entry for key \"" + text + "\"");
  return it->second;
}

VectorStore VectorStore::read(std::istream& in, std::vector<std::string>* warnings) {
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) -> Error {
    return Error("vector store line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") != std::string::npos) break;
  }
  if (lineno == 0 || line.empty()) throw Error("vector store: missing {\"dim\": d} header");
  json header;
  try {
    header = json::parse(line);
  } catch (const json::exception& e) {
    throw fail(std::string("malformed header: ") + e.what());
  }
  if (!header.is_object() || !header.contains("dim") || !header["dim"].is_number_integer() ||
      header["dim"].get<long long>() <= 0) {
    throw fail("header must be {\"dim\": positive int}");
  }
  VectorStore store(header["dim"].get<std::size_t>());
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw fail(std::string("malformed JSON: ") + e.what());
    }
    if (!rec.is_object() || !rec.contains("key") || !rec["key"].is_string() ||
        !rec.contains("vec") || !rec["vec"].is_array()) {
      throw fail("record must be {\"key\": str, \"vec\": [float]}");
    }
    const auto& arr = rec["vec"];
    if (arr.size() != store.dim_) {
      throw fail("vector length " + std::to_string(arr.size()) + " does not match dim " +
                 std::to_string(store.dim_));
    }
    Vector v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (!arr[i].is_number()) throw fail("non-numeric vector component");
      v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    }
    std::string key = rec["key"].get<std::string>();
    if (auto it = store.entries_.find(key); it != store.entries_.end()) {
      if (it->second != v) throw fail("conflicting vectors for key \"" + key + "\"");
      if (warnings) warnings->push_back("line " + std::to_string(lineno) + ": repeated key \"" + key + "\"");
      continue;
    }
    try {
      store.insert(std::move(key), std::move(v));
    } catch (const Error& e) {
      throw fail(e.what());
    }
  }
  return store;
}

VectorStore VectorStore::load(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ConfigError("vector store not found: " + path.string());
  return read(in, warnings);
}

void VectorStore::write(std::ostream& out) const {
  out << json{{"dim", dim_}}.dump() << '\n';
  for (const auto& [key, vec] : entries_) {
    json rec = {{"key", key}, {"vec", std::vector<double>(vec.begin(), vec.end())}};
    out << rec.dump() << '\n';
  }
}

void VectorStore::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write vector store: " + path.string());
  write(out);
}

// ---------------------------------------------------------------- hash

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform in (0, 1], 53 bits.
double unit_open(std::uint64_t& state) {
  return (static_cast<double>(splitmix64(state) >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

HashEmbedder::HashEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim == 0) throw Error("HashEmbedder dim must be positive");
}

Vector HashEmbedder::lookup(const std::string& text) const {
  std::uint64_t state = fnv1a(text) ^ (seed_ * 0x9e3779b97f4a7c15ULL) ^ (dim_ << 32);
  Vector v(static_cast<Eigen::Index>(dim_));
  // Box-Muller gives isotropic directions once normalized.
  for (Eigen::Index i = 0; i < v.size(); i += 2) {
    const double r = std::sqrt(-2.0 * std::log(unit_open(state)));
    const double theta = 2.0 * std::numbers::pi * unit_open(state);
    v[i] = r * std::cos(theta);
    if (i + 1 < v.size()) v[i + 1] = r * std::sin(theta);
  }
  v.normalize();
  return v;
}

// ---------------------------------------------------------------- loss

double distillation_loss(std::span<const Vector> student_zh, std::span<const Vector> student_en,
                         std::span<const Vector> teacher_zh, std::span<const Vector> teacher_en) {
  const std::size_t n = student_zh.size();
  if (student_en.size() != n || teacher_zh.size() != n || teacher_en.size() != n) {
    throw Error("distillation_loss: input lists differ in length");
  }
  if (n == 0) return 0.0;
  const auto dim = student_zh[0].size();
  double loss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (student_en[i].size() != dim || teacher_zh[i].size() != dim ||
        teacher_en[i].size() != dim || student_zh[i].size() != dim) {
      throw Error("distillation_loss: dimension mismatch at pair " + std::to_string(i));
    }
    loss += (student_zh[i] - teacher_en[i]).squaredNorm() +
            (student_en[i] - teacher_zh[i]).squaredNorm();
  }
  return loss;
}

}  // namespace xlnews
