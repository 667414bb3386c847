#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "xlnews/date.hpp"
#include "xlnews/error.hpp"

namespace xlnews {

enum class Lang { zh, en };

std::string_view to_string(Lang lang);
Lang parse_lang(std::string_view s);

struct NewsArticle {
  std::string id;
  std::string title;
  std::string body;
  std::optional<std::vector<std::string>> tokens;  // pre-tokenized body
  Lang lang = Lang::en;
  Date published_at;
  std::optional<std::string> label;  // gold topic/event, evaluation only

  friend bool operator==(const NewsArticle&, const NewsArticle&) = default;
};

struct TokenizedDoc {
  std::string article_id;
  std::vector<std::string> tokens;
};

struct LineError {
  std::size_t line;  // 1-based
  std::string message;
};

// Raised by the JSONL reader. what() lists every offending line; errors()
// exposes them individually.
class CorpusError : public Error {
 public:
  explicit CorpusError(std::vector<LineError> errors);
  const std::vector<LineError>& errors() const { return errors_; }

 private:
  std::vector<LineError> errors_;
};

// One JSON object per line, file order preserved. Blank lines are skipped.
// Throws ConfigError when the file is missing, CorpusError on bad lines.
std::vector<NewsArticle> load_articles(const std::filesystem::path& path);
std::vector<NewsArticle> read_articles(std::istream& in);

NewsArticle article_from_json(const nlohmann::json& j);
nlohmann::json to_json(const NewsArticle& a);
void write_articles(std::ostream& out, std::span<const NewsArticle> articles);

// Pre-tokenized input passes through unchanged. Otherwise English bodies
// are split on whitespace, stripped of punctuation and lowercased; Chinese
// bodies become overlapping character bigrams within punctuation-free runs.
TokenizedDoc tokenize(const NewsArticle& article);

// UTF-8 helpers shared with the embedding side.
std::vector<char32_t> decode_utf8(std::string_view s);
std::string encode_utf8(std::span<const char32_t> cps);

}  // namespace xlnews
