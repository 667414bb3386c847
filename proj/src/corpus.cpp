#include "xlnews/corpus.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

namespace xlnews {

using nlohmann::json;

std::string_view to_string(Lang lang) { return lang == Lang::zh ? "zh" : "en"; }

Lang parse_lang(std::string_view s) {
  if (s == "zh") return Lang::zh;
  if (s == "en") return Lang::en;
  throw Error("unsupported lang '" + std::string(s) + "', expected zh or en");
}

namespace {

std::string format_errors(const std::vector<LineError>& errors) {
  std::string msg = "invalid corpus:";
  for (const auto& e : errors) {
    msg += "\n  line " + std::to_string(e.line) + ": " + e.message;
  }
  return msg;
}

const json& required(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) {
    throw Error(std::string("missing required field \"") + field + "\"");
  }
  return *it;
}

std::string required_string(const json& j, const char* field) {
  const json& v = required(j, field);
  if (!v.is_string()) throw Error(std::string("field \"") + field + "\" must be a string");
  return v.get<std::string>();
}

bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' ||
         c == U'\v' || c == 0x3000 || c == 0x00A0;
}

bool is_punct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  return (c >= 0x2000 && c <= 0x206F) ||  // general punctuation
         (c >= 0x3001 && c <= 0x303F) ||  // CJK symbols and punctuation
         (c >= 0xFF01 && c <= 0xFF0F) || (c >= 0xFF1A && c <= 0xFF20) ||
         (c >= 0xFF3B && c <= 0xFF40) || (c >= 0xFF5B && c <= 0xFF65) ||
         (c >= 0x00A1 && c <= 0x00BF);
}

std::vector<std::string> english_tokens(std::string_view body) {
  std::vector<std::string> out;
  std::u32string current;
  auto flush = [&] {
    if (!current.empty()) {
      out.push_back(encode_utf8(current));
      current.clear();
    }
  };
  for (char32_t c : decode_utf8(body)) {
    if (is_space(c)) {
      flush();
    } else if (!is_punct(c)) {
      if (c >= U'A' && c <= U'Z') c = c - U'A' + U'a';
      current.push_back(c);
    }
  }
  flush();
  return out;
}

std::vector<std::string> chinese_bigrams(std::string_view body) {
  std::vector<std::string> out;
  std::u32string run;
  auto flush = [&] {
    if (run.size() == 1) {
      out.push_back(encode_utf8(run));
    } else {
      for (std::size_t i = 0; i + 1 < run.size(); ++i) {
        out.push_back(encode_utf8(std::u32string_view(run).substr(i, 2)));
      }
    }
    run.clear();
  };
  for (char32_t c : decode_utf8(body)) {
    if (is_space(c) || is_punct(c)) {
      flush();
    } else {
      run.push_back(c);
    }
  }
  flush();
  return out;
}

}  // namespace

CorpusError::CorpusError(std::vector<LineError> errors)
    : Error(format_errors(errors)), errors_(std::move(errors)) {}

NewsArticle article_from_json(const json& j) {
  if (!j.is_object()) throw Error("line is not a JSON object");
  NewsArticle a;
  a.id = required_string(j, "id");
  if (a.id.empty()) throw Error("field \"id\" must be non-empty");
  a.title = required_string(j, "title");
  if (a.title.empty()) throw Error("field \"title\" must be non-empty");
  a.body = required_string(j, "body");
  a.lang = parse_lang(required_string(j, "lang"));
  a.published_at = Date::parse(required_string(j, "published_at"));
  if (auto it = j.find("tokens"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw Error("field \"tokens\" must be an array of strings");
    std::vector<std::string> toks;
    for (const auto& t : *it) {
      if (!t.is_string()) throw Error("field \"tokens\" must be an array of strings");
      toks.push_back(t.get<std::string>());
    }
    a.tokens = std::move(toks);
  }
  if (auto it = j.find("label"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw Error("field \"label\" must be a string");
    a.label = it->get<std::string>();
  }
  return a;
}

json to_json(const NewsArticle& a) {
  json j = {{"id", a.id},
            {"title", a.title},
            {"body", a.body},
            {"lang", to_string(a.lang)},
            {"published_at", a.published_at.to_string()}};
  if (a.tokens) j["tokens"] = *a.tokens;
  if (a.label) j["label"] = *a.label;
  return j;
}

std::vector<NewsArticle> read_articles(std::istream& in) {
  std::vector<NewsArticle> articles;
  std::vector<LineError> errors;
  std::unordered_map<std::string, std::size_t> first_line;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      NewsArticle a = article_from_json(json::parse(line));
      auto [it, inserted] = first_line.emplace(a.id, lineno);
      if (!inserted) {
        errors.push_back({lineno, "duplicate id \"" + a.id + "\" (first seen on line " +
                                      std::to_string(it->second) + ")"});
        continue;
      }
      articles.push_back(std::move(a));
    } catch (const json::exception& e) {
      errors.push_back({lineno, std::string("malformed JSON: ") + e.what()});
    } catch (const Error& e) {
      errors.push_back({lineno, e.what()});
    }
  }
  if (!errors.empty()) throw CorpusError(std::move(errors));
  return articles;
}

std::vector<NewsArticle> load_articles(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("corpus file not found: " + path.string());
  return read_articles(in);
}

void write_articles(std::ostream& out, std::span<const NewsArticle> articles) {
  for (const auto& a : articles) out << to_json(a).dump() << '\n';
}

TokenizedDoc tokenize(const NewsArticle& article) {
  TokenizedDoc doc{article.id, {}};
  if (article.tokens) {
    doc.tokens = *article.tokens;
  } else if (article.lang == Lang::en) {
    doc.tokens = english_tokens(article.body);
  } else {
    doc.tokens = chinese_bigrams(article.body);
  }
  if (doc.tokens.empty()) throw Error("article \"" + article.id + "\": empty document");
  for (const auto& t : doc.tokens) {
    if (t.empty()) throw Error("article \"" + article.id + "\": empty token in token list");
  }
  return doc;
}

std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    int len = 1;
    char32_t cp = b0;
    if (b0 >= 0xF0 && b0 < 0xF8) {
      len = 4;
      cp = b0 & 0x07;
    } else if (b0 >= 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if (b0 >= 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if (b0 >= 0x80) {
      // stray continuation byte
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    if (i + len > s.size()) {
      out.push_back(0xFFFD);
      break;
    }
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

std::string encode_utf8(std::span<const char32_t> cps) {
  std::string out;
  for (char32_t c : cps) {
    if (c < 0x80) {
      out += static_cast<char>(c);
    } else if (c < 0x800) {
      out += static_cast<char>(0xC0 | (c >> 6));
      out += static_cast<char>(0x80 | (c & 0x3F));
    } else if (c < 0x10000) {
      out += static_cast<char>(0xE0 | (c >> 12));
      out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (c & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (c >> 18));
      out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (c & 0x3F));
    }
  }
  return out;
}

}  // namespace xlnews
