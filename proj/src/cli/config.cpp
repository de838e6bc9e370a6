#include "xnose/cli/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

namespace xnose::cli {

using report::Json;

namespace {

class TomlReader {
 public:
  TomlReader(std::string_view text, const std::string& origin) : text_(text), origin_(origin) {}

  Json parse() {
    Json doc = Json::object();
    Json* section = nullptr;
    while (true) {
      skip_blank_lines();
      if (at_end()) break;
      if (peek() == '[') {
        ++pos_;
        const auto name = bare_key();
        skip_spaces();
        expect(']');
        end_of_line();
        if (doc.contains(name)) fail("section [" + name + "] appears twice");
        doc[name] = Json::object();
        section = &doc[name];
        continue;
      }
      const auto key = bare_key();
      if (section == nullptr) fail("key '" + key + "' outside of a [section]");
      skip_spaces();
      expect('=');
      skip_spaces();
      auto value = parse_value();
      end_of_line();
      if (section->contains(key)) fail("key '" + key + "' set twice");
      (*section)[key] = std::move(value);
    }
    return doc;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  [[noreturn]] void fail(const std::string& msg) const {
    std::size_t line = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) line += text_[i] == '\n';
    throw ConfigError(origin_ + ":" + std::to_string(line) + ": " + msg);
  }

  void skip_spaces() {
    while (!at_end() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  void skip_comment() {
    if (peek() == '#') {
      while (!at_end() && peek() != '\n') ++pos_;
    }
  }

  // Whitespace, newlines and comments, as allowed between array items.
  void skip_layout() {
    while (!at_end()) {
      skip_spaces();
      skip_comment();
      if (peek() == '\r' || peek() == '\n') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  void skip_blank_lines() { skip_layout(); }

  void end_of_line() {
    skip_spaces();
    skip_comment();
    if (peek() == '\r') ++pos_;
    if (!at_end() && peek() != '\n') fail("unexpected text after value");
    if (!at_end()) ++pos_;
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string bare_key() {
    const auto start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                         peek() == '-')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a key");
    return std::string(text_.substr(start, pos_ - start));
  }

  Json parse_value() {
    const char c = peek();
    if (c == '"') return parse_basic_string();
    if (c == '\'') return parse_literal_string();
    if (c == '[') return parse_array();
    if (text_.substr(pos_).starts_with("true")) {
      pos_ += 4;
      return true;
    }
    if (text_.substr(pos_).starts_with("false")) {
      pos_ += 5;
      return false;
    }
    return parse_number();
  }

  Json parse_basic_string() {
    ++pos_;
    std::string out;
    while (true) {
      if (at_end() || peek() == '\n') fail("unterminated string");
      const char c = text_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (at_end()) fail("unterminated string");
      switch (text_[pos_++]) {
        case '"': out.push_back('"'); break;
        case '\\': out.push_back('\\'); break;
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        default: fail("unsupported escape sequence");
      }
    }
    return out;
  }

  Json parse_literal_string() {
    ++pos_;
    const auto start = pos_;
    while (!at_end() && peek() != '\'' && peek() != '\n') ++pos_;
    if (peek() != '\'') fail("unterminated string");
    std::string out(text_.substr(start, pos_ - start));
    ++pos_;
    return out;
  }

  Json parse_array() {
    ++pos_;
    Json out = Json::array();
    while (true) {
      skip_layout();
      if (peek() == ']') {
        ++pos_;
        return out;
      }
      out.push_back(parse_value());
      skip_layout();
      if (peek() == ',') {
        ++pos_;
      } else if (peek() != ']') {
        fail("expected ',' or ']' in array");
      }
    }
  }

  Json parse_number() {
    const auto start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '+' ||
                         peek() == '-' || peek() == '.' || peek() == '_')) {
      ++pos_;
    }
    std::string raw;
    for (char ch : text_.substr(start, pos_ - start)) {
      if (ch != '_') raw.push_back(ch);
    }
    if (raw.empty()) fail("expected a value");
    char* end = nullptr;
    const bool is_float = raw.find_first_of(".eE") != std::string::npos;
    if (is_float) {
      const double d = std::strtod(raw.c_str(), &end);
      if (end != raw.c_str() + raw.size()) fail("invalid number '" + raw + "'");
      return d;
    }
    const long long n = std::strtoll(raw.c_str(), &end, 10);
    if (end != raw.c_str() + raw.size()) fail("invalid value '" + raw + "'");
    return n;
  }

  std::string_view text_;
  std::string origin_;
  std::size_t pos_ = 0;
};

[[noreturn]] void bad(const std::string& origin, const std::string& where, const std::string& msg) {
  throw ConfigError(origin + ": " + where + ": " + msg);
}

std::vector<std::string> string_list(const Json& v, const std::string& origin,
                                     const std::string& where) {
  if (!v.is_array()) bad(origin, where, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& item : v) {
    if (!item.is_string() || item.get<std::string>().empty()) {
      bad(origin, where, "expected an array of non-empty strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::vector<model::CallPattern> pattern_list(const Json& v, const std::string& origin,
                                             const std::string& where) {
  std::vector<model::CallPattern> out;
  for (const auto& s : string_list(v, origin, where)) {
    auto p = model::CallPattern::parse(s);
    if (p.callee.empty()) bad(origin, where, "'" + s + "' has no callee name");
    out.push_back(std::move(p));
  }
  return out;
}

long integer(const Json& v, const std::string& origin, const std::string& where) {
  if (!v.is_number_integer()) bad(origin, where, "expected an integer");
  const auto n = v.get<long long>();
  if (n < 0) bad(origin, where, "must be non-negative");
  return static_cast<long>(n);
}

bool boolean(const Json& v, const std::string& origin, const std::string& where) {
  if (!v.is_boolean()) bad(origin, where, "expected true or false");
  return v.get<bool>();
}

std::string text(const Json& v, const std::string& origin, const std::string& where) {
  if (!v.is_string()) bad(origin, where, "expected a string");
  return v.get<std::string>();
}

}  // namespace

Json parse_toml_subset(std::string_view text, const std::string& origin) {
  return TomlReader(text, origin).parse();
}

void apply_config(const Json& doc, CliConfig& cfg, const std::string& origin) {
  if (!doc.is_object()) throw ConfigError(origin + ": expected a table of sections");
  for (const auto& [section, body] : doc.items()) {
    if (!body.is_object()) bad(origin, section, "expected a table");
    for (const auto& [key, v] : body.items()) {
      const auto where = section + "." + key;
      if (section == "model") {
        auto& m = cfg.detectors.model;
        if (key == "assertion_receivers") {
          m.assertion_receivers = string_list(v, origin, where);
        } else if (key == "sleep_calls") {
          m.sleep_calls = pattern_list(v, origin, where);
        } else if (key == "output_calls") {
          m.output_calls = pattern_list(v, origin, where);
        } else if (key == "framework_calls") {
          m.framework_calls = pattern_list(v, origin, where);
        } else {
          bad(origin, where, "unknown key");
        }
      } else if (section == "detectors") {
        auto& d = cfg.detectors;
        if (key == "obscure_setup_threshold") {
          d.obscure_setup_threshold = integer(v, origin, where);
        } else if (key == "eager_test_threshold") {
          d.eager_test_threshold = integer(v, origin, where);
        } else if (key == "cohesion_threshold") {
          if (!v.is_number()) bad(origin, where, "expected a number");
          d.cohesion_threshold = v.get<double>();
          if (!(d.cohesion_threshold >= 0 && d.cohesion_threshold <= 1)) {
            bad(origin, where, "must lie in [0, 1]");
          }
        } else if (key == "magic_number_deep") {
          d.magic_number_deep = boolean(v, origin, where);
        } else if (key == "magic_number_allowlist") {
          d.magic_number_allowlist = string_list(v, origin, where);
        } else if (key == "duplicate_assert_compare") {
          d.duplicate_assert_compare = text(v, origin, where);
          if (d.duplicate_assert_compare != "normalized_text") {
            bad(origin, where, "only \"normalized_text\" is supported");
          }
        } else {
          bad(origin, where, "unknown key");
        }
      } else if (section == "output") {
        auto& o = cfg.output;
        if (key == "format") {
          o.format = text(v, origin, where);
          if (o.format != "json" && o.format != "text") bad(origin, where, "expected json or text");
        } else if (key == "out") {
          o.out = text(v, origin, where);
        } else if (key == "fail_on_smell") {
          o.fail_on_smell = boolean(v, origin, where);
        } else if (key == "jobs") {
          o.jobs = static_cast<unsigned>(integer(v, origin, where));
        } else {
          bad(origin, where, "unknown key");
        }
      } else {
        bad(origin, section, "unknown section");
      }
    }
  }
}

CliConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto origin = path.string();
  Json doc;
  if (path.extension() == ".json") {
    try {
      doc = Json::parse(ss.str());
    } catch (const Json::parse_error& e) {
      throw ConfigError(origin + ": invalid JSON: " + e.what());
    }
  } else {
    doc = parse_toml_subset(ss.str(), origin);
  }
  CliConfig cfg;
  apply_config(doc, cfg, origin);
  return cfg;
}

unsigned effective_jobs(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace xnose::cli
