#include "sparsechan/toml.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace sparsechan {

namespace {

using nlohmann::json;

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::runtime_error("toml: line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Removes a trailing # comment, honoring double-quoted strings.
std::string strip_comment(const std::string& s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

json parse_scalar(const std::string& raw, int line) {
  const std::string v = trim(raw);
  if (v.empty()) fail(line, "empty value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') fail(line, "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\' && i + 2 < v.size()) {
        ++i;
        switch (v[i]) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: fail(line, "unsupported escape");
        }
      } else {
        out += v[i];
      }
    }
    return json(out);
  }
  if (v == "true") return json(true);
  if (v == "false") return json(false);
  try {
    std::size_t used = 0;
    if (v.find_first_of(".eE") == std::string::npos ||
        (v.size() > 1 && (v.substr(0, 2) == "0x"))) {
      const long long n = std::stoll(v, &used);
      if (used == v.size()) return json(n);
    }
    const double d = std::stod(v, &used);
    if (used == v.size()) return json(d);
  } catch (const std::exception&) {
  }
  fail(line, "cannot parse value '" + v + "'");
}

json parse_value(const std::string& raw, int line) {
  const std::string v = trim(raw);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') fail(line, "unterminated array");
    json arr = json::array();
    std::string body = v.substr(1, v.size() - 2);
    std::string item;
    bool in_string = false;
    for (char c : body) {
      if (c == '"') in_string = !in_string;
      if (c == ',' && !in_string) {
        if (!trim(item).empty()) arr.push_back(parse_scalar(item, line));
        item.clear();
      } else {
        item += c;
      }
    }
    if (!trim(item).empty()) arr.push_back(parse_scalar(item, line));
    return arr;
  }
  return parse_scalar(v, line);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      return false;
  return true;
}

}  // namespace

nlohmann::json toml_to_json(const std::string& text) {
  json root = json::object();
  json* cursor = &root;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.size() >= 4 && line.substr(0, 2) == "[[") {
      if (line.substr(line.size() - 2) != "]]") fail(line_no, "bad table header");
      const std::string name = trim(line.substr(2, line.size() - 4));
      if (!valid_key(name)) fail(line_no, "bad table name");
      if (!root.contains(name)) root[name] = json::array();
      if (!root[name].is_array()) fail(line_no, "name already used as table");
      root[name].push_back(json::object());
      cursor = &root[name].back();
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "bad table header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (!valid_key(name)) fail(line_no, "bad table name (dotted keys unsupported)");
      if (root.contains(name) && !root[name].is_object())
        fail(line_no, "name already used as array of tables");
      if (!root.contains(name)) root[name] = json::object();
      cursor = &root[name];
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!valid_key(key)) fail(line_no, "bad key '" + key + "'");
    (*cursor)[key] = parse_value(line.substr(eq + 1), line_no);
  }
  return root;
}

}  // namespace sparsechan
