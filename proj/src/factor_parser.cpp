#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"

#include "conecert/cli.hpp"
#include "conecert/errors.hpp"

namespace conecert::cli {

namespace {

struct Token {
  std::string text;
  std::size_t offset = 0;
};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

Token trim(std::string_view all, std::size_t begin, std::size_t end) {
  while (begin < end && is_space(all[begin])) ++begin;
  while (end > begin && is_space(all[end - 1])) --end;
  return {std::string(all.substr(begin, end - begin)), begin};
}

int to_int(const Token& v, const std::string& key) {
  char* stop = nullptr;
  const long n = std::strtol(v.text.c_str(), &stop, 10);
  if (v.text.empty() || *stop != '\0' || n < -1000000 || n > 1000000) {
    throw ParseError("value of '" + key + "' must be an integer", v.offset);
  }
  return static_cast<int>(n);
}

FocalDescriptor build(const std::map<std::string, std::pair<Token, Token>>& kv, std::size_t start) {
  const auto get = [&](const std::string& k) -> std::optional<std::pair<Token, Token>> {
    auto it = kv.find(k);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  try {
    if (auto s = get("sphere")) {
      if (kv.size() != 1) throw ParseError("'sphere' cannot be combined with other keys", start);
      const int l = to_int(s->second, "sphere");
      if (l < 1) throw ParseError("sphere dimension must be >= 1", s->second.offset);
      return sphere_factor(l);
    }
    const auto g_kv = get("g");
    if (!g_kv) throw ParseError("missing key 'g'", start);
    const int g = to_int(g_kv->second, "g");
    if (g != 2 && g != 3 && g != 4 && g != 6) throw ParseError("g must be in {2,3,4,6}", g_kv->second.offset);

    const auto m = get("m");
    const auto m1 = get("m1");
    const auto m2 = get("m2");
    const auto side = get("side");
    const Side sd = side ? parse_side(side->second.text) : Side::Plus;
    int a = 0;
    int b = 0;
    if (m) {
      if (m1 || m2) throw ParseError("use either 'm' or 'm1'/'m2'", m->first.offset);
      a = b = to_int(m->second, "m");
    } else {
      if (!m1) throw ParseError("missing key 'm1' (or 'm')", start);
      a = to_int(m1->second, "m1");
      b = m2 ? to_int(m2->second, "m2") : ((g == 3 || g == 6) ? a : 0);
      if (!m2 && g != 3 && g != 6) throw ParseError("missing key 'm2'", start);
    }
    return focal_descriptor(g, a, b, sd);
  } catch (const InvalidFamilyError& e) {
    throw ParseError(std::string("invalid family: ") + e.what(), start);
  }
}

FocalDescriptor parse_one(std::string_view all, std::size_t begin, std::size_t end) {
  static const char* const known[] = {"g", "m", "m1", "m2", "side", "sphere"};
  std::map<std::string, std::pair<Token, Token>> kv;
  std::size_t pos = begin;
  while (pos <= end) {
    std::size_t comma = all.find(',', pos);
    if (comma == std::string_view::npos || comma > end) comma = end;
    const Token item = trim(all, pos, comma);
    if (item.text.empty()) throw ParseError("empty key=value item", item.offset);
    const auto eq = item.text.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", item.offset);
    const Token key = trim(all, item.offset, item.offset + eq);
    const Token value = trim(all, item.offset + eq + 1, item.offset + item.text.size());
    bool ok = false;
    for (const char* k : known) ok = ok || key.text == k;
    if (!ok) throw ParseError("unknown key '" + key.text + "'", key.offset);
    if (kv.count(key.text)) throw ParseError("duplicate key '" + key.text + "'", key.offset);
    if (value.text.empty()) throw ParseError("missing value for '" + key.text + "'", value.offset);
    kv.emplace(key.text, std::make_pair(key, value));
    pos = comma + 1;
  }
  return build(kv, trim(all, begin, end).offset);
}

std::vector<FocalDescriptor> parse_json(std::string_view text, std::size_t offset) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.substr(offset));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), offset + (e.byte > 0 ? e.byte - 1 : 0));
  }
  if (!j.is_array()) throw ParseError("JSON factor list must be an array", offset);
  if (j.empty()) throw ParseError("empty factor list", offset);
  std::vector<FocalDescriptor> out;
  for (const auto& f : j) {
    if (!f.is_object()) throw ParseError("each JSON factor must be an object", offset);
    // Reuse the text grammar so both forms share validation.
    std::string item;
    for (const auto& [k, v] : f.items()) {
      if (!item.empty()) item += ',';
      item += k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
    }
    if (item.empty()) throw ParseError("empty factor", offset);
    try {
      out.push_back(parse_one(item, 0, item.size()));
    } catch (const ParseError& e) {
      throw ParseError(e.message() + " in JSON factor " + std::to_string(out.size()), offset);
    }
  }
  return out;
}

}  // namespace

std::vector<FocalDescriptor> parse_factor_list(std::string_view text) {
  std::size_t first = 0;
  while (first < text.size() && is_space(text[first])) ++first;
  if (first == text.size()) throw ParseError("empty factor list", first);
  if (text[first] == '[') return parse_json(text, first);

  std::vector<FocalDescriptor> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t semi = text.find(';', pos);
    if (semi == std::string_view::npos) semi = text.size();
    const Token seg = trim(text, pos, semi);
    if (seg.text.empty()) {
      // A trailing separator is tolerated; an empty factor in the middle is not.
      if (semi != text.size() && trim(text, semi + 1, text.size()).text.empty()) break;
      if (semi == text.size()) break;
      throw ParseError("empty factor", seg.offset);
    }
    out.push_back(parse_one(text, pos, semi));
    pos = semi + 1;
  }
  if (out.empty()) throw ParseError("empty factor list", first);
  return out;
}

}  // namespace conecert::cli
