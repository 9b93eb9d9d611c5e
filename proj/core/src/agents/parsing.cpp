#include "tribunal/agents/parsing.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include <nlohmann/json.hpp>

#include "tribunal/text_util.hpp"

namespace tribunal::agents {

using nlohmann::json;

namespace {

constexpr auto kIcase = std::regex::ECMAScript | std::regex::icase;

std::optional<bool> bool_of(const json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) return parse_bool_token(v.get<std::string>());
  return std::nullopt;
}

std::optional<ParsedVerdict> verdict_from_json(std::string_view reply) {
  const auto open = reply.find('{');
  const auto close = reply.rfind('}');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) return std::nullopt;
  const auto j = json::parse(reply.substr(open, close - open + 1), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("is_ai_generated")) return std::nullopt;
  const auto b = bool_of(j["is_ai_generated"]);
  if (!b) return std::nullopt;
  ParsedVerdict v{*b, ""};
  for (const char* key : {"analysis_details", "details"}) {
    if (!j.contains(key)) continue;
    v.details = j[key].is_string() ? j[key].get<std::string>() : j[key].dump();
    break;
  }
  return v;
}

std::string clean_details(std::string s) {
  s = text::trim(s);
  while (!s.empty() && (s.back() == '}' || s.back() == '"' || s.back() == '\'' || s.back() == ',')) {
    s.pop_back();
    s = text::trim(s);
  }
  while (!s.empty() && (s.front() == '"' || s.front() == '\'')) s.erase(0, 1);
  return text::trim(s);
}

// Earliest classification term in a piece of text; negated terms flip.
std::optional<bool> classify_span(const std::string& s) {
  static const std::regex ai_re(
      R"(\b(ai[- ]generated|generated by (an )?ai|ai[- ]created|ai[- ]made|synthetic|artificially generated|computer[- ]generated|fake)\b)",
      kIcase);
  static const std::regex real_re(R"(\b(real|authentic|genuine|photographic|natural photo(graph)?)\b)", kIcase);
  std::smatch ma;
  std::smatch mr;
  const bool has_ai = std::regex_search(s, ma, ai_re);
  const bool has_real = std::regex_search(s, mr, real_re);
  if (!has_ai && !has_real) return std::nullopt;
  const bool ai_first = has_ai && (!has_real || ma.position(0) <= mr.position(0));
  const auto pos = static_cast<std::size_t>(ai_first ? ma.position(0) : mr.position(0));
  const auto before = text::to_lower(s.substr(pos >= 16 ? pos - 16 : 0, pos >= 16 ? 16 : pos));
  static const std::regex neg_re(R"((\bnot( an?)?|n't( an?)?|\bno)\s*$)");
  const bool negated = std::regex_search(before, neg_re);
  return ai_first != negated;
}

std::optional<bool> vlm_classification(std::string_view reply) {
  static const std::regex decisive_re(R"(classification|verdict|conclusion|final)", kIcase);
  const auto lines = text::split_lines(reply);
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    if (!std::regex_search(*it, decisive_re)) continue;
    if (auto c = classify_span(*it)) return c;
  }
  return classify_span(std::string(reply));
}

Confidence vlm_confidence(std::string_view reply) {
  static const std::regex after_re(R"(confidence(\s+level)?\W{0,6}(is\s+)?(high|medium|moderate|low)\b)", kIcase);
  static const std::regex before_re(R"(\b(high|medium|moderate|low)\W{0,3}(level of\s+)?confidence)", kIcase);
  const std::string s(reply);
  std::smatch m;
  std::string word;
  if (std::regex_search(s, m, after_re)) {
    word = m[3].str();
  } else if (std::regex_search(s, m, before_re)) {
    word = m[1].str();
  } else {
    return Confidence::Low;
  }
  word = text::to_lower(word);
  if (word == "high") return Confidence::High;
  if (word == "medium" || word == "moderate") return Confidence::Medium;
  return Confidence::Low;
}

// Segments that only restate the classification or confidence.
bool is_meta(const std::string& seg) {
  static const std::regex meta_re(
      R"(\b(ai[- ]generated|generated|by|ai|synthetic|real|authentic|genuine|high|medium|moderate|low|confidence|level|classification|final|verdict|conclusion|overall|image|photo|photograph|this|is|it|its|an|a|the|with|as|likely|very|answer|of|appears|to|be|i|determine|that)\b)",
      kIcase);
  const auto rest = std::regex_replace(seg, meta_re, "");
  return std::none_of(rest.begin(), rest.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); });
}

std::string strip_markup(std::string s) {
  s.erase(std::remove(s.begin(), s.end(), '*'), s.end());
  return text::trim(s);
}

void add_segments(std::string_view textv, std::vector<std::string>& out) {
  std::string buf;
  auto flush = [&] {
    auto seg = strip_markup(buf);
    while (!seg.empty() && (seg.back() == '.' || seg.back() == ':')) seg.pop_back();
    seg = text::trim(seg);
    if (!seg.empty() && !is_meta(seg)) out.push_back(seg);
    buf.clear();
  };
  for (char c : textv) {
    if (c == ';' || c == ',' || c == '\n') {
      flush();
    } else {
      buf += c;
    }
  }
  flush();
}

std::vector<std::string> vlm_observations(std::string_view reply) {
  static const std::regex bullet_re(R"(^\s*([-*\xE2\x80\xA2]|\d+[.)])\s+(.*)$)");
  static const std::regex label_re(
      R"((artifacts|artefacts|observations|characteristics|evidence|indicators|reasons|signs)[^:\n]{0,40}:)", kIcase);
  std::vector<std::string> out;
  for (const auto& line : text::split_lines(reply)) {
    std::smatch m;
    if (!std::regex_match(line, m, bullet_re)) continue;
    auto item = strip_markup(m[2].str());
    if (!item.empty() && !is_meta(item)) out.push_back(item);
  }
  if (!out.empty()) return out;
  const std::string s(reply);
  std::smatch m;
  if (std::regex_search(s, m, label_re)) {
    add_segments(std::string_view(s).substr(static_cast<std::size_t>(m.position(0) + m.length(0))), out);
    if (!out.empty()) return out;
  }
  add_segments(reply, out);
  return out;
}

}  // namespace

std::optional<bool> parse_bool_token(std::string_view reply) {
  static const std::regex re(R"(\b(true|false)\b)", kIcase);
  const std::string s(reply);
  std::smatch m;
  if (!std::regex_search(s, m, re)) return std::nullopt;
  return text::to_lower(m[1].str()) == "true";
}

std::optional<ParsedVerdict> parse_verdict(std::string_view reply) {
  auto v = verdict_from_json(reply);
  if (!v) {
    static const std::regex flag_re(R"(is_ai_generated["'*\s]*[:=]\s*["'*]*\s*(true|false)\b)", kIcase);
    const std::string s(reply);
    std::smatch m;
    if (!std::regex_search(s, m, flag_re)) return std::nullopt;
    v = ParsedVerdict{text::to_lower(m[1].str()) == "true", ""};
    static const std::regex details_re(R"((analysis_details|\bdetails)["'*\s]*[:=]\s*)", kIcase);
    std::smatch d;
    if (std::regex_search(s, d, details_re)) {
      v->details = clean_details(s.substr(static_cast<std::size_t>(d.position(0) + d.length(0))));
    }
  }
  if (text::trim(v->details).empty()) v->details = text::trim(reply);
  return v;
}

std::optional<VlmFinding> parse_vlm_response(std::string_view reply) {
  const auto cls = vlm_classification(reply);
  if (!cls) return std::nullopt;
  VlmFinding f;
  f.is_ai_generated = *cls;
  f.confidence = vlm_confidence(reply);
  f.artifacts_or_support = vlm_observations(reply);
  if (f.artifacts_or_support.empty()) {
    auto whole = text::trim(reply);
    if (whole.size() > 500) whole = whole.substr(0, 500);
    f.artifacts_or_support.push_back(whole);
  }
  return f;
}

}  // namespace tribunal::agents
