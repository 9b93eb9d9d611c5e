#include "tribunal/agents/prompts.hpp"

#include <algorithm>

#include "tribunal/error.hpp"

namespace tribunal::agents {

namespace {

bool slot_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

// Length of a slot marker starting at pos, or 0 if none starts there.
std::size_t slot_at(std::string_view body, std::size_t pos) {
  if (body[pos] != '{') return 0;
  std::size_t i = pos + 1;
  while (i < body.size() && slot_char(body[i])) ++i;
  if (i == pos + 1 || i >= body.size() || body[i] != '}') return 0;
  return i - pos + 1;
}

std::size_t line_start_of(std::string_view body, std::string_view marker) {
  const auto at = body.find(marker);
  if (at == std::string_view::npos) {
    throw Error(ErrorCode::PreconditionViolation, "debate template lacks marker " + std::string(marker));
  }
  const auto nl = body.rfind('\n', at);
  return nl == std::string_view::npos ? 0 : nl + 1;
}

}  // namespace

std::vector<std::string> slots_in(std::string_view body) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (const auto n = slot_at(body, i)) {
      std::string name(body.substr(i + 1, n - 2));
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(std::move(name));
      i += n - 1;
    }
  }
  return out;
}

std::string render_text(std::string_view body, const Bindings& bindings) {
  std::string out;
  out.reserve(body.size());
  for (std::size_t i = 0; i < body.size();) {
    if (const auto n = slot_at(body, i)) {
      const auto name = body.substr(i + 1, n - 2);
      const auto it = bindings.find(name);
      if (it == bindings.end()) throw Error(ErrorCode::UnboundSlot, "slot {" + std::string(name) + "} is not bound");
      out += it->second;
      i += n;
    } else {
      out += body[i++];
    }
  }
  return out;
}

std::string render_prompt(TemplateId id, const Bindings& bindings) {
  return render_text(template_body(id), bindings);
}

std::string_view to_string(DebateSide side) { return side == DebateSide::Pro ? "pro" : "con"; }

std::string debate_prompt_body(DebateSide side, bool first_round) {
  const auto body = template_body(side == DebateSide::Pro ? TemplateId::DebatePro : TemplateId::DebateCon);
  const auto first = line_start_of(body, "First Round Only:");
  const auto later = line_start_of(body, "Subsequent Rounds Only:");
  if (first_round) return std::string(body.substr(0, later));
  return std::string(body.substr(0, first)) + std::string(body.substr(later));
}

}  // namespace tribunal::agents
