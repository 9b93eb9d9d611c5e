#pragma once

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace tribunal::agents {

enum class TemplateId {
  Gatherer,
  Sufficiency,
  ReasoningFinal,
  DebatePro,
  DebateCon,
  JudgeCheck,
  JudgeFinal,
  VlmTool,
  Reflection,
};

inline constexpr std::array<TemplateId, 9> kAllTemplates{
    TemplateId::Gatherer,   TemplateId::Sufficiency, TemplateId::ReasoningFinal,
    TemplateId::DebatePro,  TemplateId::DebateCon,   TemplateId::JudgeCheck,
    TemplateId::JudgeFinal, TemplateId::VlmTool,     TemplateId::Reflection};

/// Stable snake_case name; also the golden file stem.
std::string_view to_string(TemplateId id);
std::string_view template_body(TemplateId id);

/// Slot names ({name}) referenced by a body, in first-occurrence order.
std::vector<std::string> slots_in(std::string_view body);

using Bindings = std::map<std::string, std::string, std::less<>>;

/// Single-pass substitution: bound values are inserted literally and never
/// rescanned. Throws Error{UnboundSlot} if any slot is missing a binding.
std::string render_text(std::string_view body, const Bindings& bindings);
std::string render_prompt(TemplateId id, const Bindings& bindings);

enum class DebateSide { Pro, Con };
std::string_view to_string(DebateSide side);

/// The debate templates hold two variants. Round 1 uses the text up to the
/// subsequent-rounds section; later rounds use the shared header followed by
/// that section, which carries the opponent-history slot.
std::string debate_prompt_body(DebateSide side, bool first_round);

}  // namespace tribunal::agents
