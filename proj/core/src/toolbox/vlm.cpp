#include "tribunal/toolbox/vlm.hpp"

#include <fmt/format.h>

#include "tribunal/agents/parsing.hpp"
#include "tribunal/agents/prompts.hpp"

namespace tribunal::toolbox {

namespace {

constexpr std::string_view kReask =
    "Your previous answer could not be interpreted. State the classification as either "
    "\"AI-generated\" or \"real\", give the confidence level (high, medium, or low), and list "
    "the supporting observations as bullet points.";

}  // namespace

std::string summarize_vlm(const VlmFinding& finding) {
  std::string out = fmt::format("Visual analysis classifies the image as {} with {} confidence.",
                                finding.is_ai_generated ? "AI-generated" : "real", to_string(finding.confidence));
  out += finding.is_ai_generated ? "\nObserved artifacts:" : "\nSupporting observations:";
  for (const auto& o : finding.artifacts_or_support) out += "\n- " + o;
  return out;
}

EvidenceItem run_vlm_analysis(const ImageCase& image, agents::ChatBackend& backend) {
  agents::AgentSession session(backend, image.id);
  try {
    const std::string prompt(agents::template_body(agents::TemplateId::VlmTool));
    std::vector<agents::ChatMessage> messages{{"user", prompt, image.path}};
    auto reply = session.ask("vlm", Phase::Tool, messages);
    auto finding = agents::parse_vlm_response(reply.text);
    if (!finding) {
      messages.push_back({"assistant", reply.text, std::nullopt});
      messages.push_back({"user", std::string(kReask), std::nullopt});
      reply = session.ask("vlm.reask", Phase::Tool, messages);
      finding = agents::parse_vlm_response(reply.text);
    }
    if (!finding) {
      return make_error_item(ToolId::Vlm, "the visual analysis answer could not be parsed", 0, session.tokens());
    }
    EvidenceItem item;
    item.tool_id = ToolId::Vlm;
    item.validity = Validity::Valid;
    item.summary_text = summarize_vlm(*finding);
    item.payload = std::move(*finding);
    item.token_cost = session.tokens();
    return item;
  } catch (const std::exception& e) {
    return make_error_item(ToolId::Vlm, e.what(), 0, session.tokens());
  }
}

}  // namespace tribunal::toolbox
