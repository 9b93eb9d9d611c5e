#include "tribunal/agents/agents.hpp"

#include <fmt/format.h>

#include "tribunal/agents/parsing.hpp"
#include "tribunal/error.hpp"
#include "tribunal/text_util.hpp"

namespace tribunal::agents {

namespace {

constexpr std::string_view kBoolReask =
    "Your previous answer could not be interpreted. Reply with exactly one word: 'True' or 'False'.";
constexpr std::string_view kVerdictReask =
    "Your previous answer could not be interpreted. Reply again using exactly the required output "
    "format:\n1. is_ai_generated: True or False\n2. analysis_details: your detailed analysis";
constexpr std::string_view kNoArguments = "(no arguments were presented)";

std::vector<ChatMessage> follow_up(const std::string& prompt, const std::string& answer, std::string_view reask) {
  return {{"user", prompt, std::nullopt}, {"assistant", answer, std::nullopt}, {"user", std::string(reask), std::nullopt}};
}

// Runs a prompt, re-asking once if the parser rejects the answer. Backend
// failures are rethrown with the given code.
template <typename Parse>
auto ask_parsed(AgentSession& session, const std::string& step, Phase phase, const std::string& prompt,
                std::string_view reask, Parse parse, ErrorCode on_backend_failure) -> decltype(parse(std::string_view{})) {
  try {
    auto reply = session.ask(step, phase, prompt);
    auto parsed = parse(reply.text);
    if (parsed) return parsed;
    reply = session.ask(step + ".reask", phase, follow_up(prompt, reply.text, reask));
    return parse(reply.text);
  } catch (const Error& e) {
    throw Error(on_backend_failure, fmt::format("{} failed: {}", step, e.what()));
  }
}

std::string args_or_placeholder(const DebateTranscript& t, DebateSide side) {
  auto h = format_history(t, side, static_cast<int>(t.rounds.size()));
  return h.empty() ? std::string(kNoArguments) : h;
}

Verdict to_verdict(const ParsedVerdict& p, DecidedBy by, std::optional<std::string> note) {
  return {p.is_ai_generated, p.details, by, std::move(note)};
}

}  // namespace

std::string format_history(const DebateTranscript& transcript, DebateSide side, int up_to_round) {
  std::string out;
  for (const auto& r : transcript.rounds) {
    if (r.round_no > up_to_round) break;
    const auto& arg = side == DebateSide::Pro ? r.pro_argument : r.con_argument;
    if (text::trim(arg).empty()) continue;
    if (!out.empty()) out += "\n\n";
    out += fmt::format("Round {}:\n{}", r.round_no, arg);
  }
  return out;
}

bool assess_evidence(const EvidenceSet& set, AgentSession& session) {
  const auto prompt = render_prompt(TemplateId::Sufficiency, {{"tool_results", render_evidence(set)}});
  return ask_parsed(session, "sufficiency", Phase::Reasoning, prompt, kBoolReask, parse_bool_token,
                    ErrorCode::AgentFailure)
      .value_or(false);
}

Verdict reason_final(const EvidenceSet& set, AgentSession& session, std::optional<std::string> confidence_note) {
  const auto prompt = render_prompt(TemplateId::ReasoningFinal, {{"tool_results", render_evidence(set)}});
  const auto parsed = ask_parsed(session, "reasoning_final", Phase::Reasoning, prompt, kVerdictReask,
                                 parse_verdict, ErrorCode::AgentFailure);
  if (!parsed) throw Error(ErrorCode::AgentFailure, "reasoning agent answer could not be parsed");
  return to_verdict(*parsed, DecidedBy::ReasoningAgent, std::move(confidence_note));
}

std::string debate_round(DebateSide side, const EvidenceSet& set, const DebateTranscript& transcript,
                         AgentSession& session) {
  const int round = static_cast<int>(transcript.rounds.size()) + 1;
  if (round > transcript.max_rounds) {
    throw Error(ErrorCode::PreconditionViolation,
                fmt::format("debate already has {} of {} rounds", transcript.rounds.size(), transcript.max_rounds));
  }
  Bindings b{{"tool_results", render_evidence(set)}};
  if (round > 1) {
    const auto opponent = side == DebateSide::Pro ? DebateSide::Con : DebateSide::Pro;
    b[side == DebateSide::Pro ? "negative_history" : "positive_history"] =
        format_history(transcript, opponent, round - 1);
  }
  const auto prompt = render_text(debate_prompt_body(side, round == 1), b);
  const auto step = fmt::format("debate_{}_r{}", to_string(side), round);
  try {
    auto reply = session.ask(step, Phase::Debate, prompt);
    return reply.text;
  } catch (const Error& e) {
    throw Error(ErrorCode::DebateAborted, fmt::format("{} failed: {}", step, e.what()));
  }
}

bool judge_check(const DebateTranscript& transcript, AgentSession& session) {
  if (transcript.rounds.empty()) throw Error(ErrorCode::PreconditionViolation, "judge check needs a completed round");
  const auto prompt = render_prompt(TemplateId::JudgeCheck,
                                    {{"positive_args", args_or_placeholder(transcript, DebateSide::Pro)},
                                     {"negative_args", args_or_placeholder(transcript, DebateSide::Con)}});
  const auto step = fmt::format("judge_check_r{}", transcript.rounds.back().round_no);
  return ask_parsed(session, step, Phase::Debate, prompt, kBoolReask, parse_bool_token, ErrorCode::DebateAborted)
      .value_or(false);
}

Verdict judge_final(const DebateTranscript& transcript, const EvidenceSet& set, AgentSession& session) {
  const auto prompt = render_prompt(TemplateId::JudgeFinal,
                                    {{"tool_results", render_evidence(set)},
                                     {"positive_args", args_or_placeholder(transcript, DebateSide::Pro)},
                                     {"negative_args", args_or_placeholder(transcript, DebateSide::Con)}});
  const auto parsed = ask_parsed(session, "judge_final", Phase::Debate, prompt, kVerdictReask, parse_verdict,
                                 ErrorCode::AgentFailure);
  if (!parsed) throw Error(ErrorCode::AgentFailure, "judge answer could not be parsed");
  std::optional<std::string> note;
  if (transcript.abort_reason) {
    note = fmt::format("Debate aborted after {} completed round(s) ({}); decided on the tool evidence alone.",
                       transcript.rounds.size(), *transcript.abort_reason);
  }
  return to_verdict(*parsed, DecidedBy::JudgeAgent, std::move(note));
}

}  // namespace tribunal::agents
