#pragma once

#include <string>

#include "tribunal/agents/chat.hpp"
#include "tribunal/agents/prompts.hpp"
#include "tribunal/model.hpp"

namespace tribunal::agents {

// Replay step names are fixed: sufficiency, reasoning_final, debate_pro_r<N>,
// debate_con_r<N>, judge_check_r<N>, judge_final. A re-ask after an
// unparseable answer uses "<step>.reask".

/// Sufficiency gate. An answer that stays unparseable after one re-ask counts
/// as false. Backend failure throws Error{AgentFailure}.
bool assess_evidence(const EvidenceSet& set, AgentSession& session);

/// Direct decision. Throws Error{AgentFailure} if the answer stays
/// unparseable or the backend fails.
Verdict reason_final(const EvidenceSet& set, AgentSession& session,
                     std::optional<std::string> confidence_note = std::nullopt);

/// Argument for the round after the last one in the transcript. Each side
/// sees the opponent's arguments from earlier rounds. Throws
/// Error{PreconditionViolation} when the transcript is full and
/// Error{DebateAborted} when the backend fails.
std::string debate_round(DebateSide side, const EvidenceSet& set, const DebateTranscript& transcript,
                         AgentSession& session);

/// Whether the debate so far suffices; unparseable after one re-ask counts as
/// false. Throws Error{PreconditionViolation} on an empty transcript and
/// Error{DebateAborted} when the backend fails.
bool judge_check(const DebateTranscript& transcript, AgentSession& session);

/// Final decision over the debate and the raw evidence. An aborted debate
/// is decided on the evidence alone and carries a confidence note.
Verdict judge_final(const DebateTranscript& transcript, const EvidenceSet& set, AgentSession& session);

/// "Round N:\n<text>" blocks for one side, in round order.
std::string format_history(const DebateTranscript& transcript, DebateSide side, int up_to_round);

}  // namespace tribunal::agents
