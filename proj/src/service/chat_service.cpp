#include "emo20q/service/chat_service.hpp"

#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

#include "emo20q/core/error.hpp"
#include "emo20q/selfplay.hpp"

namespace emo20q {

ChatService::ChatService(std::shared_ptr<const GameContext> ctx, ServiceConfig config)
    : ctx_(std::move(ctx)), config_(std::move(config)), transcripts_(config_.transcripts_dir) {}

std::string ChatService::new_session_id() {
  // 128 bits from the OS entropy source.
  std::random_device rd;
  std::ostringstream out;
  out << std::hex << std::setfill('0');
  for (int i = 0; i < 4; ++i) out << std::setw(8) << static_cast<std::uint32_t>(rd());
  return out.str();
}

WireMessage ChatService::error(const std::string& session_id, std::string text) {
  return WireMessage{MessageType::Error, session_id, 0, std::move(text), "", now_iso8601()};
}

WireMessage ChatService::make(Session& s, MessageType type, std::string text) {
  return WireMessage{type, s.id, ++s.seq, std::move(text), s.machine.phase_label(), now_iso8601()};
}

std::string ChatService::state_summary(const Session& s) const {
  nlohmann::ordered_json j = {{"state", std::string(to_string(s.machine.state))},
                              {"phase", s.machine.phase_label()},
                              {"phase_turn", s.machine.phase_turn()},
                              {"turn_budget", kTurnBudget}};
  return j.dump();
}

std::shared_ptr<ChatService::Session> ChatService::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::size_t ChatService::session_count() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

ChatService::Outcome ChatService::handle_text(const std::string& bound_session, std::string_view raw) {
  WireMessage msg;
  try {
    msg = decode(raw);
  } catch (const ProtocolError& e) {
    return Outcome{bound_session, {error(bound_session, e.what())}, false};
  }
  return handle(bound_session, msg);
}

ChatService::Outcome ChatService::handle(const std::string& bound_session, const WireMessage& msg) {
  if (msg.type == MessageType::SessionStart) {
    if (!bound_session.empty() && msg.session_id != bound_session)
      return Outcome{bound_session, {error(bound_session, "connection already has a session")}, false};
    return start(msg);
  }
  if (msg.type != MessageType::UserUtterance)
    return Outcome{bound_session,
                   {error(bound_session, "clients may only send session.start or user.utterance")},
                   false};
  if (bound_session.empty())
    return Outcome{"", {error("", "no active session; send session.start first")}, false};
  if (!msg.session_id.empty() && msg.session_id != bound_session)
    return Outcome{bound_session, {error(bound_session, "session_id does not match this connection")},
                   false};
  auto s = find(bound_session);
  if (!s) return Outcome{"", {error(bound_session, "session expired")}, true};
  std::lock_guard lock(s->mu);
  return feed(*s, UserUtterance{msg.text}, "user.utterance", "user", msg.text);
}

ChatService::Outcome ChatService::start(const WireMessage& msg) {
  if (!msg.session_id.empty()) {
    if (auto s = find(msg.session_id)) {
      std::lock_guard lock(s->mu);
      if (!s->ended) {
        s->attached = true;
        s->last_active_at = Clock::now();
        Outcome out{s->id, {}, false};
        out.replies.push_back(make(*s, MessageType::SessionStart, "resumed"));
        for (const auto& line : s->last_prompt_batch)
          out.replies.push_back(make(*s, MessageType::AgentUtterance, line));
        out.replies.push_back(make(*s, MessageType::GameState, state_summary(*s)));
        return out;
      }
    }
  }

  auto s = std::make_shared<Session>();
  {
    std::lock_guard lock(mu_);
    s->id = new_session_id();
    s->seed = derive_seed(config_.master_seed, counter_++);
    sessions_.emplace(s->id, s);
  }
  std::lock_guard lock(s->mu);
  s->machine = new_machine(ctx_, s->seed, config_.dialog);
  s->created_at = s->last_active_at = Clock::now();
  transcripts_.write_header(TranscriptHeader{s->id, s->seed, ctx_->kb->version(),
                                             format_phase_order(config_.dialog.phase_order),
                                             now_iso8601()});
  WireMessage ack = make(*s, MessageType::SessionStart, "");
  Outcome out = feed(*s, SessionStart{}, "session.start", "system", "");
  out.replies.insert(out.replies.begin(), std::move(ack));
  return out;
}

ChatService::Outcome ChatService::feed(Session& s, const DialogEvent& ev, std::string_view event_type,
                                       std::string_view direction, const std::string& text) {
  Outcome out{s.id, {}, false};
  if (s.ended) {
    out.replies.push_back(make(s, MessageType::Error, "game is over"));
    out.close = true;
    return out;
  }
  s.last_active_at = Clock::now();

  StepResult r;
  try {
    r = step(s.machine, ev);
  } catch (const ProtocolError& e) {
    out.replies.push_back(make(s, MessageType::Error, e.what()));
    return out;
  }

  transcripts_.append(TranscriptLine{now_iso8601(), s.id, std::string(direction),
                                     std::string(event_type), text, ++s.seq,
                                     s.machine.phase_label()});
  s.machine = std::move(r.machine);
  for (auto& u : r.utterances) {
    WireMessage m = make(s, MessageType::AgentUtterance, u);
    transcripts_.append(TranscriptLine{m.ts, s.id, "agent", "agent.utterance", m.text, m.turn, m.phase});
    out.replies.push_back(std::move(m));
  }
  if (!r.utterances.empty()) s.last_prompt_batch = r.utterances;

  out.replies.push_back(make(s, MessageType::GameState, state_summary(s)));
  if (s.machine.state == ControlState::GameEnd) {
    s.ended = true;
    out.replies.push_back(make(s, MessageType::GameEnd, "game over"));
    out.close = true;
    std::lock_guard lock(mu_);
    sessions_.erase(s.id);
  }
  return out;
}

ChatService::Outcome ChatService::timeout(const std::string& session_id) {
  auto s = find(session_id);
  if (!s) return Outcome{session_id, {}, true};
  std::lock_guard lock(s->mu);
  return feed(*s, Timeout{}, "timeout", "system", "");
}

void ChatService::detach(const std::string& session_id) {
  if (auto s = find(session_id)) {
    std::lock_guard lock(s->mu);
    s->attached = false;
    s->last_active_at = Clock::now();
  }
}

std::size_t ChatService::evict_expired(Clock::time_point now) {
  std::vector<std::shared_ptr<Session>> expired;
  {
    std::lock_guard lock(mu_);
    for (const auto& [id, s] : sessions_) expired.push_back(s);
  }
  std::size_t n = 0;
  for (auto& s : expired) {
    std::lock_guard lock(s->mu);
    if (s->attached || s->ended || now - s->last_active_at < config_.retention) continue;
    feed(*s, SessionEnd{}, "session.end", "system", "");
    ++n;
  }
  return n;
}

}  // namespace emo20q
