#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "emo20q/dialog.hpp"
#include "emo20q/service/transcript.hpp"
#include "emo20q/service/wire.hpp"

namespace emo20q {

struct ServiceConfig {
  std::uint64_t master_seed = 0;
  DialogConfig dialog;
  std::filesystem::path transcripts_dir = "transcripts";
  std::chrono::seconds idle_timeout{120};
  // How long a session whose connection dropped can be resumed.
  std::chrono::seconds retention{600};
};

// Transport-independent session logic. Every inbound message for a session is
// processed under that session's lock, so per-session order is preserved even
// if callers race. Thread-safe.
class ChatService {
 public:
  using Clock = std::chrono::steady_clock;

  struct Outcome {
    std::string session_id;  // session bound to the connection after this call
    std::vector<WireMessage> replies;
    bool close = false;  // game over; the transport should close after sending
  };

  ChatService(std::shared_ptr<const GameContext> ctx, ServiceConfig config);

  // `bound_session` is the id the connection is attached to ("" before the handshake).
  Outcome handle_text(const std::string& bound_session, std::string_view raw);
  Outcome handle(const std::string& bound_session, const WireMessage& msg);
  // The connection was idle for idle_timeout.
  Outcome timeout(const std::string& session_id);
  // The connection dropped; the session stays resumable for `retention`.
  void detach(const std::string& session_id);
  // Ends sessions that were detached longer than `retention`. Returns how many.
  std::size_t evict_expired(Clock::time_point now = Clock::now());

  std::size_t session_count() const;
  bool transcripts_healthy() const { return transcripts_.healthy(); }
  const ServiceConfig& config() const { return config_; }
  const TranscriptStore& transcripts() const { return transcripts_; }

 private:
  struct Session {
    std::mutex mu;
    std::string id;
    std::uint64_t seed = 0;
    DialogMachine machine;
    std::int64_t seq = 0;
    bool attached = true;
    bool ended = false;
    Clock::time_point created_at;
    Clock::time_point last_active_at;
    std::vector<std::string> last_prompt_batch;
  };

  Outcome start(const WireMessage& msg);
  Outcome feed(Session& s, const DialogEvent& ev, std::string_view event_type,
               std::string_view direction, const std::string& text);
  std::shared_ptr<Session> find(const std::string& id) const;
  WireMessage make(Session& s, MessageType type, std::string text);
  std::string state_summary(const Session& s) const;
  static WireMessage error(const std::string& session_id, std::string text);
  std::string new_session_id();

  std::shared_ptr<const GameContext> ctx_;
  ServiceConfig config_;
  TranscriptStore transcripts_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

}  // namespace emo20q
