#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace emo20q {

enum class MessageType { SessionStart, AgentUtterance, UserUtterance, GameState, GameEnd, Error };

std::string_view to_string(MessageType t);
std::optional<MessageType> parse_message_type(std::string_view s);

// One JSON text frame on the chat connection. `turn` is the per-session
// sequence number assigned by the service; it strictly increases over the
// messages a session emits.
struct WireMessage {
  MessageType type = MessageType::Error;
  std::string session_id;
  std::int64_t turn = 0;
  std::string text;
  std::string phase;
  std::string ts;

  friend bool operator==(const WireMessage&, const WireMessage&) = default;
};

// Canonical JSON: all six fields, in the order type, session_id, turn, text, phase, ts.
std::string encode(const WireMessage& m);

// Only `type` is required; absent fields take their defaults and unknown
// fields are ignored. Throws ProtocolError on malformed input.
WireMessage decode(std::string_view json_text);

// Current UTC time as YYYY-MM-DDTHH:MM:SS.mmmZ.
std::string now_iso8601();

}  // namespace emo20q
