#include "emo20q/service/wire.hpp"

#include <chrono>
#include <ctime>
#include <cstdio>

#include <json.hpp>

#include "emo20q/core/error.hpp"

namespace emo20q {

namespace {

constexpr std::pair<MessageType, std::string_view> kTypeNames[] = {
    {MessageType::SessionStart, "session.start"},   {MessageType::AgentUtterance, "agent.utterance"},
    {MessageType::UserUtterance, "user.utterance"}, {MessageType::GameState, "game.state"},
    {MessageType::GameEnd, "game.end"},             {MessageType::Error, "error"},
};

}  // namespace

std::string_view to_string(MessageType t) {
  for (const auto& [type, name] : kTypeNames)
    if (type == t) return name;
  return "error";
}

std::optional<MessageType> parse_message_type(std::string_view s) {
  for (const auto& [type, name] : kTypeNames)
    if (name == s) return type;
  return std::nullopt;
}

std::string encode(const WireMessage& m) {
  nlohmann::ordered_json j;
  j["type"] = to_string(m.type);
  j["session_id"] = m.session_id;
  j["turn"] = m.turn;
  j["text"] = m.text;
  j["phase"] = m.phase;
  j["ts"] = m.ts;
  return j.dump();
}

WireMessage decode(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProtocolError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError("message must be a JSON object");
  if (!j.contains("type") || !j["type"].is_string()) throw ProtocolError("missing field \"type\"");

  WireMessage m;
  const auto type_name = j["type"].get<std::string>();
  auto type = parse_message_type(type_name);
  if (!type) throw ProtocolError("unknown message type \"" + type_name + "\"");
  m.type = *type;

  auto read_string = [&](const char* key, std::string& field) {
    if (!j.contains(key) || j[key].is_null()) return;
    if (!j[key].is_string()) throw ProtocolError(std::string("field \"") + key + "\" must be a string");
    field = j[key].get<std::string>();
  };
  read_string("session_id", m.session_id);
  read_string("text", m.text);
  read_string("phase", m.phase);
  read_string("ts", m.ts);
  if (j.contains("turn") && !j["turn"].is_null()) {
    if (!j["turn"].is_number_integer() || j["turn"].get<std::int64_t>() < 0)
      throw ProtocolError("field \"turn\" must be a non-negative integer");
    m.turn = j["turn"].get<std::int64_t>();
  }
  return m;
}

std::string now_iso8601() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  const std::time_t t = system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

}  // namespace emo20q
