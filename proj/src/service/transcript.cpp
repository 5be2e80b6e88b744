#include "emo20q/service/transcript.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "emo20q/core/error.hpp"

namespace emo20q {

using nlohmann::ordered_json;

const std::set<std::string>& transcript_header_keys() {
  static const std::set<std::string> keys = {"session_id", "seed", "kb_version", "phase_order",
                                             "started_at"};
  return keys;
}

const std::set<std::string>& transcript_line_keys() {
  static const std::set<std::string> keys = {"ts",   "session_id", "direction", "type",
                                             "text", "turn",       "phase"};
  return keys;
}

std::string to_json_line(const TranscriptHeader& h) {
  ordered_json j;
  j["session_id"] = h.session_id;
  j["seed"] = h.seed;
  j["kb_version"] = h.kb_version;
  j["phase_order"] = h.phase_order;
  j["started_at"] = h.started_at;
  return j.dump() + "\n";
}

std::string to_json_line(const TranscriptLine& l) {
  ordered_json j;
  j["ts"] = l.ts;
  j["session_id"] = l.session_id;
  j["direction"] = l.direction;
  j["type"] = l.type;
  j["text"] = l.text;
  j["turn"] = l.turn;
  j["phase"] = l.phase;
  return j.dump() + "\n";
}

TranscriptStore::TranscriptStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) {
    std::cerr << "transcripts: cannot create " << dir_ << ": " << ec.message() << "\n";
    healthy_ = false;
  }
}

std::filesystem::path TranscriptStore::path_for(const std::string& session_id) const {
  return dir_ / (session_id + ".jsonl");
}

bool TranscriptStore::append_raw(const std::string& session_id, const std::string& json_line) {
  const auto path = path_for(session_id);
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  bool ok = fd >= 0;
  for (std::size_t off = 0; ok && off < json_line.size();) {
    const ssize_t n = ::write(fd, json_line.data() + off, json_line.size() - off);
    if (n < 0 && errno == EINTR) continue;
    ok = n > 0;
    if (ok) off += static_cast<std::size_t>(n);
  }
  if (ok) ok = ::fsync(fd) == 0;
  if (fd >= 0) ::close(fd);
  if (!ok) {
    std::cerr << "transcripts: write to " << path << " failed\n";
    healthy_ = false;
  }
  return ok;
}

bool TranscriptStore::write_header(const TranscriptHeader& h) {
  return append_raw(h.session_id, to_json_line(h));
}

bool TranscriptStore::append(const TranscriptLine& line) {
  return append_raw(line.session_id, to_json_line(line));
}

Transcript read_transcript(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open transcript " + path.string());
  Transcript t;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (raw.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(raw);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what(), lineno);
    }
    try {
      if (lineno == 1) {
        t.header.session_id = j.at("session_id").get<std::string>();
        t.header.seed = j.at("seed").get<std::uint64_t>();
        t.header.kb_version = j.at("kb_version").get<int>();
        t.header.phase_order = j.at("phase_order").get<std::string>();
        t.header.started_at = j.at("started_at").get<std::string>();
        continue;
      }
      TranscriptLine l;
      l.ts = j.at("ts").get<std::string>();
      l.session_id = j.at("session_id").get<std::string>();
      l.direction = j.at("direction").get<std::string>();
      l.type = j.at("type").get<std::string>();
      l.text = j.at("text").get<std::string>();
      l.turn = j.at("turn").get<std::int64_t>();
      l.phase = j.at("phase").get<std::string>();
      t.lines.push_back(std::move(l));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return t;
}

std::vector<DialogEvent> transcript_events(const Transcript& t) {
  std::vector<DialogEvent> out;
  for (const auto& l : t.lines) {
    if (l.direction == "agent") continue;
    if (l.type == "session.start")
      out.emplace_back(SessionStart{});
    else if (l.type == "user.utterance")
      out.emplace_back(UserUtterance{l.text});
    else if (l.type == "timeout")
      out.emplace_back(Timeout{});
    else if (l.type == "session.end")
      out.emplace_back(SessionEnd{});
  }
  return out;
}

std::vector<std::string> transcript_agent_lines(const Transcript& t) {
  std::vector<std::string> out;
  for (const auto& l : t.lines)
    if (l.direction == "agent") out.push_back(l.text);
  return out;
}

TranscriptReplayCheck verify_transcript(std::shared_ptr<const GameContext> ctx, const Transcript& t,
                                        DialogConfig base) {
  base.phase_order = parse_phase_order(t.header.phase_order);
  TranscriptReplayCheck check;
  check.expected = transcript_agent_lines(t);
  for (const auto& entry : replay(std::move(ctx), t.header.seed, base, transcript_events(t)))
    check.replayed.insert(check.replayed.end(), entry.utterances.begin(), entry.utterances.end());
  check.matches = check.expected == check.replayed;
  return check;
}

}  // namespace emo20q
