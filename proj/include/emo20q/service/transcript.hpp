#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "emo20q/dialog.hpp"

namespace emo20q {

// First line of every transcript file.
struct TranscriptHeader {
  std::string session_id;
  std::uint64_t seed = 0;
  int kb_version = 0;
  std::string phase_order;
  std::string started_at;
};

// One logged event or agent utterance. Deliberately carries no user
// identity: no names, e-mail or network addresses.
struct TranscriptLine {
  std::string ts;
  std::string session_id;
  std::string direction;  // user | agent | system
  std::string type;
  std::string text;
  std::int64_t turn = 0;
  std::string phase;
};

const std::set<std::string>& transcript_header_keys();
const std::set<std::string>& transcript_line_keys();

std::string to_json_line(const TranscriptHeader& h);
std::string to_json_line(const TranscriptLine& l);

// Append-only JSONL files, one per session, named <session_id>.jsonl. Each
// append is flushed to disk before returning. Failures are reported through
// the return value and healthy(); they never throw.
class TranscriptStore {
 public:
  explicit TranscriptStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(const std::string& session_id) const;

  bool write_header(const TranscriptHeader& h);
  bool append(const TranscriptLine& line);
  bool healthy() const { return healthy_.load(); }

 private:
  bool append_raw(const std::string& session_id, const std::string& json_line);

  std::filesystem::path dir_;
  std::atomic<bool> healthy_{true};
};

struct Transcript {
  TranscriptHeader header;
  std::vector<TranscriptLine> lines;
};

// Throws ParseError/ValidationError on a malformed file.
Transcript read_transcript(const std::filesystem::path& path);

// Events recorded in the transcript, in order.
std::vector<DialogEvent> transcript_events(const Transcript& t);
std::vector<std::string> transcript_agent_lines(const Transcript& t);

struct TranscriptReplayCheck {
  bool matches = false;
  std::vector<std::string> expected;  // agent lines in the file
  std::vector<std::string> replayed;  // agent lines from replay()
};

// Re-runs the recorded events with the recorded seed and phase order.
TranscriptReplayCheck verify_transcript(std::shared_ptr<const GameContext> ctx,
                                        const Transcript& t, DialogConfig base = {});

}  // namespace emo20q
