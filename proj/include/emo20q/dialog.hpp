#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "emo20q/answerer.hpp"
#include "emo20q/asker.hpp"
#include "emo20q/core/knowledge_base.hpp"
#include "emo20q/game.hpp"
#include "emo20q/nlu.hpp"

namespace emo20q {

enum class ControlState {
  Start,
  Intro,
  PhaseAskerAgent,
  AwaitAnswer,
  GuessPending,
  PhaseAnswererAgent,
  AwaitQuestion,
  GameEnd,
};

enum class Phase { AgentAsks, AgentAnswers };

std::string_view to_string(ControlState s);
std::optional<ControlState> parse_control_state(std::string_view s);
std::string_view to_string(Phase p);  // "agent-asks" | "agent-answers"
// Comma-separated list of phases, e.g. "agent-asks,agent-answers".
std::vector<Phase> parse_phase_order(std::string_view s);
std::string format_phase_order(const std::vector<Phase>& order);

// ---------------------------------------------------------------------------
// Stack alphabet

struct Bottom {
  friend bool operator==(const Bottom&, const Bottom&) = default;
};
struct QaRecord {
  QaEvent event;
  friend bool operator==(const QaRecord&, const QaRecord&) = default;
};
struct GuessFrame {
  std::string emotion;
  friend bool operator==(const GuessFrame&, const GuessFrame&) = default;
};
using StackSymbol = std::variant<Bottom, QaRecord, GuessFrame>;

// ---------------------------------------------------------------------------
// Input alphabet

struct SessionStart {
  friend bool operator==(const SessionStart&, const SessionStart&) = default;
};
struct UserUtterance {
  std::string text;
  friend bool operator==(const UserUtterance&, const UserUtterance&) = default;
};
struct Timeout {
  friend bool operator==(const Timeout&, const Timeout&) = default;
};
struct SessionEnd {
  friend bool operator==(const SessionEnd&, const SessionEnd&) = default;
};
using DialogEvent = std::variant<SessionStart, UserUtterance, Timeout, SessionEnd>;

// Epsilon marks a transition taken without consuming input.
enum class EventClass { SessionStart, UserUtterance, Timeout, SessionEnd, Epsilon };

EventClass event_class(const DialogEvent& ev);
std::string_view to_string(EventClass c);
std::string describe(const DialogEvent& ev);

// ---------------------------------------------------------------------------
// Transition graph, loaded from data

struct Transition {
  ControlState from;
  EventClass event;
  std::string handler;
  std::vector<ControlState> targets;
};

class TransitionTable {
 public:
  explicit TransitionTable(std::vector<Transition> transitions);
  static TransitionTable parse(std::string_view json_text);
  static TransitionTable load(const std::filesystem::path& path);

  const std::vector<Transition>& transitions() const { return transitions_; }
  const Transition* find(ControlState from, EventClass ev) const;
  std::set<ControlState> successors(ControlState s) const;
  std::set<ControlState> reachable_from(ControlState s) const;
  // States with an epsilon transition never hold between events.
  bool is_transient(ControlState s) const { return find(s, EventClass::Epsilon) != nullptr; }

  static const std::set<std::string>& known_handlers();

 private:
  std::vector<Transition> transitions_;
  std::map<std::pair<ControlState, EventClass>, std::size_t> index_;
};

// ---------------------------------------------------------------------------
// Machine

// Agent-side dialog text. Placeholders: {question}, {emotion}, {turns}.
struct DialogTexts {
  std::string greeting = "Hi! Let's play Emotion Twenty Questions.";
  std::string rules = "One of us picks an emotion word and the other has twenty turns of yes/no questions to guess it.";
  std::string asker_intro = "Think of an emotion word and I'll try to guess it. Answer my questions with yes or no.";
  std::string answerer_intro = "I've picked an emotion word. Ask me yes/no questions, or guess it.";
  std::string guess = "Is it {emotion}?";
  std::string guess_reprompt = "Sorry, I need a yes or a no. Is it {emotion}?";
  std::string asker_won = "I got it in {turns} turns!";
  std::string asker_concede = "I give up! You win this round.";
  std::string timeout = "Are you still there?";
  std::string give_up = "Let's stop here. Thanks for playing!";
  std::string goodbye = "That's the end of the game. Thanks for playing!";
  std::string session_end = "Goodbye!";
  AnswererReplies answers;

  static DialogTexts load(const std::filesystem::path& path);
};

// Read-only resources shared by every machine.
struct GameContext {
  std::shared_ptr<const KnowledgeBase> kb;
  std::shared_ptr<const Nlu> nlu;
  std::shared_ptr<const AnswerClassifier> classifier;
  std::shared_ptr<const TransitionTable> table;
  DialogTexts texts;
};

struct DialogConfig {
  std::vector<Phase> phase_order = {Phase::AgentAsks, Phase::AgentAnswers};
  int max_timeouts = 3;  // consecutive timeouts before giving up; 0 disables
  AskerPolicy policy;
};

struct TranscriptEntry {
  DialogEvent event;
  std::vector<std::string> utterances;
};

struct DialogMachine {
  std::shared_ptr<const GameContext> ctx;
  DialogConfig config;
  std::uint64_t seed = 0;

  ControlState state = ControlState::Start;
  std::vector<StackSymbol> stack;
  AskerState asker;
  AnswererState answerer;
  std::size_t phase_index = 0;
  int consecutive_timeouts = 0;
  std::optional<AskerAction> pending;
  std::string last_prompt;
  std::vector<TranscriptEntry> transcript;

  // Phase label for the current state: "intro", "agent-asks", "agent-answers" or "end".
  std::string phase_label() const;
  // Questions/guesses used in the current phase.
  int phase_turn() const;
};

DialogMachine new_machine(std::shared_ptr<const GameContext> ctx, std::uint64_t seed,
                          DialogConfig config = {});

struct StepResult {
  DialogMachine machine;
  std::vector<std::string> utterances;
  std::vector<ControlState> path;  // every state entered, including epsilon moves
};

// Pure transition. Throws ProtocolError when `ev` is not accepted in the
// current state.
StepResult step(const DialogMachine& m, const DialogEvent& ev);

struct TraceEntry {
  std::optional<std::size_t> event_index;  // empty for the initial entry
  std::string event;
  std::vector<ControlState> path;
  ControlState state;
  std::vector<StackSymbol> stack;
  std::vector<std::string> utterances;
};

std::vector<TraceEntry> replay(std::shared_ptr<const GameContext> ctx, std::uint64_t seed,
                               const DialogConfig& config, const std::vector<DialogEvent>& events);

std::string trace_to_json(const std::vector<TraceEntry>& trace);
std::string events_to_json(const std::vector<DialogEvent>& events);
std::vector<DialogEvent> parse_events(std::string_view json_text);

// Loads kb, nlu tables, transition table and texts from a data directory laid
// out as data/{nlu,dialog}/. The classifier defaults to KbClassifier.
std::shared_ptr<const GameContext> make_context(std::shared_ptr<const KnowledgeBase> kb,
                                                const std::filesystem::path& data_dir,
                                                std::shared_ptr<const AnswerClassifier> classifier = nullptr);

}  // namespace emo20q
