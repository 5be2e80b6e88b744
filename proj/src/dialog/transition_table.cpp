#include <fstream>
#include <sstream>

#include <json.hpp>

#include "emo20q/core/error.hpp"
#include "emo20q/dialog.hpp"

namespace emo20q {

namespace {

constexpr std::pair<ControlState, std::string_view> kStateNames[] = {
    {ControlState::Start, "Start"},
    {ControlState::Intro, "Intro"},
    {ControlState::PhaseAskerAgent, "PhaseAskerAgent"},
    {ControlState::AwaitAnswer, "AwaitAnswer"},
    {ControlState::GuessPending, "GuessPending"},
    {ControlState::PhaseAnswererAgent, "PhaseAnswererAgent"},
    {ControlState::AwaitQuestion, "AwaitQuestion"},
    {ControlState::GameEnd, "GameEnd"},
};

constexpr std::pair<EventClass, std::string_view> kEventNames[] = {
    {EventClass::SessionStart, "SessionStart"},
    {EventClass::UserUtterance, "UserUtterance"},
    {EventClass::Timeout, "Timeout"},
    {EventClass::SessionEnd, "SessionEnd"},
    {EventClass::Epsilon, "epsilon"},
};

std::optional<EventClass> parse_event_class(std::string_view s) {
  for (const auto& [c, name] : kEventNames)
    if (name == s) return c;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(ControlState s) {
  for (const auto& [state, name] : kStateNames)
    if (state == s) return name;
  return "?";
}

std::optional<ControlState> parse_control_state(std::string_view s) {
  for (const auto& [state, name] : kStateNames)
    if (name == s) return state;
  return std::nullopt;
}

std::string_view to_string(EventClass c) {
  for (const auto& [ev, name] : kEventNames)
    if (ev == c) return name;
  return "?";
}

const std::set<std::string>& TransitionTable::known_handlers() {
  static const std::set<std::string> handlers = {
      "greet",      "idle",          "enter_phase",     "asker_act",       "record_answer",
      "resolve_guess", "begin_answering", "answer_question", "reprompt", "end_session", "noop",
  };
  return handlers;
}

TransitionTable::TransitionTable(std::vector<Transition> transitions)
    : transitions_(std::move(transitions)) {
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto& t = transitions_[i];
    const std::string where = std::string(to_string(t.from)) + " + " + std::string(to_string(t.event));
    if (!known_handlers().contains(t.handler))
      throw ValidationError("transition " + where + ": unknown handler \"" + t.handler + "\"");
    if (t.targets.empty()) throw ValidationError("transition " + where + ": no target states");
    if (!index_.emplace(std::make_pair(t.from, t.event), i).second)
      throw ValidationError("transition " + where + ": duplicated");
  }
  for (const auto& t : transitions_)
    if (t.event == EventClass::Epsilon)
      for (auto ev : {EventClass::SessionStart, EventClass::UserUtterance, EventClass::Timeout})
        if (find(t.from, ev))
          throw ValidationError("state " + std::string(to_string(t.from)) +
                                " mixes epsilon and input transitions");
}

TransitionTable TransitionTable::parse(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("transition table: ") + e.what(), 0);
  }
  const auto& list = doc.is_object() ? doc.at("transitions") : doc;
  std::vector<Transition> out;
  for (const auto& item : list) {
    Transition t;
    auto from = parse_control_state(item.at("from").get<std::string>());
    auto ev = parse_event_class(item.at("event").get<std::string>());
    if (!from) throw ValidationError("transition table: unknown state " + item.at("from").dump());
    if (!ev) throw ValidationError("transition table: unknown event " + item.at("event").dump());
    t.from = *from;
    t.event = *ev;
    t.handler = item.at("handler").get<std::string>();
    for (const auto& to : item.at("to")) {
      auto s = parse_control_state(to.get<std::string>());
      if (!s) throw ValidationError("transition table: unknown state " + to.dump());
      t.targets.push_back(*s);
    }
    out.push_back(std::move(t));
  }
  return TransitionTable(std::move(out));
}

TransitionTable TransitionTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const Transition* TransitionTable::find(ControlState from, EventClass ev) const {
  auto it = index_.find({from, ev});
  return it == index_.end() ? nullptr : &transitions_[it->second];
}

std::set<ControlState> TransitionTable::successors(ControlState s) const {
  std::set<ControlState> out;
  for (const auto& t : transitions_)
    if (t.from == s) out.insert(t.targets.begin(), t.targets.end());
  return out;
}

std::set<ControlState> TransitionTable::reachable_from(ControlState s) const {
  std::set<ControlState> seen = {s};
  std::vector<ControlState> todo = {s};
  while (!todo.empty()) {
    const auto cur = todo.back();
    todo.pop_back();
    for (auto next : successors(cur))
      if (seen.insert(next).second) todo.push_back(next);
  }
  return seen;
}

}  // namespace emo20q
