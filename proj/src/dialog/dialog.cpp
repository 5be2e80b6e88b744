#include "emo20q/dialog.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "emo20q/core/error.hpp"

namespace emo20q {

using nlohmann::ordered_json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Guards against a table that loops through epsilon moves forever.
constexpr int kMaxEpsilonMoves = 16;

std::string render_question(const std::string& gloss) {
  std::string out = gloss;
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  if (!out.empty() && out.back() != '?') out += '?';
  return out;
}

bool is_asker_state(ControlState s) {
  return s == ControlState::PhaseAskerAgent || s == ControlState::AwaitAnswer ||
         s == ControlState::GuessPending;
}

bool is_answerer_state(ControlState s) {
  return s == ControlState::PhaseAnswererAgent || s == ControlState::AwaitQuestion;
}

// Mutable working copy for one step.
struct Stepper {
  DialogMachine m;
  std::vector<std::string> out;

  const GameContext& ctx() const { return *m.ctx; }
  const KnowledgeBase& kb() const { return *m.ctx->kb; }
  const DialogTexts& texts() const { return m.ctx->texts; }

  void say(std::string s) { out.push_back(std::move(s)); }
  void prompt(std::string s) {
    m.last_prompt = s;
    say(std::move(s));
  }

  ControlState finish_phase() {
    ++m.phase_index;
    m.pending.reset();
    return ControlState::Intro;
  }

  ControlState run(const std::string& handler, const DialogEvent& ev) {
    if (handler == "greet") {
      say(texts().greeting);
      say(texts().rules);
      return ControlState::Intro;
    }
    if (handler == "idle" || handler == "noop") return m.state;
    if (handler == "end_session") {
      // An unanswered guess is abandoned, not left open.
      if (!m.stack.empty() && std::holds_alternative<GuessFrame>(m.stack.back())) m.stack.pop_back();
      m.pending.reset();
      say(texts().session_end);
      return ControlState::GameEnd;
    }
    if (handler == "enter_phase") return enter_phase();
    if (handler == "asker_act") return asker_act();
    if (handler == "record_answer") return record_answer(std::get<UserUtterance>(ev).text);
    if (handler == "resolve_guess") return resolve_guess(std::get<UserUtterance>(ev).text);
    if (handler == "begin_answering") {
      prompt(texts().answerer_intro);
      return ControlState::AwaitQuestion;
    }
    if (handler == "answer_question") return answer_question(std::get<UserUtterance>(ev).text);
    if (handler == "reprompt") return reprompt();
    throw ProtocolError("no implementation for handler \"" + handler + "\"");
  }

  ControlState enter_phase() {
    if (m.phase_index >= m.config.phase_order.size()) {
      say(texts().goodbye);
      return ControlState::GameEnd;
    }
    if (m.config.phase_order[m.phase_index] == Phase::AgentAsks) {
      m.asker = new_asker(kb());
      say(texts().asker_intro);
      return ControlState::PhaseAskerAgent;
    }
    m.answerer = new_answerer(pick_secret(kb().lexicon(), m.seed));
    return ControlState::PhaseAnswererAgent;
  }

  ControlState asker_act() {
    if (m.asker.status == AskerStatus::Won) {
      say(fill_template(texts().asker_won, {{"turns", std::to_string(m.asker.turn)}}));
      return finish_phase();
    }
    if (m.asker.status == AskerStatus::Conceded) {
      say(texts().asker_concede);
      return finish_phase();
    }
    AskerAction action = decide_action(m.asker, kb(), m.config.policy);
    return std::visit(
        overloaded{
            [&](const AskQuestion& a) {
              m.pending = action;
              prompt(render_question(kb().question(kb().question_index(a.question_id)).gloss));
              return ControlState::AwaitAnswer;
            },
            [&](const MakeGuess& g) {
              m.pending = action;
              m.stack.push_back(GuessFrame{g.emotion});
              prompt(fill_template(texts().guess, {{"emotion", g.emotion}}));
              return ControlState::GuessPending;
            },
            [&](const Concede&) {
              m.asker = observe_answer(m.asker, kb(), action, Answer::Other);
              say(texts().asker_concede);
              return finish_phase();
            },
        },
        action);
  }

  ControlState record_answer(const std::string& text) {
    const AskerAction action = *m.pending;
    m.asker = observe(m.asker, kb(), *ctx().nlu, action, text, m.last_prompt);
    m.stack.push_back(QaRecord{m.asker.history.back()});
    m.pending.reset();
    return ControlState::PhaseAskerAgent;
  }

  ControlState resolve_guess(const std::string& text) {
    const AskerAction action = *m.pending;
    const auto& guess = std::get<MakeGuess>(action);
    const Answer a = ctx().nlu->bucket_answer(text);
    if (a == Answer::Other) {
      prompt(fill_template(texts().guess_reprompt, {{"emotion", guess.emotion}}));
      return ControlState::GuessPending;
    }
    m.asker = observe_answer(m.asker, kb(), action, a, m.last_prompt, text);
    m.stack.pop_back();  // GuessFrame
    m.stack.push_back(QaRecord{m.asker.history.back()});
    m.pending.reset();
    return ControlState::PhaseAskerAgent;
  }

  ControlState answer_question(const std::string& text) {
    RespondResult r = respond(m.answerer, kb(), *ctx().nlu, *ctx().classifier, text,
                              texts().answers);
    m.answerer = std::move(r.state);
    for (auto& line : r.lines) say(std::move(line));
    if (m.answerer.status != AnswererStatus::Playing) return finish_phase();
    return ControlState::AwaitQuestion;
  }

  ControlState reprompt() {
    ++m.consecutive_timeouts;
    if (m.config.max_timeouts > 0 && m.consecutive_timeouts >= m.config.max_timeouts) {
      say(texts().give_up);
      return ControlState::GameEnd;
    }
    say(texts().timeout);
    if (!m.last_prompt.empty()) say(m.last_prompt);
    return m.state;
  }
};

std::string json_string(const ordered_json& j) { return j.dump(); }

ordered_json qa_to_json(const QaEvent& e) {
  return ordered_json{{"question_id", e.question_id},
                      {"answer", std::string(to_string(e.answer))},
                      {"question", e.raw_question_text},
                      {"reply", e.raw_answer_text},
                      {"turn", e.turn}};
}

ordered_json symbol_to_json(const StackSymbol& s) {
  return std::visit(overloaded{
                        [](const Bottom&) { return ordered_json("Bottom"); },
                        [](const QaRecord& r) { return ordered_json{{"QaRecord", qa_to_json(r.event)}}; },
                        [](const GuessFrame& g) { return ordered_json{{"GuessFrame", g.emotion}}; },
                    },
                    s);
}

}  // namespace

std::string_view to_string(Phase p) { return p == Phase::AgentAsks ? "agent-asks" : "agent-answers"; }

std::vector<Phase> parse_phase_order(std::string_view s) {
  std::vector<Phase> out;
  std::string item;
  std::istringstream in{std::string(s)};
  while (std::getline(in, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(),
                              [](unsigned char c) { return std::isspace(c); }),
               item.end());
    if (item == "agent-asks" || item == "asker")
      out.push_back(Phase::AgentAsks);
    else if (item == "agent-answers" || item == "answerer")
      out.push_back(Phase::AgentAnswers);
    else
      throw ValidationError("unknown phase \"" + item + "\" (expected agent-asks or agent-answers)");
  }
  if (out.empty()) throw ValidationError("phase order is empty");
  return out;
}

std::string format_phase_order(const std::vector<Phase>& order) {
  std::string out;
  for (auto p : order) {
    if (!out.empty()) out += ',';
    out += to_string(p);
  }
  return out;
}

EventClass event_class(const DialogEvent& ev) {
  return std::visit(overloaded{
                        [](const SessionStart&) { return EventClass::SessionStart; },
                        [](const UserUtterance&) { return EventClass::UserUtterance; },
                        [](const Timeout&) { return EventClass::Timeout; },
                        [](const SessionEnd&) { return EventClass::SessionEnd; },
                    },
                    ev);
}

std::string describe(const DialogEvent& ev) {
  if (auto* u = std::get_if<UserUtterance>(&ev)) return "UserUtterance(" + json_string(u->text) + ")";
  return std::string(to_string(event_class(ev)));
}

std::string DialogMachine::phase_label() const {
  if (is_asker_state(state)) return "agent-asks";
  if (is_answerer_state(state)) return "agent-answers";
  if (state == ControlState::GameEnd) return "end";
  return "intro";
}

int DialogMachine::phase_turn() const {
  if (is_asker_state(state)) return asker.turn;
  if (is_answerer_state(state)) return answerer.turn;
  return 0;
}

DialogMachine new_machine(std::shared_ptr<const GameContext> ctx, std::uint64_t seed,
                          DialogConfig config) {
  if (!ctx || !ctx->kb || !ctx->nlu || !ctx->classifier || !ctx->table)
    throw ValidationError("game context is incomplete");
  if (config.phase_order.empty()) throw ValidationError("phase order is empty");
  DialogMachine m;
  m.ctx = std::move(ctx);
  m.config = std::move(config);
  m.seed = seed;
  m.stack = {Bottom{}};
  m.asker = new_asker(*m.ctx->kb);
  m.answerer = new_answerer(pick_secret(m.ctx->kb->lexicon(), seed));
  return m;
}

StepResult step(const DialogMachine& m, const DialogEvent& ev) {
  const TransitionTable& table = *m.ctx->table;
  const EventClass cls = event_class(ev);
  const Transition* t = table.find(m.state, cls);
  if (t == nullptr)
    throw ProtocolError("event " + std::string(to_string(cls)) + " not accepted in state " +
                        std::string(to_string(m.state)));

  Stepper s{m, {}};
  std::vector<ControlState> path;
  if (cls == EventClass::UserUtterance) s.m.consecutive_timeouts = 0;

  auto apply = [&](const Transition& tr, const DialogEvent& input) {
    const ControlState next = s.run(tr.handler, input);
    if (std::find(tr.targets.begin(), tr.targets.end(), next) == tr.targets.end())
      throw ProtocolError("handler " + tr.handler + " moved " + std::string(to_string(tr.from)) +
                          " to undeclared state " + std::string(to_string(next)));
    s.m.state = next;
    path.push_back(next);
  };

  apply(*t, ev);
  for (int i = 0; i < kMaxEpsilonMoves; ++i) {
    const Transition* eps = table.find(s.m.state, EventClass::Epsilon);
    if (eps == nullptr) break;
    apply(*eps, ev);
  }
  if (table.is_transient(s.m.state))
    throw ProtocolError("epsilon moves did not settle in state " + std::string(to_string(s.m.state)));

  s.m.transcript.push_back(TranscriptEntry{ev, s.out});
  return StepResult{std::move(s.m), std::move(s.out), std::move(path)};
}

std::vector<TraceEntry> replay(std::shared_ptr<const GameContext> ctx, std::uint64_t seed,
                               const DialogConfig& config, const std::vector<DialogEvent>& events) {
  DialogMachine m = new_machine(std::move(ctx), seed, config);
  std::vector<TraceEntry> trace;
  trace.push_back(TraceEntry{std::nullopt, "", {}, m.state, m.stack, {}});
  for (std::size_t i = 0; i < events.size(); ++i) {
    StepResult r;
    try {
      r = step(m, events[i]);
    } catch (const ProtocolError& e) {
      throw ProtocolError("event #" + std::to_string(i) + ": " + e.what());
    }
    m = std::move(r.machine);
    trace.push_back(TraceEntry{i, describe(events[i]), std::move(r.path), m.state, m.stack,
                               std::move(r.utterances)});
  }
  return trace;
}

std::string trace_to_json(const std::vector<TraceEntry>& trace) {
  ordered_json out = ordered_json::array();
  for (const auto& e : trace) {
    ordered_json j;
    j["event_index"] = e.event_index ? ordered_json(*e.event_index) : ordered_json(nullptr);
    j["event"] = e.event;
    ordered_json path = ordered_json::array();
    for (auto s : e.path) path.push_back(std::string(to_string(s)));
    j["path"] = path;
    j["state"] = std::string(to_string(e.state));
    ordered_json stack = ordered_json::array();
    for (const auto& sym : e.stack) stack.push_back(symbol_to_json(sym));
    j["stack"] = stack;
    j["utterances"] = e.utterances;
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

std::string events_to_json(const std::vector<DialogEvent>& events) {
  ordered_json out = ordered_json::array();
  for (const auto& ev : events) {
    std::visit(overloaded{
                   [&](const SessionStart&) { out.push_back({{"event", "session_start"}}); },
                   [&](const UserUtterance& u) {
                     out.push_back({{"event", "utterance"}, {"text", u.text}});
                   },
                   [&](const Timeout&) { out.push_back({{"event", "timeout"}}); },
                   [&](const SessionEnd&) { out.push_back({{"event", "session_end"}}); },
               },
               ev);
  }
  return out.dump(2) + "\n";
}

std::vector<DialogEvent> parse_events(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("events: ") + e.what(), 0);
  }
  std::vector<DialogEvent> out;
  for (const auto& item : doc) {
    const auto kind = item.at("event").get<std::string>();
    if (kind == "session_start")
      out.emplace_back(SessionStart{});
    else if (kind == "utterance")
      out.emplace_back(UserUtterance{item.at("text").get<std::string>()});
    else if (kind == "timeout")
      out.emplace_back(Timeout{});
    else if (kind == "session_end")
      out.emplace_back(SessionEnd{});
    else
      throw ValidationError("events: unknown event \"" + kind + "\"");
  }
  return out;
}

DialogTexts DialogTexts::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
  DialogTexts t;
  auto read = [&](const nlohmann::json& obj, const char* key, std::string& field) {
    if (obj.contains(key)) field = obj.at(key).get<std::string>();
  };
  read(doc, "greeting", t.greeting);
  read(doc, "rules", t.rules);
  read(doc, "asker_intro", t.asker_intro);
  read(doc, "answerer_intro", t.answerer_intro);
  read(doc, "guess", t.guess);
  read(doc, "guess_reprompt", t.guess_reprompt);
  read(doc, "asker_won", t.asker_won);
  read(doc, "asker_concede", t.asker_concede);
  read(doc, "timeout", t.timeout);
  read(doc, "give_up", t.give_up);
  read(doc, "goodbye", t.goodbye);
  read(doc, "session_end", t.session_end);
  if (doc.contains("answers")) {
    const auto& a = doc.at("answers");
    read(a, "yes", t.answers.yes);
    read(a, "no", t.answers.no);
    read(a, "other", t.answers.other);
    read(a, "correct_guess", t.answers.correct_guess);
    read(a, "wrong_guess", t.answers.wrong_guess);
    read(a, "reveal", t.answers.reveal);
    read(a, "empty_input", t.answers.empty_input);
  }
  return t;
}

std::shared_ptr<const GameContext> make_context(std::shared_ptr<const KnowledgeBase> kb,
                                                const std::filesystem::path& data_dir,
                                                std::shared_ptr<const AnswerClassifier> classifier) {
  auto ctx = std::make_shared<GameContext>();
  ctx->kb = std::move(kb);
  ctx->nlu = std::make_shared<const Nlu>(Nlu::load(data_dir / "nlu"));
  ctx->classifier =
      classifier ? std::move(classifier) : std::make_shared<const KbClassifier>(ctx->kb, ctx->nlu);
  ctx->table = std::make_shared<const TransitionTable>(
      TransitionTable::load(data_dir / "dialog" / "transitions.json"));
  ctx->texts = DialogTexts::load(data_dir / "dialog" / "replies.json");
  return ctx;
}

}  // namespace emo20q
