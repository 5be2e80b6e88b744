// emo20q: play in the terminal, run self-play evaluations, inspect KB files,
// replay dialogs, and serve the chat endpoint.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "emo20q/core/error.hpp"
#include "emo20q/dialog.hpp"
#include "emo20q/kb_tools.hpp"
#include "emo20q/selfplay.hpp"
#include "emo20q/service/chat_service.hpp"
#include "emo20q/service/server.hpp"
#include "emo20q/service/transcript.hpp"

#ifndef EMO20Q_DEFAULT_DATA_DIR
#define EMO20Q_DEFAULT_DATA_DIR "data"
#endif

namespace {

using namespace emo20q;

struct Common {
  std::string data_dir = EMO20Q_DEFAULT_DATA_DIR;
  std::string kb;
  std::string classifier_cmd;
  int classifier_timeout_ms = 2000;

  std::string kb_path() const {
    return kb.empty() ? (std::filesystem::path(data_dir) / "kb" / "seed_kb.json").string() : kb;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_command(const std::string& cmd) {
  std::istringstream in(cmd);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::shared_ptr<const GameContext> build_context(const Common& c) {
  auto kb = std::make_shared<const KnowledgeBase>(load_kb(c.kb_path()));
  auto ctx = make_context(kb, c.data_dir);
  if (c.classifier_cmd.empty()) return ctx;
  auto with_external = std::make_shared<GameContext>(*ctx);
  with_external->classifier = std::make_shared<const ExternalClassifier>(
      split_command(c.classifier_cmd), ctx->classifier,
      std::chrono::milliseconds(c.classifier_timeout_ms));
  return with_external;
}

void add_common(CLI::App* app, Common& c, bool with_classifier) {
  app->add_option("--data-dir", c.data_dir, "Directory with nlu/ and dialog/ data files")
      ->envname("EMO20Q_DATA_DIR");
  app->add_option("--kb", c.kb, "Knowledge base JSON (default: <data-dir>/kb/seed_kb.json)");
  if (with_classifier) {
    app->add_option("--classifier-cmd", c.classifier_cmd,
                    "External answer classifier speaking line-delimited JSON on stdin/stdout");
    app->add_option("--classifier-timeout-ms", c.classifier_timeout_ms,
                    "Fall back to the KB classifier after this long");
  }
}

int run_play(const Common& c, const std::string& role, std::uint64_t seed) {
  DialogConfig config;
  if (role == "asker")
    config.phase_order = {Phase::AgentAsks};
  else if (role == "answerer")
    config.phase_order = {Phase::AgentAnswers};
  DialogMachine m = new_machine(build_context(c), seed, config);

  auto feed = [&](const DialogEvent& ev) {
    StepResult r = step(m, ev);
    m = std::move(r.machine);
    for (const auto& u : r.utterances) std::cout << "agent> " << u << "\n";
  };
  feed(SessionStart{});
  std::string line;
  while (m.state != ControlState::GameEnd) {
    std::cout << "you> " << std::flush;
    if (!std::getline(std::cin, line)) {
      std::cout << "\n";
      feed(SessionEnd{});
      break;
    }
    feed(UserUtterance{line});
  }
  return 0;
}

int run_selfplay(const Common& c, const SelfPlayOptions& opts, bool json) {
  const KnowledgeBase kb = load_kb(c.kb_path());
  const Nlu nlu = Nlu::load(std::filesystem::path(c.data_dir) / "nlu");
  const SelfPlayReport report = run_selfplay(kb, nlu, opts);
  std::cout << (json ? report_to_json(report) : report_to_text(report));
  return 0;
}

int run_kb_validate(const std::string& path) {
  const KbValidation v = validate_kb_file(path);
  if (v.ok()) {
    std::cout << path << ": ok (" << v.kb->lexicon().size() << " emotions, "
              << v.kb->question_count() << " questions)\n";
    return 0;
  }
  for (const auto& p : v.problems) std::cerr << p << "\n";
  return 1;
}

int run_kb_stats(const std::string& path, bool json) {
  const KnowledgeBase kb = load_kb(path);
  std::cout << (json ? kb_stats_json(kb) : kb_stats_text(kb));
  return 0;
}

int run_replay(const Common& c, std::uint64_t seed, const std::string& phase_order,
               const std::string& events_path) {
  DialogConfig config;
  config.phase_order = parse_phase_order(phase_order);
  std::cout << trace_to_json(replay(build_context(c), seed, config, parse_events(read_file(events_path))));
  return 0;
}

int run_transcript_verify(const Common& c, const std::string& path) {
  const Transcript t = read_transcript(path);
  const auto check = verify_transcript(build_context(c), t);
  if (check.matches) {
    std::cout << path << ": replay reproduces " << check.expected.size() << " agent lines\n";
    return 0;
  }
  std::cerr << path << ": replay diverges (" << check.expected.size() << " recorded, "
            << check.replayed.size() << " replayed)\n";
  return 1;
}

Server* g_server = nullptr;

int run_serve(const Common& c, ServiceConfig sc, ServerConfig server_config) {
  auto service = std::make_shared<ChatService>(build_context(c), std::move(sc));
  Server server(service, server_config);
  server.start();
  g_server = &server;
  std::signal(SIGINT, [](int) { g_server->stop(); });
  std::signal(SIGTERM, [](int) { g_server->stop(); });
  std::cout << "emo20q listening on port " << server.port() << std::endl;
  server.wait();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EMO20Q: emotion twenty questions dialog agent"};
  app.require_subcommand(1);

  // play
  Common play_common;
  std::string role = "both";
  std::uint64_t play_seed = 0;
  auto* play = app.add_subcommand("play", "Play in the terminal");
  add_common(play, play_common, true);
  play->add_option("--role", role, "Role the agent plays: asker, answerer or both")
      ->check(CLI::IsMember({"asker", "answerer", "both"}));
  play->add_option("--seed", play_seed, "Seed for the agent's secret emotion");

  // selfplay
  Common sp_common;
  SelfPlayOptions sp;
  bool sp_json = false;
  auto* selfplay = app.add_subcommand("selfplay", "Agent-vs-agent evaluation");
  add_common(selfplay, sp_common, false);
  selfplay->add_option("--games", sp.games, "Number of games")->required();
  selfplay->add_option("--noise", sp.noise, "Probability of corrupting each answer")
      ->check(CLI::Range(0.0, 1.0));
  selfplay->add_option("--seed", sp.seed, "Master seed");
  selfplay->add_option("--jobs", sp.jobs, "Worker threads");
  selfplay->add_option("--guess-threshold", sp.policy.guess_threshold,
                       "Posterior mass at which the asker guesses");
  selfplay->add_flag("--json", sp_json, "Emit the report as JSON");

  // kb
  auto* kb = app.add_subcommand("kb", "Knowledge base tools");
  kb->require_subcommand(1);
  std::string kb_path;
  bool kb_json = false;
  auto* kb_validate = kb->add_subcommand("validate", "Check every KB invariant");
  kb_validate->add_option("path", kb_path, "KB file")->required();
  auto* kb_stats = kb->add_subcommand("stats", "Print KB size and answer marginals");
  kb_stats->add_option("path", kb_path, "KB file")->required();
  kb_stats->add_flag("--json", kb_json, "Emit JSON");

  // serve
  Common serve_common;
  ServiceConfig sc;
  ServerConfig server_config;
  int idle_secs = 120;
  int max_timeouts = 3;
  std::string serve_order = "agent-asks,agent-answers";
  std::string transcripts_dir = "transcripts";
  std::string static_dir;
  auto* serve = app.add_subcommand("serve", "Run the websocket chat service");
  add_common(serve, serve_common, true);
  serve->add_option("--port", server_config.port, "Listen port")->envname("EMO20Q_PORT");
  serve->add_option("--address", server_config.address, "Listen address");
  serve->add_option("--transcripts-dir", transcripts_dir, "Directory for JSONL transcripts")
      ->envname("EMO20Q_TRANSCRIPTS_DIR");
  serve->add_option("--idle-timeout-secs", idle_secs, "Idle time before a re-prompt")
      ->check(CLI::PositiveNumber);
  serve->add_option("--max-timeouts", max_timeouts, "Consecutive timeouts before giving up (0: never)");
  serve->add_option("--master-seed", sc.master_seed, "Seed all session seeds derive from")
      ->envname("EMO20Q_MASTER_SEED");
  serve->add_option("--phase-order", serve_order, "e.g. agent-asks,agent-answers");
  serve->add_option("--static-dir", static_dir, "Web UI assets served at /");
  serve->add_option("--threads", server_config.threads, "I/O threads");

  // replay
  Common replay_common;
  std::uint64_t replay_seed = 0;
  std::string replay_order = "agent-asks,agent-answers";
  std::string events_path;
  auto* replay_cmd = app.add_subcommand("replay", "Fold an event list through the dialog machine");
  add_common(replay_cmd, replay_common, false);
  replay_cmd->add_option("--seed", replay_seed, "Machine seed");
  replay_cmd->add_option("--phase-order", replay_order, "e.g. agent-asks,agent-answers");
  replay_cmd->add_option("events", events_path, "JSON event list")->required();

  // transcript verify
  Common tr_common;
  std::string transcript_path;
  auto* transcript = app.add_subcommand("transcript", "Transcript tools");
  transcript->require_subcommand(1);
  auto* tr_verify = transcript->add_subcommand("verify", "Check that replay reproduces the agent lines");
  add_common(tr_verify, tr_common, false);
  tr_verify->add_option("path", transcript_path, "Transcript .jsonl file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*play) return run_play(play_common, role, play_seed);
    if (*selfplay) return run_selfplay(sp_common, sp, sp_json);
    if (*kb_validate) return run_kb_validate(kb_path);
    if (*kb_stats) return run_kb_stats(kb_path, kb_json);
    if (*serve) {
      sc.transcripts_dir = transcripts_dir;
      sc.idle_timeout = std::chrono::seconds(idle_secs);
      sc.dialog.phase_order = parse_phase_order(serve_order);
      sc.dialog.max_timeouts = max_timeouts;
      server_config.static_dir = static_dir;
      return run_serve(serve_common, std::move(sc), server_config);
    }
    if (*replay_cmd) return run_replay(replay_common, replay_seed, replay_order, events_path);
    if (*tr_verify) return run_transcript_verify(tr_common, transcript_path);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
