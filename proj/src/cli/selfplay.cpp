#include "emo20q/selfplay.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "emo20q/core/error.hpp"

namespace emo20q {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer over master + golden-ratio stride
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

NoisyClassifier::NoisyClassifier(const AnswerClassifier& inner, double noise, std::uint64_t seed)
    : inner_(inner), noise_(noise), gen_(seed) {
  if (!(noise >= 0.0 && noise <= 1.0)) throw ValidationError("noise must lie in [0, 1]");
}

Answer NoisyClassifier::classify(std::string_view emotion, std::string_view question) const {
  const Answer a = inner_.classify(emotion, question);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(gen_) >= noise_) return a;
  std::uniform_int_distribution<int> pick(1, 2);
  return kAllAnswers[(index_of(a) + static_cast<std::size_t>(pick(gen_))) % kAnswerCount];
}

GameOutcome play_selfplay_game(const KnowledgeBase& kb, const Nlu& nlu, const std::string& secret,
                               double noise, std::uint64_t seed, const AskerPolicy& policy,
                               const AnswererReplies& replies) {
  // Borrowed for the duration of the game.
  auto kb_ref = std::shared_ptr<const KnowledgeBase>(&kb, [](const KnowledgeBase*) {});
  auto nlu_ref = std::shared_ptr<const Nlu>(&nlu, [](const Nlu*) {});
  const KbClassifier truth(kb_ref, nlu_ref);
  const NoisyClassifier model(truth, noise, seed);

  GameOutcome out;
  out.secret = secret;
  AskerState asker = new_asker(kb);
  AnswererState answerer = new_answerer(secret);

  while (asker.status == AskerStatus::Playing && answerer.status == AnswererStatus::Playing) {
    const AskerAction action = decide_action(asker, kb, policy);
    if (std::holds_alternative<Concede>(action)) {
      asker = observe_answer(asker, kb, action, Answer::Other);
      break;
    }
    const std::string text = std::holds_alternative<AskQuestion>(action)
                                 ? kb.question(kb.question_index(std::get<AskQuestion>(action).question_id)).gloss
                                 : "is it " + std::get<MakeGuess>(action).emotion + "?";
    RespondResult r = respond(answerer, kb, nlu, model, text, replies);
    answerer = std::move(r.state);
    std::string reply;
    for (const auto& line : r.lines) reply += (reply.empty() ? "" : " ") + line;
    out.exchanges.emplace_back(text, reply);
    asker = observe(asker, kb, nlu, action, reply, text);
  }
  out.won = asker.status == AskerStatus::Won;
  out.turns = asker.turn;
  out.asker_history = asker.history;
  return out;
}

SelfPlayReport run_selfplay(const KnowledgeBase& kb, const Nlu& nlu, const SelfPlayOptions& opts) {
  if (!(opts.noise >= 0.0 && opts.noise <= 1.0)) throw ValidationError("noise must lie in [0, 1]");
  if (opts.games < 0) throw ValidationError("games must be non-negative");

  std::vector<GameOutcome> outcomes(static_cast<std::size_t>(opts.games));
  auto play = [&](std::size_t i) {
    const std::uint64_t game_seed = derive_seed(opts.seed, i);
    outcomes[i] = play_selfplay_game(kb, nlu, pick_secret(kb.lexicon(), game_seed), opts.noise,
                                     derive_seed(game_seed, 1), opts.policy);
    outcomes[i].index = i;
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(outcomes.size())));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < outcomes.size(); ++i) play(i);
  } else {
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        for (std::size_t i = w; i < outcomes.size(); i += jobs) play(i);
      });
    for (auto& t : workers) t.join();
  }

  SelfPlayReport r;
  r.games = opts.games;
  r.noise = opts.noise;
  r.seed = opts.seed;
  for (const auto& w : kb.lexicon()) r.per_emotion[w];
  long total_turns = 0;
  for (const auto& o : outcomes) {
    auto& tally = r.per_emotion[o.secret];
    ++tally.games;
    if (o.won) {
      ++tally.wins;
      ++r.wins;
      total_turns += o.turns;
    }
  }
  r.mean_turns_to_win = r.wins > 0 ? static_cast<double>(total_turns) / r.wins : 0.0;

  const double n = static_cast<double>(kb.lexicon().size());
  r.baseline_win_rate = std::min(1.0, kTurnBudget / n);
  const double b = r.baseline_win_rate;
  if (r.games > 0 && b > 0.0 && b < 1.0)
    r.baseline_z = (r.win_rate() - b) / std::sqrt(b * (1.0 - b) / r.games);
  return r;
}

std::string report_to_json(const SelfPlayReport& r) {
  nlohmann::ordered_json per = nlohmann::ordered_json::object();
  for (const auto& [word, t] : r.per_emotion) per[word] = {{"games", t.games}, {"wins", t.wins}};
  nlohmann::ordered_json j = {{"games", r.games},
                              {"wins", r.wins},
                              {"win_rate", r.win_rate()},
                              {"mean_turns_to_win", r.mean_turns_to_win},
                              {"noise", r.noise},
                              {"seed", r.seed},
                              {"baseline_win_rate", r.baseline_win_rate},
                              {"baseline_z", r.baseline_z},
                              {"per_emotion", per}};
  return j.dump(2) + "\n";
}

std::string report_to_text(const SelfPlayReport& r) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  out << "games              " << r.games << "\n"
      << "wins               " << r.wins << "\n"
      << "win rate           " << r.win_rate() << "\n"
      << "mean turns to win  " << r.mean_turns_to_win << "\n"
      << "noise              " << r.noise << "\n"
      << "seed               " << r.seed << "\n"
      << "guess-only rate    " << r.baseline_win_rate << "  (z = " << r.baseline_z << ")\n\n";
  std::size_t width = 7;
  for (const auto& [word, t] : r.per_emotion) width = std::max(width, word.size());
  out << std::left << std::setw(static_cast<int>(width)) << "emotion" << "  games  wins\n";
  for (const auto& [word, t] : r.per_emotion) {
    if (t.games == 0) continue;
    out << std::left << std::setw(static_cast<int>(width)) << word << "  " << std::right
        << std::setw(5) << t.games << "  " << std::setw(4) << t.wins << "\n";
  }
  return out.str();
}

}  // namespace emo20q
