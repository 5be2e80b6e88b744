#include <gtest/gtest.h>

#include <random>

#include "emo20q/asker.hpp"
#include "emo20q/selfplay.hpp"
#include "testing/fixtures.hpp"

using namespace emo20q;
namespace fx = emo20q::testing;

namespace {

// Four emotions; "split" is answered Yes by a,b and No by c,d. "flat" has the
// same counts everywhere. "split2" is a mirror of "split" under a relabelling
// that keeps a uniform posterior symmetric, so both have identical gain.
KnowledgeBase four_kb(double alpha = 1e-6) {
  std::vector<CanonicalQuestion> qs = {
      {"b.split", "is it b split?", {}}, {"a.split", "is it a split?", {}}, {"flat", "is it flat?", {}}};
  std::vector<CountEntry> counts;
  const std::vector<std::string> w = {"a", "b", "c", "d"};
  for (int i = 0; i < 4; ++i) {
    counts.push_back({w[i], "b.split", i < 2 ? Answer::Yes : Answer::No, 10});
    counts.push_back({w[i], "a.split", i % 2 == 0 ? Answer::Yes : Answer::No, 10});
    counts.push_back({w[i], "flat", Answer::Yes, 3});
    counts.push_back({w[i], "flat", Answer::No, 3});
  }
  return KnowledgeBase(Lexicon(w), qs, counts, alpha);
}

AskerState with_posterior(const KnowledgeBase& kb, std::vector<double> w) {
  auto st = new_asker(kb);
  st.posterior = Posterior::from_weights(w);
  return st;
}

}  // namespace

TEST(InformationGain, FlatQuestionIsZero) {
  auto kb = four_kb();
  auto p = uniform_prior(kb.lexicon());
  EXPECT_NEAR(expected_information_gain(p, kb, *kb.find_question("flat")), 0.0, 1e-12);
}

TEST(InformationGain, PerfectSplitIsOneBit) {
  auto kb = four_kb(1e-6);
  auto p = uniform_prior(kb.lexicon());
  EXPECT_NEAR(expected_information_gain(p, kb, *kb.find_question("b.split")), 1.0, 1e-3);
}

TEST(InformationGain, MatchesMutualInformationOracle) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 300; ++trial) {
    auto kb = fx::random_kb(gen, 5, 4, 10);
    auto p = uniform_prior(kb.lexicon());
    std::uniform_int_distribution<std::size_t> q(0, 3);
    std::uniform_int_distribution<int> a(0, 2);
    for (int k = 0; k < trial % 4; ++k) p = bayes_update(p, kb, q(gen), static_cast<Answer>(a(gen)));
    for (std::size_t qi = 0; qi < 4; ++qi) {
      const double ig = expected_information_gain(p, kb, qi);
      EXPECT_GE(ig, 0.0);
      EXPECT_NEAR(ig, fx::oracle_information_gain(kb, p.probs(), qi), 1e-9);
    }
  }
}

TEST(SelectQuestion, SplitBeatsFlat) {
  auto kb = four_kb();
  auto st = new_asker(kb);
  st.asked = {"a.split"};
  EXPECT_EQ(select_question(st, kb), "b.split");
}

TEST(SelectQuestion, NoneWhenAllAsked) {
  auto kb = four_kb();
  auto st = new_asker(kb);
  st.asked = {"a.split", "b.split", "flat"};
  EXPECT_FALSE(select_question(st, kb).has_value());
}

TEST(SelectQuestion, EqualGainGoesToSmallerId) {
  auto kb = four_kb();
  auto st = new_asker(kb);
  const double ga = expected_information_gain(st.posterior, kb, *kb.find_question("a.split"));
  const double gb = expected_information_gain(st.posterior, kb, *kb.find_question("b.split"));
  ASSERT_NEAR(ga, gb, 1e-12);
  EXPECT_EQ(select_question(st, kb), "a.split");
}

TEST(DecideAction, ConfidentPosteriorGuesses) {
  std::vector<CountEntry> counts = {{"first", "q", Answer::Yes, 5}, {"second", "q", Answer::No, 5}};
  KnowledgeBase kb(Lexicon({"first", "second"}), {{"q", "q?", {}}}, counts, 1.0);
  auto st = with_posterior(kb, {0.9, 0.1});
  st.turn = 2;  // two consumed, playing turn 3
  EXPECT_EQ(decide_action(st, kb), AskerAction(MakeGuess{"first"}));
}

TEST(DecideAction, UniformOverThirtyTwoAsks) {
  auto kb = fx::separable_kb();
  auto st = new_asker(kb);
  auto act = decide_action(st, kb);
  ASSERT_TRUE(std::holds_alternative<AskQuestion>(act));
  EXPECT_EQ(std::get<AskQuestion>(act).question_id.rfind("group.", 0), 0u);
}

TEST(DecideAction, BudgetExhaustedConcedes) {
  auto kb = fx::separable_kb();
  auto st = new_asker(kb);
  st.turn = kTurnBudget;
  EXPECT_EQ(decide_action(st, kb), AskerAction(Concede{}));
}

TEST(DecideAction, GuardTurnsForceGuess) {
  auto kb = fx::separable_kb();
  auto st = new_asker(kb);
  st.turn = kTurnBudget - 2;
  EXPECT_TRUE(std::holds_alternative<MakeGuess>(decide_action(st, kb)));
  st.turn = kTurnBudget - 3;
  EXPECT_TRUE(std::holds_alternative<AskQuestion>(decide_action(st, kb)));
}

TEST(DecideAction, NoQuestionsLeftGuesses) {
  auto kb = four_kb();
  auto st = new_asker(kb);
  st.asked = {"a.split", "b.split", "flat"};
  EXPECT_EQ(decide_action(st, kb), AskerAction(MakeGuess{"a"}));
}

TEST(DecideAction, AllRejectedConcedes) {
  auto kb = four_kb();
  auto st = new_asker(kb);
  st.rejected_guesses = {"a", "b", "c", "d"};
  EXPECT_EQ(decide_action(st, kb), AskerAction(Concede{}));
}

TEST(DecideAction, ThresholdIsConfigurable) {
  std::vector<CountEntry> counts = {{"first", "q", Answer::Yes, 5}};
  KnowledgeBase kb(Lexicon({"first", "second"}), {{"q", "q?", {}}}, counts, 1.0);
  auto st = with_posterior(kb, {0.6, 0.4});
  EXPECT_TRUE(std::holds_alternative<MakeGuess>(decide_action(st, kb)));
  AskerPolicy cautious;
  cautious.guess_threshold = 0.95;
  EXPECT_TRUE(std::holds_alternative<AskQuestion>(decide_action(st, kb, cautious)));
}

TEST(DecideAction, Deterministic) {
  auto kb = *fx::seed_kb();
  auto st = new_asker(kb);
  for (int i = 0; i < 5; ++i) {
    auto a = decide_action(st, kb);
    EXPECT_EQ(a, decide_action(st, kb));
    st = observe_answer(st, kb, a, i % 2 ? Answer::Yes : Answer::No);
  }
}

TEST(Observe, QuestionYesUpdatesPosterior) {
  auto kb = four_kb();
  const auto& nlu = *fx::shipped_nlu();
  auto st = new_asker(kb);
  AskerAction act = AskQuestion{"b.split"};
  auto next = observe(st, kb, nlu, act, "yes", "Is it b split?");
  const auto expected = bayes_update(st.posterior, kb, "b.split", Answer::Yes);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(next.posterior.prob(i), expected.prob(i), 1e-15);
  EXPECT_EQ(next.turn, st.turn + 1);
  EXPECT_TRUE(next.asked.count("b.split"));
  ASSERT_EQ(next.history.size(), 1u);
  EXPECT_EQ(next.history[0].answer, Answer::Yes);
  EXPECT_EQ(next.history[0].turn, 1);
  EXPECT_EQ(next.history[0].raw_answer_text, "yes");
}

TEST(Observe, GuessNoZeroesOutWord) {
  auto kb = four_kb();
  auto st = new_asker(kb);
  auto next = observe_answer(st, kb, MakeGuess{"c"}, Answer::No);
  EXPECT_EQ(next.posterior.prob(2), 0.0);
  EXPECT_EQ(next.turn, 1);
  EXPECT_TRUE(next.rejected_guesses.count("c"));
  EXPECT_EQ(next.status, AskerStatus::Playing);
  ASSERT_EQ(next.history.size(), 1u);
  EXPECT_EQ(next.history[0].question_id, "guess:c");
}

TEST(Observe, GuessYesWins) {
  auto kb = four_kb();
  auto next = observe_answer(new_asker(kb), kb, MakeGuess{"c"}, Answer::Yes);
  EXPECT_EQ(next.status, AskerStatus::Won);
  EXPECT_EQ(next.turn, 1);
}

TEST(Observe, GuessOtherDoesNotUseATurn) {
  auto kb = four_kb();
  auto st = new_asker(kb);
  EXPECT_EQ(observe(st, kb, *fx::shipped_nlu(), MakeGuess{"c"}, "hmm, maybe"), st);
}

TEST(Observe, RejectedGuessesKeepZeroMass) {
  auto kb = four_kb();
  auto st = new_asker(kb);
  st = observe_answer(st, kb, MakeGuess{"a"}, Answer::No);
  st = observe_answer(st, kb, AskQuestion{"a.split"}, Answer::Yes);
  st = observe_answer(st, kb, AskQuestion{"b.split"}, Answer::Yes);
  EXPECT_EQ(st.posterior.prob(0), 0.0);
  // Only "a" fits both answers; the fallback spreads mass over the others.
  double s = 0;
  for (double v : st.posterior.probs()) s += v;
  EXPECT_NEAR(s, 1.0, 1e-9);
}

TEST(Observe, LastWordRejectedConcedes) {
  std::vector<CountEntry> counts;
  KnowledgeBase kb(Lexicon({"a", "b"}), {{"q", "q?", {}}}, counts, 1.0);
  auto st = new_asker(kb);
  st = observe_answer(st, kb, MakeGuess{"a"}, Answer::No);
  st = observe_answer(st, kb, MakeGuess{"b"}, Answer::No);
  EXPECT_EQ(st.status, AskerStatus::Conceded);
}

// Random play against random replies: the budget holds and every question or
// guess (except an Other on a guess) uses one turn.
TEST(AskerProperties, TurnAccountingUnderRandomReplies) {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<int> reply(0, 2);
  const auto& kb = *fx::seed_kb();
  for (int game = 0; game < 200; ++game) {
    auto st = new_asker(kb);
    for (int step = 0; step < 200 && st.status == AskerStatus::Playing; ++step) {
      const auto act = decide_action(st, kb);
      const auto ans = static_cast<Answer>(reply(gen));
      const auto next = observe_answer(st, kb, act, ans);
      int expected = st.turn;
      if (std::holds_alternative<AskQuestion>(act)) expected += 1;
      if (std::holds_alternative<MakeGuess>(act) && ans != Answer::Other) expected += 1;
      EXPECT_EQ(next.turn, expected);
      EXPECT_LE(next.turn, kTurnBudget);
      for (auto& w : next.rejected_guesses)
        EXPECT_EQ(next.posterior.prob(kb.lexicon().index_of(w)), 0.0);
      st = next;
    }
    EXPECT_NE(st.status, AskerStatus::Playing);
  }
}

TEST(AskerProperties, NeverReasksAQuestion) {
  const auto& kb = *fx::seed_kb();
  auto st = new_asker(kb);
  std::set<std::string> seen;
  while (st.status == AskerStatus::Playing) {
    const auto act = decide_action(st, kb);
    if (auto* q = std::get_if<AskQuestion>(&act)) EXPECT_TRUE(seen.insert(q->question_id).second);
    st = observe_answer(st, kb, act, std::holds_alternative<MakeGuess>(act) ? Answer::No : Answer::Other);
  }
}

TEST(AskerProperties, MonotoneEvidence) {
  auto kb = four_kb(1e-6);
  auto p = uniform_prior(kb.lexicon());
  double consistent = p.prob(0), inconsistent = p.prob(2);
  for (int i = 0; i < 5; ++i) {
    p = bayes_update(p, kb, "b.split", Answer::Yes);
    EXPECT_GE(p.prob(0), consistent);
    EXPECT_LE(p.prob(2), inconsistent);
    EXPECT_GE(p.prob(0), p.prob(2));
    consistent = p.prob(0);
    inconsistent = p.prob(2);
  }
}

TEST(AskerSelfPlay, SeparableKbIdentifiesEverySecret) {
  auto kb = fx::separable_kb();
  const auto& nlu = *fx::shipped_nlu();
  for (const auto& secret : kb.lexicon()) {
    auto g = play_selfplay_game(kb, nlu, secret, 0.0, 1);
    EXPECT_TRUE(g.won) << secret;
    EXPECT_LE(g.turns, kTurnBudget);
    // 5 partition questions then one guess.
    EXPECT_EQ(g.turns, 6) << secret;
    // Each reply matches what the asker's table predicts for the secret.
    const auto e = kb.lexicon().index_of(secret);
    for (auto& ev : g.asker_history) {
      if (ev.question_id.rfind("guess:", 0) == 0) continue;
      EXPECT_EQ(ev.answer, fx::oracle_kb_answer(kb, e, kb.question_index(ev.question_id)));
    }
  }
}
