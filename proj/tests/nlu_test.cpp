#include <gtest/gtest.h>

#include <random>

#include "emo20q/nlu.hpp"
#include "testing/fixtures.hpp"

using namespace emo20q;
namespace fx = emo20q::testing;

namespace {

const Nlu& nlu() { return *fx::shipped_nlu(); }

std::string random_text(std::mt19937_64& gen, std::size_t max_len) {
  static const std::string alphabet =
      "abcdefghijklmnopqrstuvwxyz ABCXYZ0123456789 !?.,'\"-_\t\n;:()[]{}<>/\\@#$%^&*~`|+=";
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> byte(0, 255);
  std::string s;
  const auto n = len(gen);
  for (std::size_t i = 0; i < n; ++i)
    s += (i % 17 == 16) ? static_cast<char>(byte(gen)) : alphabet[pick(gen)];
  return s;
}

std::string random_cue_sentence(std::mt19937_64& gen) {
  static const std::vector<std::string> words = {
      "yes", "no", "not", "maybe", "sure", "nope", "sort", "of", "it", "depends", "really",
      "i", "think", "so", "never", "sometimes", "yeah", "definitely", "hmm", "well"};
  std::uniform_int_distribution<std::size_t> len(0, 6), pick(0, words.size() - 1);
  std::string s;
  for (std::size_t i = 0, n = len(gen); i < n; ++i) s += words[pick(gen)] + (i % 2 ? ", " : " ");
  return s;
}

}  // namespace

TEST(Tokenize, LowercasesAndStripsPunctuation) {
  EXPECT_EQ(Nlu::tokenize("Hello, WORLD!! it's"), (Tokens{"hello", "world", "its"}));
  EXPECT_TRUE(Nlu::tokenize("").empty());
  EXPECT_TRUE(Nlu::tokenize("?!... ").empty());
}

TEST(NormalizeText, Examples) {
  EXPECT_EQ(nlu().normalize_text("Is it a POSITIVE emotion?"), (Tokens{"positive", "emotion"}));
  EXPECT_TRUE(nlu().normalize_text("").empty());
  EXPECT_EQ(nlu().normalize_text("no!!!"), (Tokens{"no"}));
}

TEST(NormalizeText, NegationsSurviveEvenIfListedAsStopwords) {
  Nlu custom({"no", "not", "the"}, {});
  EXPECT_EQ(custom.normalize_text("not the no"), (Tokens{"not", "no"}));
}

TEST(BucketAnswer, Examples) {
  EXPECT_EQ(nlu().bucket_answer("yes"), Answer::Yes);
  EXPECT_EQ(nlu().bucket_answer("nope, not at all"), Answer::No);
  EXPECT_EQ(nlu().bucket_answer("sort of, it depends"), Answer::Other);
}

TEST(BucketAnswer, NoCuesBeatYesCues) {
  EXPECT_EQ(nlu().bucket_answer("yes but not really"), Answer::No);
  EXPECT_EQ(nlu().bucket_answer("Yes... no."), Answer::No);
}

TEST(BucketAnswer, MoreCases) {
  EXPECT_EQ(nlu().bucket_answer("YES!"), Answer::Yes);
  EXPECT_EQ(nlu().bucket_answer("I think so"), Answer::Yes);
  EXPECT_EQ(nlu().bucket_answer("of course"), Answer::Yes);
  EXPECT_EQ(nlu().bucket_answer("No."), Answer::No);
  EXPECT_EQ(nlu().bucket_answer("it isn't"), Answer::No);
  EXPECT_EQ(nlu().bucket_answer(""), Answer::Other);
  EXPECT_EQ(nlu().bucket_answer("purple elephants"), Answer::Other);
  EXPECT_EQ(nlu().bucket_answer("maybe"), Answer::Other);
  EXPECT_EQ(nlu().bucket_answer("I'm not sure"), Answer::Other);
}

TEST(BucketAnswer, AnswererSurfaceRepliesRoundTrip) {
  AnswererReplies r;
  EXPECT_EQ(nlu().bucket_answer(r.yes), Answer::Yes);
  EXPECT_EQ(nlu().bucket_answer(r.no), Answer::No);
  EXPECT_EQ(nlu().bucket_answer(r.other), Answer::Other);
}

TEST(BucketAnswer, CueWithinWordDoesNotFire) {
  // "know" contains "no" but is not the token "no".
  EXPECT_EQ(nlu().bucket_answer("you know"), Answer::Other);
  EXPECT_EQ(nlu().bucket_answer("yesterday"), Answer::Other);
}

TEST(BucketAnswer, TotalOverRandomStrings) {
  std::mt19937_64 gen(1234);
  for (int i = 0; i < 5000; ++i) {
    const auto s = random_text(gen, 60);
    Answer a{};
    ASSERT_NO_THROW(a = nlu().bucket_answer(s)) << s;
    EXPECT_TRUE(a == Answer::Yes || a == Answer::No || a == Answer::Other);
    EXPECT_EQ(a, nlu().bucket_answer(s));
  }
}

// Independent restatement of the cascade over single-token cues.
TEST(BucketAnswer, AgreesWithSetOracleOnCueSentences) {
  std::mt19937_64 gen(77);
  const std::set<std::string> no = {"no", "nope", "not", "never"};
  const std::set<std::string> yes = {"yes", "sure", "yeah", "definitely"};
  const std::set<std::string> hedge = {"maybe", "sometimes", "depends"};
  for (int i = 0; i < 3000; ++i) {
    const auto s = random_cue_sentence(gen);
    const auto toks = Nlu::tokenize(s);
    bool has_no = false, has_yes = false, has_hedge = false;
    for (std::size_t k = 0; k < toks.size(); ++k) {
      has_no |= no.count(toks[k]) > 0;
      has_yes |= yes.count(toks[k]) > 0;
      has_hedge |= hedge.count(toks[k]) > 0;
      if (k + 1 < toks.size()) {
        has_yes |= k > 0 && toks[k - 1] == "i" && toks[k] == "think" && toks[k + 1] == "so";
        has_hedge |= toks[k] == "sort" && toks[k + 1] == "of";
        has_hedge |= toks[k] == "not" && toks[k + 1] == "sure";
      }
    }
    Answer expected = has_hedge ? Answer::Other
                      : has_no  ? Answer::No
                      : has_yes ? Answer::Yes
                                : Answer::Other;
    EXPECT_EQ(nlu().bucket_answer(s), expected) << s;
  }
}

TEST(Jaccard, Basics) {
  EXPECT_DOUBLE_EQ(jaccard({"a", "b"}, {"a", "b"}), 1.0);
  EXPECT_DOUBLE_EQ(jaccard({"a"}, {"b"}), 0.0);
  EXPECT_DOUBLE_EQ(jaccard({}, {}), 0.0);
  EXPECT_DOUBLE_EQ(jaccard({"a", "a", "b"}, {"a"}), 0.5);
}

TEST(MatchQuestion, Examples) {
  auto m = nlu().match_question("is it a positive emotion?", *fx::seed_kb());
  ASSERT_TRUE(m.question_id.has_value());
  EXPECT_EQ(*m.question_id, "valence.positive");
  EXPECT_DOUBLE_EQ(m.score, 1.0);

  auto off = nlu().match_question("do penguins dream?", *fx::small_kb());
  EXPECT_FALSE(off.question_id.has_value());
  EXPECT_LT(off.score, 0.5);

  auto half = nlu().match_question("is it positive?", *fx::small_kb());
  ASSERT_TRUE(half.question_id.has_value());
  EXPECT_EQ(*half.question_id, "valence.positive");
  EXPECT_DOUBLE_EQ(half.score, 0.5);
}

TEST(MatchQuestion, UsesParaphrases) {
  auto m = nlu().match_question("Does it feel bad?", *fx::small_kb());
  ASSERT_TRUE(m.question_id.has_value());
  EXPECT_EQ(*m.question_id, "valence.negative");
  EXPECT_EQ(m.matched_surface, "does it feel bad");
}

TEST(MatchQuestion, TiesGoToSmallestId) {
  // "emotion" overlaps both valence glosses equally.
  auto m = nlu().match_question("negative positive emotion", *fx::small_kb());
  // {negative, positive, emotion} vs {positive, emotion} and {negative, emotion}: both 2/3
  ASSERT_TRUE(m.question_id.has_value());
  EXPECT_EQ(*m.question_id, "valence.negative");
  EXPECT_NEAR(m.score, 2.0 / 3.0, 1e-12);
}

TEST(MatchQuestion, ThresholdIsConfigurable) {
  Nlu strict = Nlu::load(fx::data_dir() / "nlu", 0.9);
  EXPECT_FALSE(strict.match_question("is it positive?", *fx::small_kb()).question_id.has_value());
}

// Brute-force recomputation over every gloss and paraphrase.
TEST(MatchQuestion, AgreesWithBruteForceAndStaysInRange) {
  const auto& kb = *fx::seed_kb();
  std::mt19937_64 gen(5);
  std::vector<std::string> vocab;
  for (auto& q : kb.questions())
    for (auto& t : Nlu::tokenize(q.gloss)) vocab.push_back(t);
  vocab.push_back("penguin");
  vocab.push_back("dream");
  std::uniform_int_distribution<std::size_t> len(0, 7), pick(0, vocab.size() - 1);
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    for (std::size_t k = 0, n = len(gen); k < n; ++k) s += vocab[pick(gen)] + " ";
    const auto m = nlu().match_question(s, kb);
    EXPECT_GE(m.score, 0.0);
    EXPECT_LE(m.score, 1.0);

    const auto toks = nlu().normalize_text(s);
    double best = -1;
    std::string best_id;
    for (auto& q : kb.questions()) {
      std::vector<std::string> surfaces = q.paraphrases;
      surfaces.push_back(q.gloss);
      for (auto& surf : surfaces) {
        const double sc = jaccard(toks, nlu().normalize_text(surf));
        if (sc > best || (sc == best && q.id < best_id)) {
          best = sc;
          best_id = q.id;
        }
      }
    }
    EXPECT_DOUBLE_EQ(m.score, best) << s;
    EXPECT_EQ(m.question_id.has_value(), best >= 0.5) << s;
    if (m.question_id) EXPECT_EQ(*m.question_id, best_id) << s;
  }
}

TEST(MatchQuestion, Deterministic) {
  const auto a = nlu().match_question("is it felt in the body", *fx::seed_kb());
  const auto b = nlu().match_question("is it felt in the body", *fx::seed_kb());
  EXPECT_EQ(a.question_id, b.question_id);
  EXPECT_EQ(a.score, b.score);
  EXPECT_EQ(a.matched_surface, b.matched_surface);
}

TEST(DetectGuess, Examples) {
  const auto& lex = fx::small_kb()->lexicon();
  EXPECT_EQ(nlu().detect_guess("is it happiness?", lex), "happiness");
  EXPECT_FALSE(nlu().detect_guess("is it a positive emotion?", lex).has_value());
  EXPECT_FALSE(nlu().detect_guess("", lex).has_value());
}

TEST(DetectGuess, Templates) {
  const auto& lex = fx::small_kb()->lexicon();
  EXPECT_EQ(nlu().detect_guess("Anger?", lex), "anger");
  EXPECT_EQ(nlu().detect_guess("sadness", lex), "sadness");
  EXPECT_EQ(nlu().detect_guess("Is the emotion anger?", lex), "anger");
  EXPECT_EQ(nlu().detect_guess("my guess is sadness", lex), "sadness");
  EXPECT_FALSE(nlu().detect_guess("is it like anger but quieter?", lex).has_value());
  EXPECT_FALSE(nlu().detect_guess("is it related to anger?", lex).has_value());
}
