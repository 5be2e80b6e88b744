#include "emo20q/nlu.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "emo20q/core/error.hpp"

namespace emo20q {

namespace {

// Never treated as stopwords: dropping them would flip the meaning of a question.
const std::set<std::string, std::less<>> kNegations = {"no", "not"};

// Leading token runs that introduce a guess. Longest prefixes first.
const std::vector<Tokens> kGuessPrefixes = {
    {"is", "the", "emotion"}, {"is", "your", "emotion"}, {"my", "guess", "is"},
    {"are", "you", "feeling"}, {"is", "it"}, {"i", "guess"}, {"it", "is"},
};

bool contains_run(const Tokens& tokens, const Tokens& run) {
  if (run.empty() || run.size() > tokens.size()) return false;
  return std::search(tokens.begin(), tokens.end(), run.begin(), run.end()) != tokens.end();
}

bool any_cue(const Tokens& tokens, const std::vector<Tokens>& cues) {
  return std::any_of(cues.begin(), cues.end(),
                     [&](const Tokens& cue) { return contains_run(tokens, cue); });
}

std::string join(Tokens::const_iterator first, Tokens::const_iterator last) {
  std::string out;
  for (auto it = first; it != last; ++it) {
    if (!out.empty()) out += ' ';
    out += *it;
  }
  return out;
}

std::vector<Tokens> cue_list(const nlohmann::json& doc, const char* key) {
  std::vector<Tokens> out;
  if (!doc.contains(key)) return out;
  for (const auto& phrase : doc.at(key)) {
    auto t = Nlu::tokenize(phrase.get<std::string>());
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

}  // namespace

Nlu::Nlu(std::unordered_set<std::string> stopwords, CueLexicon cues, double match_threshold)
    : stopwords_(std::move(stopwords)), cues_(std::move(cues)), threshold_(match_threshold) {
  for (const auto& n : kNegations) stopwords_.erase(n);
  if (!(threshold_ >= 0.0 && threshold_ <= 1.0))
    throw ValidationError("match threshold must lie in [0, 1]");
}

Nlu Nlu::load(const std::filesystem::path& dir, double match_threshold) {
  std::unordered_set<std::string> stopwords;
  {
    std::ifstream in(dir / "stopwords.txt");
    if (!in) throw Error("cannot open " + (dir / "stopwords.txt").string());
    std::string line;
    while (std::getline(in, line)) {
      for (auto& t : tokenize(line)) stopwords.insert(std::move(t));
    }
  }
  CueLexicon cues;
  {
    const auto path = dir / "cues.json";
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string() + ": " + e.what(), 0);
    }
    cues.yes = cue_list(doc, "yes");
    cues.no = cue_list(doc, "no");
    cues.other = cue_list(doc, "other");
  }
  return Nlu(std::move(stopwords), std::move(cues), match_threshold);
}

Tokens Nlu::tokenize(std::string_view s) {
  Tokens out;
  std::string cur;
  for (unsigned char c : s) {
    if (c == '\'') continue;  // "don't" -> "dont"
    if (std::isalnum(c) || c >= 0x80) {
      cur += static_cast<char>(std::tolower(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

Tokens Nlu::normalize_text(std::string_view s) const {
  Tokens t = tokenize(s);
  std::erase_if(t, [&](const std::string& w) { return stopwords_.contains(w); });
  return t;
}

Answer Nlu::bucket_answer(std::string_view s) const {
  const Tokens t = tokenize(s);
  if (any_cue(t, cues_.other)) return Answer::Other;
  if (any_cue(t, cues_.no)) return Answer::No;
  if (any_cue(t, cues_.yes)) return Answer::Yes;
  return Answer::Other;
}

double jaccard(const Tokens& a, const Tokens& b) {
  std::set<std::string_view> sa(a.begin(), a.end());
  std::set<std::string_view> sb(b.begin(), b.end());
  if (sa.empty() && sb.empty()) return 0.0;
  std::size_t inter = 0;
  for (auto w : sa) inter += sb.count(w);
  const std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

MatchResult Nlu::match_question(std::string_view s, const KnowledgeBase& kb) const {
  const Tokens query = normalize_text(s);
  MatchResult best;
  const std::string* best_id = nullptr;
  for (const auto& q : kb.questions()) {
    auto consider = [&](const std::string& surface) {
      const double score = jaccard(query, normalize_text(surface));
      if (best_id == nullptr || score > best.score ||
          (score == best.score && q.id < *best_id)) {
        best.score = score;
        best.matched_surface = surface;
        best_id = &q.id;
      }
    };
    consider(q.gloss);
    for (const auto& p : q.paraphrases) consider(p);
  }
  if (best_id != nullptr && best.score >= threshold_) best.question_id = *best_id;
  return best;
}

std::optional<std::string> Nlu::detect_guess(std::string_view s, const Lexicon& lexicon) const {
  const Tokens t = tokenize(s);
  if (t.empty()) return std::nullopt;

  auto slot = [&](Tokens::const_iterator first) -> std::optional<std::string> {
    if (first == t.end()) return std::nullopt;
    auto w = join(first, t.end());
    if (lexicon.contains(w)) return w;
    return std::nullopt;
  };

  // Bare "X" or "X?"
  if (auto w = slot(t.begin())) return w;
  for (const auto& prefix : kGuessPrefixes) {
    if (t.size() <= prefix.size() || !std::equal(prefix.begin(), prefix.end(), t.begin()))
      continue;
    auto rest = t.begin() + static_cast<std::ptrdiff_t>(prefix.size());
    if (auto w = slot(rest)) return w;
    // Optional article: "is it a fear?"
    if (*rest == "a" || *rest == "an" || *rest == "the")
      if (auto w = slot(rest + 1)) return w;
  }
  return std::nullopt;
}

}  // namespace emo20q
