#include "emo20q/core/knowledge_base.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "emo20q/core/error.hpp"

namespace emo20q {

using nlohmann::json;

KnowledgeBase::KnowledgeBase(Lexicon lexicon, std::vector<CanonicalQuestion> questions,
                             const std::vector<CountEntry>& counts, double alpha, int version)
    : lexicon_(std::move(lexicon)), questions_(std::move(questions)), alpha_(alpha),
      version_(version) {
  if (lexicon_.empty()) throw ValidationError("kb: emotions list is empty");
  if (version_ != kFormatVersion)
    throw ValidationError("kb: unsupported version " + std::to_string(version_));
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_))
    throw ValidationError("kb: alpha must be > 0 (got " + std::to_string(alpha_) + ")");

  for (std::size_t q = 0; q < questions_.size(); ++q) {
    const auto& cq = questions_[q];
    if (cq.id.empty()) throw ValidationError("kb: question #" + std::to_string(q) + " has empty id");
    if (cq.gloss.empty()) throw ValidationError("kb: question \"" + cq.id + "\" has empty gloss");
    if (!question_index_.emplace(cq.id, q).second)
      throw ValidationError("kb: duplicate question id \"" + cq.id + "\"");
  }

  counts_.assign(lexicon_.size() * questions_.size(), AnswerCounts{0, 0, 0});
  for (const auto& c : counts) {
    auto e = lexicon_.find(c.emotion);
    if (!e) throw ValidationError("kb: count references unknown emotion \"" + c.emotion + "\"");
    auto q = find_question(c.question);
    if (!q)
      throw ValidationError("kb: count references unknown question \"" + c.question + "\"");
    counts_[*e * questions_.size() + *q][index_of(c.answer)] += c.count;
  }

  conditionals_.resize(counts_.size() * kAnswerCount);
  log_conditionals_.resize(conditionals_.size());
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    const auto& c = counts_[i];
    const double total = static_cast<double>(c[0] + c[1] + c[2]) + 3.0 * alpha_;
    for (std::size_t a = 0; a < kAnswerCount; ++a) {
      const double p = (static_cast<double>(c[a]) + alpha_) / total;
      conditionals_[i * kAnswerCount + a] = p;
      log_conditionals_[i * kAnswerCount + a] = std::log(p);
    }
  }
}

std::optional<std::size_t> KnowledgeBase::find_question(std::string_view id) const {
  auto it = question_index_.find(std::string(id));
  if (it == question_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t KnowledgeBase::question_index(std::string_view id) const {
  if (auto q = find_question(id)) return *q;
  throw LookupError("unknown question id \"" + std::string(id) + "\"");
}

double answer_conditional(const KnowledgeBase& kb, std::string_view emotion,
                          std::string_view question_id, Answer a) {
  return kb.conditional(kb.lexicon().index_of(emotion), kb.question_index(question_id), a);
}

namespace {

int line_of_offset(std::string_view text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

template <typename T>
T require_field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw ValidationError(where + ": missing field \"" + key + "\"");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + ": field \"" + key + "\" has the wrong type");
  }
}

}  // namespace

KnowledgeBase parse_kb(std::string_view json_text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    const int line = line_of_offset(json_text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError(std::string(source) + ":" + std::to_string(line) + ": " + e.what(), line);
  }
  if (!doc.is_object()) throw ValidationError(std::string(source) + ": top level must be an object");

  const std::string where(source);
  const int version = require_field<int>(doc, "version", where);
  const double alpha = require_field<double>(doc, "alpha", where);
  auto words = require_field<std::vector<std::string>>(doc, "emotions", where);

  std::vector<CanonicalQuestion> questions;
  const auto& qs = doc.contains("questions") ? doc.at("questions") : json::array();
  if (!qs.is_array()) throw ValidationError(where + ": \"questions\" must be an array");
  for (const auto& q : qs) {
    CanonicalQuestion cq;
    cq.id = require_field<std::string>(q, "id", where + ": question");
    cq.gloss = require_field<std::string>(q, "gloss", where + ": question \"" + cq.id + "\"");
    if (q.contains("paraphrases"))
      cq.paraphrases =
          require_field<std::vector<std::string>>(q, "paraphrases", where + ": question \"" + cq.id + "\"");
    questions.push_back(std::move(cq));
  }

  std::vector<CountEntry> counts;
  if (doc.contains("counts")) {
    const auto& cs = doc.at("counts");
    if (!cs.is_array()) throw ValidationError(where + ": \"counts\" must be an array");
    for (const auto& c : cs) {
      CountEntry entry;
      entry.emotion = require_field<std::string>(c, "emotion", where + ": count");
      entry.question = require_field<std::string>(c, "question", where + ": count");
      const auto answer = require_field<std::string>(c, "answer", where + ": count");
      auto a = parse_answer(answer);
      if (!a || answer == "maybe")
        throw ValidationError(where + ": count has unknown answer \"" + answer + "\"");
      entry.answer = *a;
      const auto n = require_field<long long>(c, "count", where + ": count");
      if (n < 0)
        throw ValidationError(where + ": negative count for (" + entry.emotion + ", " +
                              entry.question + ", " + answer + ")");
      entry.count = static_cast<std::uint64_t>(n);
      counts.push_back(std::move(entry));
    }
  }

  try {
    return KnowledgeBase(Lexicon(std::move(words)), std::move(questions), counts, alpha, version);
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

KnowledgeBase load_kb(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open knowledge base " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_kb(buf.str(), path.string());
}

std::string dump_kb(const KnowledgeBase& kb) {
  json questions = json::array();
  for (const auto& q : kb.questions())
    questions.push_back({{"id", q.id}, {"gloss", q.gloss}, {"paraphrases", q.paraphrases}});
  json counts = json::array();
  for (std::size_t e = 0; e < kb.lexicon().size(); ++e)
    for (std::size_t q = 0; q < kb.question_count(); ++q)
      for (Answer a : kAllAnswers)
        if (auto n = kb.count(e, q, a))
          counts.push_back({{"emotion", kb.lexicon().word(e)},
                            {"question", kb.question(q).id},
                            {"answer", to_string(a)},
                            {"count", n}});
  json doc = {{"version", kb.version()},
              {"alpha", kb.alpha()},
              {"emotions", kb.lexicon().words()},
              {"questions", questions},
              {"counts", counts}};
  return doc.dump(2);
}

}  // namespace emo20q
