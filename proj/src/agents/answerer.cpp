#include "emo20q/answerer.hpp"

#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <random>

#include <json.hpp>

#include "emo20q/core/error.hpp"

namespace emo20q {

Answer kb_answer(const KnowledgeBase& kb, const Nlu& nlu, std::string_view emotion,
                 std::string_view question) {
  const std::size_t e = kb.lexicon().index_of(emotion);
  const MatchResult m = nlu.match_question(question, kb);
  if (!m.question_id) return Answer::Other;
  const AnswerCounts& c = kb.counts(e, kb.question_index(*m.question_id));
  // Smoothed conditionals are monotone in the raw counts, so compare counts exactly.
  const auto top = std::max_element(c.begin(), c.end());
  if (std::count(c.begin(), c.end(), *top) > 1) return Answer::Other;
  return kAllAnswers[static_cast<std::size_t>(top - c.begin())];
}

std::string pick_secret(const Lexicon& lexicon, std::uint64_t seed) {
  if (lexicon.empty()) throw ValidationError("cannot pick a secret from an empty lexicon");
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::size_t> dist(0, lexicon.size() - 1);
  return lexicon.word(dist(gen));
}

AnswererState new_answerer(std::string secret) {
  AnswererState st;
  st.secret = std::move(secret);
  return st;
}

std::string fill_template(std::string_view tmpl,
                          const std::vector<std::pair<std::string, std::string>>& values) {
  std::string out(tmpl);
  for (const auto& [key, value] : values) {
    const std::string pattern = "{" + key + "}";
    for (auto pos = out.find(pattern); pos != std::string::npos;
         pos = out.find(pattern, pos + value.size()))
      out.replace(pos, pattern.size(), value);
  }
  return out;
}

std::string render_answer(Answer a, const AnswererReplies& replies) {
  switch (a) {
    case Answer::Yes:
      return replies.yes;
    case Answer::No:
      return replies.no;
    case Answer::Other:
      return replies.other;
  }
  return replies.other;
}

RespondResult respond(const AnswererState& st, const KnowledgeBase& kb, const Nlu& nlu,
                      const AnswerClassifier& classifier, std::string_view text,
                      const AnswererReplies& replies) {
  if (st.status != AnswererStatus::Playing || st.turn >= kTurnBudget)
    throw ProtocolError("answerer: game is already over");

  RespondResult r{st, {}, false};
  if (Nlu::tokenize(text).empty()) {
    r.lines.push_back(replies.empty_input);
    return r;
  }

  AnswererState& next = r.state;
  ++next.turn;
  r.consumed_turn = true;
  if (auto guess = nlu.detect_guess(text, kb.lexicon())) {
    const bool correct = *guess == st.secret;
    r.lines.push_back(correct ? fill_template(replies.correct_guess,
                                              {{"emotion", st.secret},
                                               {"turns", std::to_string(next.turn)}})
                              : replies.wrong_guess);
    next.answered.push_back(QaEvent{guess_question_id(*guess), correct ? Answer::Yes : Answer::No,
                                    std::string(text), r.lines.back(), next.turn});
    if (correct) {
      next.status = AnswererStatus::UserWon;
      return r;
    }
  } else {
    const Answer a = classifier.classify(st.secret, text);
    r.lines.push_back(render_answer(a, replies));
    next.answered.push_back(QaEvent{"", a, std::string(text), r.lines.back(), next.turn});
    if (auto m = nlu.match_question(text, kb); m.question_id)
      next.answered.back().question_id = *m.question_id;
  }

  if (next.turn >= kTurnBudget) {
    next.status = AnswererStatus::Revealed;
    r.lines.push_back(fill_template(replies.reveal, {{"emotion", st.secret}}));
  }
  return r;
}

// ---------------------------------------------------------------------------
// ExternalClassifier

struct ExternalClassifier::Child {
  pid_t pid = -1;
  int to_child = -1;
  int from_child = -1;
  std::string buffer;
};

ExternalClassifier::ExternalClassifier(std::vector<std::string> argv,
                                       std::shared_ptr<const AnswerClassifier> fallback,
                                       std::chrono::milliseconds timeout)
    : argv_(std::move(argv)), fallback_(std::move(fallback)), timeout_(timeout) {
  if (argv_.empty()) throw ValidationError("external classifier: empty command");
  if (!fallback_) throw ValidationError("external classifier: a fallback classifier is required");
}

ExternalClassifier::~ExternalClassifier() {
  std::lock_guard lock(mu_);
  stop();
}

void ExternalClassifier::stop() const {
  if (!child_) return;
  if (child_->to_child >= 0) ::close(child_->to_child);
  if (child_->from_child >= 0) ::close(child_->from_child);
  if (child_->pid > 0) {
    ::kill(child_->pid, SIGTERM);
    ::waitpid(child_->pid, nullptr, 0);
  }
  child_.reset();
}

bool ExternalClassifier::ensure_started() const {
  if (child_) return true;
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe(in_pipe) != 0) return false;
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    return false;
  }
  std::vector<char*> args;
  for (const auto& a : argv_) args.push_back(const_cast<char*>(a.c_str()));
  args.push_back(nullptr);

  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    return false;
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    ::execvp(args[0], args.data());
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  child_ = std::make_unique<Child>();
  child_->pid = pid;
  child_->to_child = in_pipe[1];
  child_->from_child = out_pipe[0];
  return true;
}

Answer ExternalClassifier::classify(std::string_view emotion, std::string_view question) const {
  std::unique_lock lock(mu_);
  auto fail = [&]() {
    stop();
    ++fallbacks_;
    lock.unlock();
    return fallback_->classify(emotion, question);
  };
  if (!ensure_started()) return fail();

  const std::string request =
      nlohmann::json{{"emotion", emotion}, {"question", question}}.dump() + "\n";
  // A dead child turns writes into SIGPIPE; ignore it and rely on EPIPE.
  ::signal(SIGPIPE, SIG_IGN);
  for (std::size_t off = 0; off < request.size();) {
    const ssize_t n = ::write(child_->to_child, request.data() + off, request.size() - off);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return fail();
    off += static_cast<std::size_t>(n);
  }

  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  std::string& buf = child_->buffer;
  std::size_t nl;
  while ((nl = buf.find('\n')) == std::string::npos) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) return fail();
    pollfd pfd{child_->from_child, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc < 0 && errno == EINTR) continue;
    if (rc <= 0) return fail();
    char chunk[4096];
    const ssize_t n = ::read(child_->from_child, chunk, sizeof chunk);
    if (n <= 0) return fail();
    buf.append(chunk, static_cast<std::size_t>(n));
  }
  const std::string line = buf.substr(0, nl);
  buf.erase(0, nl + 1);

  try {
    const auto reply = nlohmann::json::parse(line);
    if (auto a = parse_answer(reply.at("answer").get<std::string>())) return *a;
  } catch (const nlohmann::json::exception&) {
  }
  return fail();
}

std::uint64_t ExternalClassifier::fallback_count() const {
  std::lock_guard lock(mu_);
  return fallbacks_;
}

}  // namespace emo20q
