#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <thread>

#include <nlohmann/json.hpp>

#include "stocksent/error.hpp"
#include "stocksent/lexsent.hpp"
#include "stocksent/util.hpp"

extern char** environ;

namespace stocksent::lexsent {
namespace {

void ignore_sigpipe() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

[[noreturn]] void malformed(const std::string& backend, const std::string& line, const std::string& why) {
  log::warn("scorer " + backend + ": malformed reply (" + why + "): " + line);
  fail(ErrorKind::data, "scorer " + backend + ": malformed reply: " + why);
}

}  // namespace

ChildProcessTransport::ChildProcessTransport(std::vector<std::string> argv) : argv_(std::move(argv)) {
  if (argv_.empty()) fail(ErrorKind::config, "scorer command is empty");
  ignore_sigpipe();
}

ChildProcessTransport::~ChildProcessTransport() { stop(); }

void ChildProcessTransport::start() {
  int in[2], out[2];
  if (::pipe2(in, O_CLOEXEC) != 0) fail(ErrorKind::retryable, std::string("pipe: ") + std::strerror(errno));
  if (::pipe2(out, O_CLOEXEC) != 0) {
    ::close(in[0]);
    ::close(in[1]);
    fail(ErrorKind::retryable, std::string("pipe: ") + std::strerror(errno));
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out[1], STDOUT_FILENO);

  std::vector<char*> args;
  for (auto& a : argv_) args.push_back(a.data());
  args.push_back(nullptr);
  pid_t pid = -1;
  const int rc = ::posix_spawnp(&pid, args[0], &actions, nullptr, args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in[0]);
  ::close(out[1]);
  if (rc != 0) {
    ::close(in[1]);
    ::close(out[0]);
    fail(ErrorKind::retryable, "cannot start scorer '" + argv_[0] + "': " + std::strerror(rc));
  }
  pid_ = pid;
  to_child_ = in[1];
  from_child_ = out[0];
  buffer_.clear();
}

void ChildProcessTransport::stop() {
  close_fd(to_child_);
  close_fd(from_child_);
  if (pid_ > 0) {
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
  }
  pid_ = -1;
  buffer_.clear();
}

std::string ChildProcessTransport::exchange(const std::string& request_line, std::chrono::milliseconds timeout) {
  if (pid_ < 0) start();
  std::string payload = request_line + "\n";
  std::size_t written = 0;
  while (written < payload.size()) {
    auto n = ::write(to_child_, payload.data() + written, payload.size() - written);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      stop();
      fail(ErrorKind::retryable, "scorer '" + argv_[0] + "' is not accepting requests");
    }
    written += static_cast<std::size_t>(n);
  }

  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      stop();
      fail(ErrorKind::retryable, "scorer '" + argv_[0] + "' timed out after " + std::to_string(timeout.count()) + " ms");
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int pr = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (pr < 0 && errno == EINTR) continue;
    if (pr == 0) continue;
    char chunk[4096];
    const auto n = ::read(from_child_, chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      stop();
      fail(ErrorKind::retryable, "scorer '" + argv_[0] + "' closed its output");
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void ScorerRegistry::add(const std::string& backend, TransportFactory factory) {
  factories_[backend] = std::move(factory);
}

void ScorerRegistry::add_command(const std::string& backend, std::vector<std::string> argv) {
  add(backend, [argv] { return std::make_unique<ChildProcessTransport>(argv); });
}

bool ScorerRegistry::contains(const std::string& backend) const { return factories_.count(backend) != 0; }

const TransportFactory& ScorerRegistry::factory(const std::string& backend) const {
  auto it = factories_.find(backend);
  if (it == factories_.end()) {
    std::string known;
    for (const auto& [name, f] : factories_) known += (known.empty() ? "" : ", ") + name;
    fail(ErrorKind::config, "scorer backend '" + backend + "' is not registered (registered: " +
                                (known.empty() ? "none" : known) + ")");
  }
  return it->second;
}

SentimentScore parse_scorer_reply(const std::string& line, const std::string& expected_id, const std::string& backend) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error&) {
    malformed(backend, line, "not JSON");
  }
  if (!j.is_object()) malformed(backend, line, "not an object");
  auto id = j.find("id");
  if (id == j.end() || !id->is_string() || id->get<std::string>() != expected_id)
    malformed(backend, line, "id does not match request " + expected_id);
  auto pol = j.find("polarity");
  if (pol == j.end() || !pol->is_number()) malformed(backend, line, "polarity is not a number");
  const double p = pol->get<double>();
  if (!std::isfinite(p) || p < -1.0 || p > 1.0) malformed(backend, line, "polarity outside [-1, 1]");

  SentimentScore s;
  s.polarity = p;
  s.subjectivity = 0.0;
  s.no_signal = false;
  s.provenance = "external:" + backend;
  auto label = j.find("label");
  if (label == j.end() || label->is_null()) {
    s.label = classify_compound(p);
  } else if (!label->is_string()) {
    malformed(backend, line, "label is not a string");
  } else {
    try {
      s.label = parse_label(label->get<std::string>());
    } catch (const Error&) {
      malformed(backend, line, "unknown label");
    }
  }
  return s;
}

ExternalScorer::ExternalScorer(std::string backend, TransportFactory factory, ScorerOptions options)
    : backend_(std::move(backend)), factory_(std::move(factory)), options_(options) {
  if (options_.max_attempts < 1) fail(ErrorKind::config, "max_attempts must be >= 1");
  if (options_.max_concurrency < 1) fail(ErrorKind::config, "max_concurrency must be >= 1");
}

SentimentScore ExternalScorer::score_with(ScorerTransport& transport, const TextDocument& doc) {
  const std::string request = nlohmann::json{{"id", doc.id}, {"text", doc.text}}.dump();
  auto backoff = options_.backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    std::string reply;
    {
      std::lock_guard lock(mu_);
      peak_in_flight_ = std::max(peak_in_flight_, ++in_flight_);
    }
    try {
      reply = transport.exchange(request, options_.timeout);
    } catch (const Error& e) {
      {
        std::lock_guard lock(mu_);
        --in_flight_;
      }
      if (!e.retryable()) throw;
      last_error = e.what();
      log::warn("scorer " + backend_ + ": attempt " + std::to_string(attempt) + " failed: " + last_error);
      if (attempt < options_.max_attempts) {
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
      continue;
    }
    {
      std::lock_guard lock(mu_);
      --in_flight_;
    }
    return parse_scorer_reply(reply, doc.id, backend_);
  }
  fail(ErrorKind::retryable, "scorer " + backend_ + ": gave up on document " + doc.id + " after " +
                                 std::to_string(options_.max_attempts) + " attempts: " + last_error);
}

SentimentScore ExternalScorer::score(const TextDocument& doc) {
  if (!transport_) transport_ = factory_();
  return score_with(*transport_, doc);
}

std::vector<SentimentScore> ExternalScorer::score_all(std::span<const TextDocument> docs) {
  std::vector<SentimentScore> out(docs.size());
  if (docs.empty()) return out;
  const std::size_t workers = std::min(options_.max_concurrency, docs.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(docs.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      std::unique_ptr<ScorerTransport> transport;
      for (std::size_t i = next++; i < docs.size(); i = next++) {
        try {
          if (!transport) transport = factory_();
          out[i] = score_with(*transport, docs[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace stocksent::lexsent
