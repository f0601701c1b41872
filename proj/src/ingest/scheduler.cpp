#include <condition_variable>
#include <deque>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "stocksent/error.hpp"
#include "stocksent/ingest.hpp"
#include "stocksent/util.hpp"

namespace stocksent::ingest {
namespace {

std::int64_t unix_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

IdentityState::IdentityState(std::filesystem::path path) : path_(std::move(path)) {
  if (!std::filesystem::exists(path_)) return;
  try {
    const auto j = nlohmann::json::parse(read_file(path_));
    for (const auto& [id, v] : j.items())
      state_[id] = {v.at("cursor").get<std::size_t>(), v.at("last_request_ms").get<std::int64_t>()};
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::data, path_.string() + ": bad identity state: " + e.what());
  }
}

std::size_t IdentityState::cursor(const std::string& source_id) const {
  auto it = state_.find(source_id);
  return it == state_.end() ? 0 : it->second.first;
}

std::optional<std::int64_t> IdentityState::last_request_ms(const std::string& source_id) const {
  auto it = state_.find(source_id);
  if (it == state_.end()) return std::nullopt;
  return it->second.second;
}

void IdentityState::update(const std::string& source_id, std::size_t cursor, std::int64_t last_request_ms) {
  state_[source_id] = {cursor, last_request_ms};
}

void IdentityState::save() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [id, v] : state_) j[id] = {{"cursor", v.first}, {"last_request_ms", v.second}};
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  write_file_atomic(path_, j.dump(2) + "\n");
}

PolitenessScheduler::PolitenessScheduler(SourceConfig source, std::uint64_t seed, IdentityState* state)
    : source_(std::move(source)), seed_(seed), state_(state) {
  if (!(source_.min_delay_s >= 0 && source_.min_delay_s <= source_.max_delay_s))
    fail(ErrorKind::config, "source '" + source_.id + "': need 0 <= min_delay <= max_delay");
  if (source_.max_concurrency < 1) fail(ErrorKind::config, "source '" + source_.id + "': max_concurrency must be >= 1");
  if (source_.rotate && source_.identities.empty())
    fail(ErrorKind::config, "source '" + source_.id + "': identity rotation needs a non-empty pool");
}

ScheduleResult PolitenessScheduler::run(std::size_t n_requests, const Task& task) {
  if (n_requests == 0) fail(ErrorKind::config, "schedule needs a non-empty plan");
  cancelled_ = false;
  using clock = std::chrono::steady_clock;
  const std::vector<Identity> pool = source_.identities.empty() ? std::vector<Identity>{Identity{}}
                                                                : source_.identities;
  std::size_t cursor = state_ ? state_->cursor(source_.id) % pool.size() : 0;

  std::mt19937_64 rng(seed_);
  std::uniform_real_distribution<double> gap(source_.min_delay_s, source_.max_delay_s);
  auto draw_gap = [&] {
    const double s = source_.min_delay_s == source_.max_delay_s ? source_.min_delay_s : gap(rng);
    return std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(s));
  };

  ScheduleResult result;
  result.records.resize(n_requests);
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::size_t> queue;
  std::size_t in_flight = 0;
  bool closing = false;
  const auto start = clock::now();
  auto since_start = [&](clock::time_point t) { return std::chrono::duration<double>(t - start).count(); };

  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return closing || !queue.empty(); });
        if (queue.empty()) return;
        i = queue.front();
        queue.pop_front();
      }
      auto& rec = result.records[i];
      try {
        task(i, pool[rec.identity]);
      } catch (...) {
        rec.error = std::current_exception();
        cancelled_ = true;
      }
      std::lock_guard lock(mu);
      rec.finished_s = since_start(clock::now());
      --in_flight;
      cv.notify_all();
    }
  };
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < std::min(source_.max_concurrency, n_requests); ++w) workers.emplace_back(worker);

  // Respect the pacing of a previous run recorded in the state file.
  if (state_) {
    if (auto last = state_->last_request_ms(source_.id)) {
      const auto wait_ms = *last + static_cast<std::int64_t>(source_.min_delay_s * 1000.0) - unix_ms();
      if (wait_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(wait_ms));
    }
  }

  std::size_t dispatched = 0;
  clock::time_point last_dispatch{};
  for (std::size_t i = 0; i < n_requests; ++i) {
    if (cancelled_) break;
    {
      std::unique_lock lock(mu);
      cv.wait(lock, [&] { return in_flight < source_.max_concurrency; });
    }
    if (i > 0) std::this_thread::sleep_until(last_dispatch + draw_gap());
    if (cancelled_) break;
    std::lock_guard lock(mu);
    last_dispatch = clock::now();
    auto& rec = result.records[i];
    rec.index = i;
    rec.identity = cursor;
    rec.dispatched_s = since_start(last_dispatch);
    if (source_.rotate) cursor = (cursor + 1) % pool.size();
    result.peak_in_flight = std::max(result.peak_in_flight, ++in_flight);
    queue.push_back(i);
    ++dispatched;
    cv.notify_all();
  }
  {
    std::lock_guard lock(mu);
    closing = true;
    cv.notify_all();
  }
  for (auto& t : workers) t.join();

  result.records.resize(dispatched);
  result.cancelled = dispatched < n_requests;
  if (state_) {
    state_->update(source_.id, cursor, unix_ms());
    state_->save();
  }
  return result;
}

}  // namespace stocksent::ingest
