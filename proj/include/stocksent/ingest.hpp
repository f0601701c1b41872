#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stocksent/document.hpp"
#include "stocksent/keymatch.hpp"
#include "stocksent/lexsent.hpp"

namespace stocksent::ingest {

struct Identity {
  std::string user_agent;
  std::string proxy;  // empty = direct
  friend bool operator==(const Identity&, const Identity&) = default;
};

/// How a source's response body maps onto documents.
enum class ResponseFormat { generic, guardian, alpha_vantage };
std::string_view to_string(ResponseFormat f);
ResponseFormat parse_response_format(std::string_view name);

struct SourceConfig {
  std::string id;                               // e.g. "guardian"
  Source channel = Source::news_api;            // channel the documents land in
  ResponseFormat format = ResponseFormat::generic;
  std::string endpoint;                         // base URL
  std::string query_template;                   // slots: {ticker} {from} {to} {token}
  std::string auth_env;                         // env var holding the token; empty = no auth
  std::optional<std::filesystem::path> fixture;  // recorded responses; replaces the network
  bool live = false;                            // network access must be switched on explicitly
  double min_delay_s = 1.0;
  double max_delay_s = 2.0;
  std::vector<Identity> identities;
  bool rotate = false;  // round-robin over `identities`
  std::size_t max_concurrency = 1;
  int window_days = 1;  // days covered by one request
  bool keyword_match = false;  // keep items whose keywords match the requested ticker's profile
  int max_retries = 5;  // 429 retries
  std::chrono::milliseconds backoff_base{1000};

  /// Every violated invariant, empty when valid.
  std::vector<std::string> validate() const;
};

/// Keys mirror the field names; `channel` and `format` take their string names, delays are seconds,
/// `identities` is a list of `{user_agent, proxy?}`. Relative fixture paths resolve against `base_dir`.
SourceConfig source_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

// ---------------------------------------------------------------------------------------------
// HTTP

struct HttpRequest {
  std::string url;
  std::map<std::string, std::string> headers;
  std::string proxy;
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

/// Transport failures throw Error(retryable). Must be safe to call from several threads.
class HttpClient {
 public:
  virtual ~HttpClient() = default;
  virtual HttpResponse get(const HttpRequest& request) = 0;
};

/// Replays `{"url", "status", "body"}` JSONL records. Several records for one URL are served in order
/// and the last one repeats. Unrecorded URLs throw Error(unsupported).
class FixtureReplayClient : public HttpClient {
 public:
  FixtureReplayClient() = default;
  static std::unique_ptr<FixtureReplayClient> load(const std::filesystem::path& jsonl);

  void record(std::string url, HttpResponse response);
  HttpResponse get(const HttpRequest& request) override;

  std::size_t calls() const;
  std::vector<HttpRequest> requests() const;

 private:
  struct Entry {
    std::vector<HttpResponse> responses;
    std::size_t next = 0;
  };
  mutable std::mutex mu_;
  std::map<std::string, Entry> entries_;
  std::vector<HttpRequest> seen_;
};

/// Network client over cpp-httplib. Proxies of the form `host:port` are honoured.
class LiveHttpClient : public HttpClient {
 public:
  explicit LiveHttpClient(std::chrono::milliseconds timeout = std::chrono::seconds(30));
  HttpResponse get(const HttpRequest& request) override;

 private:
  std::chrono::milliseconds timeout_;
};

/// Replay client when a fixture is configured, live client when `live` is set, otherwise
/// Error(unsupported).
std::unique_ptr<HttpClient> make_client(const SourceConfig& source);

using Sleeper = std::function<void(std::chrono::milliseconds)>;

/// 2xx returns the response. 429 sleeps base * 2^k and retries up to `max_retries` times, then throws
/// Error(retryable). 401/403 throw Error(auth). 5xx throws Error(retryable). Other codes throw
/// Error(data).
HttpResponse get_with_backoff(HttpClient& client, const HttpRequest& request, const SourceConfig& source,
                              const Sleeper& sleep);

// ---------------------------------------------------------------------------------------------
// Scheduling

struct ExecutionRecord {
  std::size_t index = 0;
  std::size_t identity = 0;  // index into the identity pool
  double dispatched_s = 0;   // seconds since run start
  double finished_s = 0;
  std::exception_ptr error;
};

struct ScheduleResult {
  std::vector<ExecutionRecord> records;  // by request index
  std::size_t peak_in_flight = 0;
  bool cancelled = false;
};

/// Rotation cursor and last request time per source, kept in one JSON file.
class IdentityState {
 public:
  explicit IdentityState(std::filesystem::path path);
  std::size_t cursor(const std::string& source_id) const;
  std::optional<std::int64_t> last_request_ms(const std::string& source_id) const;  // unix epoch
  void update(const std::string& source_id, std::size_t cursor, std::int64_t last_request_ms);
  void save() const;

 private:
  std::filesystem::path path_;
  std::map<std::string, std::pair<std::size_t, std::int64_t>> state_;
};

/// Dispatches tasks one at a time with a uniform random gap in [min_delay, max_delay] between
/// dispatches, rotating identities round-robin and keeping at most `max_concurrency` in flight.
/// A failed task cancels the dispatch of later ones.
class PolitenessScheduler {
 public:
  using Task = std::function<void(std::size_t index, const Identity& identity)>;

  PolitenessScheduler(SourceConfig source, std::uint64_t seed, IdentityState* state = nullptr);

  ScheduleResult run(std::size_t n_requests, const Task& task);
  void cancel() { cancelled_ = true; }

 private:
  SourceConfig source_;
  std::uint64_t seed_;
  IdentityState* state_;
  std::atomic<bool> cancelled_{false};
};

// ---------------------------------------------------------------------------------------------
// Fetch

struct KeywordFilter {
  std::span<const keymatch::TickerProfile> profiles;
  keymatch::MatchOptions options;
};

struct FetchOptions {
  std::uint64_t seed = 1;
  IdentityState* state = nullptr;
  Sleeper sleep;                          // defaults to std::this_thread::sleep_for
  const KeywordFilter* filter = nullptr;  // required by keyword_match sources
};

/// Expands the query template for one request window.
std::string build_url(const SourceConfig& source, const std::string& ticker, DateRange window,
                      const std::string& token);

/// Documents in one response body, in body order. Dates outside `window` are dropped with a warning.
/// For keyword_match sources, items are kept only when their keywords (generic `keywords`, Guardian
/// `tags[].webTitle`) match `ticker` under `filter`.
std::vector<TextDocument> parse_response(const SourceConfig& source, const std::string& ticker, DateRange window,
                                         const std::string& body, const KeywordFilter* filter = nullptr);

/// One request per `window_days` slice of `range`, paced by PolitenessScheduler. Results follow
/// request order. Days with no documents are logged as sparse.
std::vector<TextDocument> fetch(const SourceConfig& source, HttpClient& client, const std::string& ticker,
                                DateRange range, const FetchOptions& options = {});

// ---------------------------------------------------------------------------------------------
// Corpus store

/// sha256 of the case-folded, whitespace-collapsed text.
std::string normalized_text_hash(std::string_view text);

struct ShardInfo {
  std::size_t count = 0;
  std::string hash;  // sha256 of the shard file
  friend bool operator==(const ShardInfo&, const ShardInfo&) = default;
};

/// JSONL shards at `root/shards/<ticker>/<source>/<date>.jsonl` plus `root/manifest.json`.
/// Updates are journaled: new shard and manifest contents go to `.tmp` files, a journal marks the
/// commit, then everything is renamed into place.
class CorpusStore {
 public:
  explicit CorpusStore(std::filesystem::path root);
  /// Opens an existing store without creating, recovering or writing anything. Throws Error(io) when
  /// `root` is not a store and Error(data) when a commit was interrupted; add() then throws.
  static CorpusStore open_read_only(std::filesystem::path root);

  /// Stores documents not already present in their (ticker, date, source) bucket; returns the count
  /// stored. Input order decides which of two duplicates survives.
  std::size_t add(std::span<const TextDocument> docs);

  std::vector<TextDocument> load(const std::optional<std::string>& ticker = std::nullopt,
                                 const std::optional<Source>& source = std::nullopt,
                                 const std::optional<DateRange>& range = std::nullopt) const;

  const std::map<std::string, ShardInfo>& manifest() const { return manifest_; }
  std::size_t size() const;

  /// Finishes a journaled commit or discards an uncommitted one, then reloads the manifest.
  void recover();
  /// Throws Error(data) when a shard's line count or hash disagrees with the manifest.
  void verify() const;

  const std::filesystem::path& root() const { return root_; }
  static std::string shard_key(const std::string& ticker, Source source, Date date);

 private:
  CorpusStore() = default;
  void load_manifest();
  std::filesystem::path root_;
  std::map<std::string, ShardInfo> manifest_;
  bool read_only_ = false;
};

// ---------------------------------------------------------------------------------------------
// Benchmark preparation

struct LabeledText {
  std::string text;
  lexsent::Label label = lexsent::Label::neutral;
  std::string origin;  // "phrasebank" or "fiqa"
};

/// `sentence@label` lines. `path` is the Sentences_66Agree.txt file or the directory holding it.
/// Latin-1 input is transcoded to UTF-8.
std::vector<LabeledText> load_phrasebank(const std::filesystem::path& path);

/// FiQA task-1 JSON (`{id: {sentence, info: [{sentiment_score, ...}]}}`, mean of the info scores) or CSV
/// with `sentence` and `sentiment_score` columns. Scores go through discretize_regression_label.
std::vector<LabeledText> load_fiqa(const std::filesystem::path& path);

struct SplitCounts {
  std::size_t rows = 0;
  std::array<std::size_t, 3> by_label{};  // negative, neutral, positive
};

struct BenchmarkSplit {
  std::vector<LabeledText> train, test, validation;
  SplitCounts counts(std::span<const LabeledText> rows) const;
};

inline constexpr double kTestFraction = 0.2;
inline constexpr double kValidationFraction = 427.0 / 5328.0;

/// n_test = round(0.2 N) and n_val = round(N * 427/5328), apportioned to labels by largest remainder
/// and drawn from each label's rows after a seeded Fisher-Yates shuffle. Each split keeps input order.
BenchmarkSplit split_benchmark(std::span<const LabeledText> rows, std::uint64_t seed);

struct BenchmarkSummary {
  SplitCounts all, train, test, validation;
};

/// Loads the sources, splits and writes `train.csv`, `test.csv`, `validation.csv` (`text,label,origin`)
/// into `out_dir`. Missing sources throw Error(io) naming the expected layout.
BenchmarkSummary prepare_benchmark(const std::filesystem::path& phrasebank,
                                   std::span<const std::filesystem::path> fiqa, std::uint64_t seed,
                                   const std::filesystem::path& out_dir);

}  // namespace stocksent::ingest
