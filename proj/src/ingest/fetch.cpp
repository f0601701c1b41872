#include <cstdlib>
#include <thread>

#include <nlohmann/json.hpp>

#include "stocksent/error.hpp"
#include "stocksent/ingest.hpp"
#include "stocksent/util.hpp"

namespace stocksent::ingest {
namespace {

// Token substituted for {token} when replaying; recorded fixtures never hold real credentials.
constexpr std::string_view kRedactedToken = "REDACTED";

std::string percent_encode(std::string_view s) {
  static constexpr char hex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

void replace_all(std::string& s, std::string_view from, const std::string& to) {
  for (auto pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

// Accepts `YYYY-MM-DD...` and Alpha Vantage's `YYYYMMDDTHHMMSS`.
Date parse_timestamp(const std::string& s) {
  if (s.size() >= 10 && s[4] == '-') return Date::parse(std::string_view(s).substr(0, 10));
  if (s.size() >= 8 && std::all_of(s.begin(), s.begin() + 8, [](unsigned char c) { return std::isdigit(c); }))
    return Date::parse(s.substr(0, 4) + "-" + s.substr(4, 2) + "-" + s.substr(6, 2));
  fail(ErrorKind::data, "unrecognised timestamp '" + s + "'");
}

std::string string_field(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return {};
  if (!it->is_string()) fail(ErrorKind::data, std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

const nlohmann::json& items_of(const SourceConfig& source, const nlohmann::json& body) {
  static const nlohmann::json empty = nlohmann::json::array();
  const nlohmann::json* items = nullptr;
  switch (source.format) {
    case ResponseFormat::generic:
      if (body.is_array()) items = &body;
      else if (body.is_object() && body.contains("documents")) items = &body["documents"];
      break;
    case ResponseFormat::guardian:
      if (body.is_object() && body.contains("response") && body["response"].contains("results"))
        items = &body["response"]["results"];
      break;
    case ResponseFormat::alpha_vantage:
      if (body.is_object() && body.contains("feed")) items = &body["feed"];
      else if (body.is_object() && body.contains("items") && body["items"] == "0") items = &empty;
      break;
  }
  if (!items || !items->is_array())
    fail(ErrorKind::data, "source " + source.id + ": response is not in " + std::string(to_string(source.format)) +
                              " layout");
  return *items;
}

std::vector<std::string> keywords_of(const SourceConfig& source, const nlohmann::json& item) {
  std::vector<std::string> out;
  if (source.format == ResponseFormat::guardian) {
    if (auto it = item.find("tags"); it != item.end() && it->is_array())
      for (const auto& t : *it)
        if (t.is_object() && t.contains("webTitle") && t["webTitle"].is_string()) out.push_back(t["webTitle"]);
    return out;
  }
  if (auto it = item.find("keywords"); it != item.end() && it->is_array())
    for (const auto& k : *it)
      if (k.is_string() && !trim(k.get<std::string>()).empty()) out.push_back(k.get<std::string>());
  return out;
}

}  // namespace

std::string_view to_string(ResponseFormat f) {
  switch (f) {
    case ResponseFormat::generic: return "generic";
    case ResponseFormat::guardian: return "guardian";
    case ResponseFormat::alpha_vantage: return "alpha_vantage";
  }
  return "?";
}

ResponseFormat parse_response_format(std::string_view name) {
  for (auto f : {ResponseFormat::generic, ResponseFormat::guardian, ResponseFormat::alpha_vantage})
    if (to_string(f) == name) return f;
  fail(ErrorKind::config, "unknown response format '" + std::string(name) +
                              "' (expected generic, guardian or alpha_vantage)");
}

std::vector<std::string> SourceConfig::validate() const {
  std::vector<std::string> problems;
  const std::string who = "source '" + id + "': ";
  if (id.empty()) problems.push_back("source id is empty");
  if (!(min_delay_s >= 0)) problems.push_back(who + "min_delay must be >= 0");
  if (!(min_delay_s <= max_delay_s)) problems.push_back(who + "min_delay must not exceed max_delay");
  if (rotate && identities.empty()) problems.push_back(who + "identity rotation needs a non-empty identity pool");
  if (max_concurrency < 1) problems.push_back(who + "max_concurrency must be >= 1");
  if (window_days < 1) problems.push_back(who + "window_days must be >= 1");
  if (max_retries < 0) problems.push_back(who + "max_retries must be >= 0");
  if (backoff_base.count() < 0) problems.push_back(who + "backoff must be >= 0");
  if (!fixture && !live) problems.push_back(who + "needs a fixture, or live = true for network access");
  if (live && endpoint.empty()) problems.push_back(who + "live access needs an endpoint");
  return problems;
}

SourceConfig source_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) fail(ErrorKind::config, "source config must be an object");
  SourceConfig s;
  try {
    s.id = j.at("id").get<std::string>();
    if (j.contains("channel")) s.channel = parse_source(j["channel"].get<std::string>());
    if (j.contains("format")) s.format = parse_response_format(j["format"].get<std::string>());
    s.endpoint = j.value("endpoint", std::string{});
    s.query_template = j.value("query_template", std::string{});
    s.auth_env = j.value("auth_env", std::string{});
    if (j.contains("fixture")) {
      std::filesystem::path p = j["fixture"].get<std::string>();
      s.fixture = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    s.live = j.value("live", false);
    s.min_delay_s = j.value("min_delay", s.min_delay_s);
    s.max_delay_s = j.value("max_delay", s.max_delay_s);
    if (j.contains("identities")) {
      for (const auto& id : j["identities"])
        s.identities.push_back({id.at("user_agent").get<std::string>(), id.value("proxy", std::string{})});
    }
    s.rotate = j.value("rotate", !s.identities.empty());
    s.max_concurrency = j.value("max_concurrency", s.max_concurrency);
    s.window_days = j.value("window_days", s.window_days);
    s.keyword_match = j.value("keyword_match", false);
    s.max_retries = j.value("max_retries", s.max_retries);
    s.backoff_base = std::chrono::milliseconds(j.value("backoff_ms", s.backoff_base.count()));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::config, std::string("bad source config: ") + e.what());
  }
  return s;
}

std::unique_ptr<FixtureReplayClient> FixtureReplayClient::load(const std::filesystem::path& jsonl) {
  auto client = std::make_unique<FixtureReplayClient>();
  const auto content = read_file(jsonl);
  std::size_t line_no = 0;
  for (const auto& raw : split(content, '\n')) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      HttpResponse r;
      r.status = j.at("status").get<int>();
      const auto& body = j.at("body");
      r.body = body.is_string() ? body.get<std::string>() : body.dump();
      client->record(j.at("url").get<std::string>(), std::move(r));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::data, jsonl.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return client;
}

void FixtureReplayClient::record(std::string url, HttpResponse response) {
  std::lock_guard lock(mu_);
  entries_[std::move(url)].responses.push_back(std::move(response));
}

HttpResponse FixtureReplayClient::get(const HttpRequest& request) {
  std::lock_guard lock(mu_);
  seen_.push_back(request);
  auto it = entries_.find(request.url);
  if (it == entries_.end()) fail(ErrorKind::unsupported, "no recorded response for " + request.url);
  auto& e = it->second;
  const auto& r = e.responses[std::min(e.next, e.responses.size() - 1)];
  if (e.next < e.responses.size()) ++e.next;
  return r;
}

std::size_t FixtureReplayClient::calls() const {
  std::lock_guard lock(mu_);
  return seen_.size();
}

std::vector<HttpRequest> FixtureReplayClient::requests() const {
  std::lock_guard lock(mu_);
  return seen_;
}

std::unique_ptr<HttpClient> make_client(const SourceConfig& source) {
  if (source.fixture) return FixtureReplayClient::load(*source.fixture);
  if (source.live) return std::make_unique<LiveHttpClient>();
  fail(ErrorKind::unsupported, "source '" + source.id +
                                   "': live fetching is disabled; configure a fixture or set live = true");
}

HttpResponse get_with_backoff(HttpClient& client, const HttpRequest& request, const SourceConfig& source,
                              const Sleeper& sleep) {
  auto delay = source.backoff_base;
  for (int retry = 0;; ++retry) {
    auto r = client.get(request);
    if (r.status >= 200 && r.status < 300) return r;
    if (r.status == 401 || r.status == 403)
      fail(ErrorKind::auth, "source '" + source.id + "': credentials rejected (HTTP " + std::to_string(r.status) +
                                ")" + (source.auth_env.empty() ? "" : "; check " + source.auth_env));
    if (r.status == 429) {
      if (retry >= source.max_retries)
        fail(ErrorKind::retryable, "source '" + source.id + "': still rate limited after " +
                                       std::to_string(source.max_retries) + " retries");
      log::warn("source '" + source.id + "': rate limited, retrying in " + std::to_string(delay.count()) + " ms");
      sleep(delay);
      delay *= 2;
      continue;
    }
    if (r.status >= 500)
      fail(ErrorKind::retryable, "source '" + source.id + "': server error HTTP " + std::to_string(r.status));
    fail(ErrorKind::data, "source '" + source.id + "': unexpected HTTP " + std::to_string(r.status) + " for " +
                              request.url);
  }
}

std::string build_url(const SourceConfig& source, const std::string& ticker, DateRange window,
                      const std::string& token) {
  std::string q = source.query_template;
  replace_all(q, "{ticker}", percent_encode(ticker));
  replace_all(q, "{from}", window.from.iso());
  replace_all(q, "{to}", window.to.iso());
  replace_all(q, "{token}", percent_encode(token));
  return source.endpoint + q;
}

std::vector<TextDocument> parse_response(const SourceConfig& source, const std::string& ticker, DateRange window,
                                         const std::string& body, const KeywordFilter* filter) {
  if (source.keyword_match && !filter)
    fail(ErrorKind::config, "source '" + source.id + "' matches keywords but no ticker profiles were given");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorKind::data, "source '" + source.id + "': response is not JSON: " + e.what());
  }
  std::vector<TextDocument> docs;
  std::size_t pos = 0;
  for (const auto& item : items_of(source, j)) {
    ++pos;
    if (!item.is_object()) fail(ErrorKind::data, "source '" + source.id + "': item " + std::to_string(pos) +
                                                     " is not an object");
    TextDocument d;
    d.ticker = ticker;
    d.source = source.channel;
    std::string stamp;
    switch (source.format) {
      case ResponseFormat::generic:
        d.id = string_field(item, "id");
        stamp = string_field(item, "date");
        d.text = string_field(item, "text");
        if (source.channel == Source::twitter &&
            (item.contains("likes") || item.contains("retweets") || item.contains("replies"))) {
          d.engagement = Engagement{item.value("likes", std::int64_t{0}), item.value("retweets", std::int64_t{0}),
                                    item.value("replies", std::int64_t{0})};
        }
        break;
      case ResponseFormat::guardian: {
        d.id = string_field(item, "id");
        stamp = string_field(item, "webPublicationDate");
        d.text = string_field(item, "webTitle");
        if (item.contains("fields") && item["fields"].is_object()) {
          const auto trail = string_field(item["fields"], "trailText");
          if (!trail.empty()) d.text += "\n" + trail;
        }
        break;
      }
      case ResponseFormat::alpha_vantage: {
        d.id = string_field(item, "url");
        stamp = string_field(item, "time_published");
        d.text = string_field(item, "title");
        const auto summary = string_field(item, "summary");
        if (!summary.empty()) d.text += "\n" + summary;
        break;
      }
    }
    if (stamp.empty()) fail(ErrorKind::data, "source '" + source.id + "': item " + std::to_string(pos) + " has no date");
    d.date = parse_timestamp(stamp);
    if (d.id.empty()) d.id = source.id + ":" + ticker + ":" + d.date.iso() + ":" + std::to_string(pos);
    if (!window.contains(d.date)) {
      log::warn("source '" + source.id + "': dropping " + d.id + " dated " + d.date.iso() + " outside " +
                window.from.iso() + ".." + window.to.iso());
      continue;
    }
    if (trim(d.text).empty()) continue;
    if (source.keyword_match) {
      const auto keywords = keywords_of(source, item);
      const auto m = keywords.empty() ? std::nullopt : keymatch::match_ticker(keywords, filter->profiles, filter->options);
      if (!m || m->ticker != ticker) continue;
    }
    validate_document(d);
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<TextDocument> fetch(const SourceConfig& source, HttpClient& client, const std::string& ticker,
                                DateRange range, const FetchOptions& options) {
  if (const auto problems = source.validate(); !problems.empty()) {
    std::string msg = "invalid source config:";
    for (const auto& p : problems) msg += "\n  " + p;
    fail(ErrorKind::config, msg);
  }
  if (range.to < range.from) fail(ErrorKind::config, "date range ends before it starts");
  if (source.keyword_match && !options.filter)
    fail(ErrorKind::config, "source '" + source.id + "' matches keywords but no ticker profiles were given");

  std::string token;
  if (source.fixture) {
    token = kRedactedToken;
  } else if (!source.auth_env.empty()) {
    const char* v = std::getenv(source.auth_env.c_str());
    if (!v || !*v) fail(ErrorKind::auth, "source '" + source.id + "': environment variable " + source.auth_env +
                                             " is not set");
    token = v;
  }

  std::vector<DateRange> windows;
  for (Date d = range.from; d <= range.to; d = d.plus_days(source.window_days))
    windows.push_back({d, std::min(range.to, d.plus_days(source.window_days - 1))});

  Sleeper sleep = options.sleep ? options.sleep : Sleeper([](std::chrono::milliseconds ms) {
    std::this_thread::sleep_for(ms);
  });
  std::vector<std::vector<TextDocument>> per_window(windows.size());
  PolitenessScheduler scheduler(source, options.seed, options.state);
  const auto result = scheduler.run(windows.size(), [&](std::size_t i, const Identity& identity) {
    HttpRequest req;
    req.url = build_url(source, ticker, windows[i], token);
    if (!identity.user_agent.empty()) req.headers["User-Agent"] = identity.user_agent;
    req.proxy = identity.proxy;
    per_window[i] =
        parse_response(source, ticker, windows[i], get_with_backoff(client, req, source, sleep).body, options.filter);
  });
  for (const auto& r : result.records)
    if (r.error) std::rethrow_exception(r.error);

  std::vector<TextDocument> docs;
  for (auto& w : per_window)
    for (auto& d : w) docs.push_back(std::move(d));

  std::set<Date> seen;
  for (const auto& d : docs) seen.insert(d.date);
  std::string sparse;
  std::size_t n_sparse = 0;
  for (Date d = range.from; d <= range.to; d = d.plus_days(1)) {
    if (seen.count(d)) continue;
    ++n_sparse;
    sparse += (sparse.empty() ? "" : ", ") + d.iso();
  }
  if (n_sparse > 0)
    log::info("source '" + source.id + "' " + ticker + ": " + std::to_string(n_sparse) + " sparse day(s): " + sparse);
  return docs;
}

}  // namespace stocksent::ingest
