#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "stocksent/error.hpp"
#include "stocksent/ingest.hpp"
#include "stocksent/util.hpp"

namespace stocksent::ingest {

LiveHttpClient::LiveHttpClient(std::chrono::milliseconds timeout) : timeout_(timeout) {}

HttpResponse LiveHttpClient::get(const HttpRequest& request) {
  // Split "scheme://host[:port]" from the path and query.
  const auto scheme_end = request.url.find("://");
  if (scheme_end == std::string::npos) fail(ErrorKind::config, "not an absolute URL: " + request.url);
  const auto path_start = request.url.find('/', scheme_end + 3);
  const std::string origin = request.url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : request.url.substr(path_start);

  httplib::Client client(origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_follow_location(true);
  if (!request.proxy.empty()) {
    const auto colon = request.proxy.rfind(':');
    if (colon == std::string::npos) fail(ErrorKind::config, "proxy must be host:port, got " + request.proxy);
    client.set_proxy(request.proxy.substr(0, colon), static_cast<int>(parse_int(request.proxy.substr(colon + 1))));
  }
  httplib::Headers headers(request.headers.begin(), request.headers.end());
  auto res = client.Get(path, headers);
  if (!res) fail(ErrorKind::retryable, "request to " + origin + " failed: " + httplib::to_string(res.error()));
  return {res->status, res->body};
}

}  // namespace stocksent::ingest
