#include "chatgrade/http_transport.h"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "chatgrade/error.h"

namespace chatgrade {
namespace {

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw ConfigError("URL has no scheme: " + url);
  const std::string scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") throw ConfigError("unsupported URL scheme: " + scheme);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpResponse HttpTransport::post(const HttpRequest& request) {
  const SplitUrl target = split_url(request.url);
  httplib::Client client(target.origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);

  httplib::Headers headers;
  std::string content_type = "application/json";
  for (const auto& [name, value] : request.headers) {
    if (name == "Content-Type") {
      content_type = value;
    } else {
      headers.emplace(name, value);
    }
  }

  const httplib::Result result = client.Post(target.path, headers, request.body, content_type);
  if (!result) {
    throw TransportError("request to " + target.origin + " failed: " +
                         httplib::to_string(result.error()));
  }
  return HttpResponse{result->status, result->body};
}

}  // namespace chatgrade
