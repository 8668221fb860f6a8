#pragma once

#include <chrono>

#include "chatgrade/completion.h"

namespace chatgrade {

// Live transport over cpp-httplib. Supports http:// and https:// URLs; a
// fresh connection is opened per request, so concurrent use is safe.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::chrono::seconds timeout = std::chrono::seconds(60))
      : timeout_(timeout) {}

  HttpResponse post(const HttpRequest& request) override;

 private:
  std::chrono::seconds timeout_;
};

}  // namespace chatgrade
