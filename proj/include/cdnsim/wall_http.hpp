#pragma once

#include <functional>
#include <memory>

#include "cdnsim/http.hpp"

namespace cdnsim {

// Current one-way delay toward a named peer node, in ms. Lets wall-mode
// servers emulate the virtual topology's link delays.
using LinkDelayFn = std::function<double(const NodeId& from_node)>;

// httplib listener on 127.0.0.1:<port>. Each request runs the handler with a
// wall-clock ActivityContext. When delay_of is set and the request carries an
// "X-From: <node>" header, the handler is preceded by a sleep of twice the
// current one-way delay toward that node (both directions of the round trip
// are charged on the serving side).
class WallHttpServer {
 public:
  WallHttpServer(NodeId self, int port, VirtualHttpHandler handler, uint64_t seed,
                 LinkDelayFn delay_of = {});
  ~WallHttpServer();

  void start();  // throws Error("listen-failed")
  void stop();
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Real HTTP client. Tags requests with "X-From: <vantage>" so servers can
// apply link emulation. Redirects are not followed here; use
// fetch_with_redirects.
class WallFetcher : public HttpFetcher {
 public:
  explicit WallFetcher(NodeId vantage, double timeout_ms = 2000.0)
      : vantage_(std::move(vantage)), timeout_ms_(timeout_ms) {}

  FetchOutcome fetch_once(ActivityContext& ctx, const std::string& url) override;

 private:
  NodeId vantage_;
  double timeout_ms_;
};

}  // namespace cdnsim
