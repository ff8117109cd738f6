#pragma once

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cdnsim/clock.hpp"
#include "cdnsim/link.hpp"
#include "cdnsim/topology.hpp"

namespace cdnsim {

struct ParsedUrl {
  std::string scheme;
  std::string host;
  int port = 80;
  std::string path;   // always starts with "/"
  std::string query;  // without the "?"
};

// Throws Error("invalid-url").
ParsedUrl parse_url(const std::string& url);

// Drops "?..." if present; the fragment is treated as part of the query.
std::string strip_query(const std::string& url);

struct HttpRequest {
  std::string method = "GET";
  std::string url;
  std::string path;
  std::string query;
};

struct HttpResponse {
  int status = 0;
  std::string body;
  std::string content_type = "text/plain";
  std::string location;  // set on redirects
};

// Result of one fetch attempt. ok means a response was received; transport
// failures carry an error code instead ("connection-refused", "timeout",
// "invalid-url", "unknown-host", "too-many-redirects").
struct FetchOutcome {
  bool ok = false;
  std::string error;
  HttpResponse response;
  std::vector<int> status_chain;
  std::string final_url;
  double duration_ms = 0.0;
};

class HttpFetcher {
 public:
  virtual ~HttpFetcher() = default;
  // Single request, redirects not followed.
  virtual FetchOutcome fetch_once(ActivityContext& ctx, const std::string& url) = 0;
};

// Follows 301/302 Location chains up to max_hops responses total, recording
// every status. A redirect past the hop budget yields "too-many-redirects".
FetchOutcome fetch_with_redirects(HttpFetcher& fetcher, ActivityContext& ctx,
                                  const std::string& url, int max_hops = 3);

using VirtualHttpHandler =
    std::function<HttpResponse(ActivityContext&, const HttpRequest&)>;

// In-process HTTP transport over the link table. A request from a vantage
// node to a hostname travels the matching topology link in both directions;
// the handler runs on the caller's activity, so any time it spends (throttle
// sleeps, nested fetches) lands on the caller's timeline. The client/gateway
// pair shares a zero-delay channel, as does any node talking to itself.
class VirtualNetwork {
 public:
  VirtualNetwork(LinkTable& links, const Topology& topo);

  void register_handler(const NodeId& host, VirtualHttpHandler handler);
  // A down host refuses connections immediately (no timeout is consumed).
  void set_down(const NodeId& host, bool down);
  bool is_down(const NodeId& host) const;

  FetchOutcome perform(ActivityContext& ctx, const NodeId& vantage,
                       const std::string& url, double timeout_ms);

 private:
  std::optional<LinkId> route(const NodeId& vantage, const NodeId& host) const;

  LinkTable& links_;
  const Topology& topo_;
  std::map<NodeId, VirtualHttpHandler> handlers_;
  std::map<NodeId, bool> down_;
  mutable std::mutex mu_;
};

class VirtualFetcher : public HttpFetcher {
 public:
  VirtualFetcher(VirtualNetwork& net, NodeId vantage, double timeout_ms = 2000.0)
      : net_(net), vantage_(std::move(vantage)), timeout_ms_(timeout_ms) {}

  FetchOutcome fetch_once(ActivityContext& ctx, const std::string& url) override {
    return net_.perform(ctx, vantage_, url, timeout_ms_);
  }

 private:
  VirtualNetwork& net_;
  NodeId vantage_;
  double timeout_ms_;
};

}  // namespace cdnsim
