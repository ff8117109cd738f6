#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cdnsim/csv.hpp"
#include "cdnsim/http.hpp"
#include "cdnsim/random.hpp"
#include "cdnsim/util.hpp"

namespace cdnsim {

struct ProbeResult {
  NodeId server;
  std::optional<double> rtt_ms;  // absent means the probe failed
  std::string probed_at;
};

struct SelectionDecision {
  NodeId chosen;
  std::optional<double> min_rtt_ms;  // absent when fallback_used
  bool fallback_used = false;
  std::vector<ProbeResult> candidates;
};

// Lowest present RTT wins; ties go to the earliest candidate. When every
// probe failed, the choice is uniform over all candidates and fallback_used
// is set. Throws Error("empty-candidates").
SelectionDecision select_server(const std::vector<ProbeResult>& candidates, Rng& rng);

// Single-writer append log of redirect decisions.
class DecisionLog {
 public:
  explicit DecisionLog(const std::string& path);
  void append(const std::string& timestamp, const std::string& filename,
              const SelectionDecision& decision);

 private:
  CsvWriter writer_;
};

// Redirect orchestrator. Transport-agnostic: reaches servers through the
// given fetcher and a server -> base URL mapping (base URLs end with "/").
class Gateway {
 public:
  using BaseUrlFn = std::function<std::string(const NodeId&)>;

  Gateway(HttpFetcher& fetcher, std::vector<NodeId> servers, BaseUrlFn base_url,
          const Timebase& timebase, DecisionLog* log = nullptr,
          double coordination_overhead_ms = 0.0);

  // Application-level echo round trip; rtt is the elapsed request time,
  // absent on any transport failure or non-200.
  ProbeResult ping_rtt(ActivityContext& ctx, const NodeId& server);

  // Probes every server and picks one. Spends the coordination overhead
  // before probing; this is the per-request cost of running the selection.
  SelectionDecision decide(ActivityContext& ctx);

  // Routes GET /cdn/<filename> (302 to the chosen server's segment URL) and
  // GET /manifest/<id> (proxied from the chosen server).
  HttpResponse handle(ActivityContext& ctx, const HttpRequest& req);

  const std::vector<NodeId>& servers() const { return servers_; }

 private:
  HttpResponse handle_redirect(ActivityContext& ctx, const std::string& filename);
  HttpResponse handle_manifest(ActivityContext& ctx, const std::string& video_id);

  HttpFetcher& fetcher_;
  std::vector<NodeId> servers_;
  BaseUrlFn base_url_;
  Timebase timebase_;
  DecisionLog* log_;
  double overhead_ms_;
};

}  // namespace cdnsim
