#include "cdnsim/gateway.hpp"

#include "cdnsim/error.hpp"

namespace cdnsim {

SelectionDecision select_server(const std::vector<ProbeResult>& candidates, Rng& rng) {
  if (candidates.empty()) {
    throw Error("empty-candidates", "select_server needs at least one probe result");
  }
  SelectionDecision d;
  d.candidates = candidates;
  const ProbeResult* best = nullptr;
  for (const ProbeResult& c : candidates) {
    if (!c.rtt_ms) continue;
    if (!best || *c.rtt_ms < *best->rtt_ms) best = &c;
  }
  if (best) {
    d.chosen = best->server;
    d.min_rtt_ms = best->rtt_ms;
    d.fallback_used = false;
  } else {
    d.chosen = candidates[rng.uniform_u64(candidates.size())].server;
    d.min_rtt_ms = std::nullopt;
    d.fallback_used = true;
  }
  return d;
}

DecisionLog::DecisionLog(const std::string& path) : writer_(path) {
  writer_.write_row({"timestamp", "filename", "chosen", "min_rtt_ms", "fallback",
                     "probe_values"});
}

void DecisionLog::append(const std::string& timestamp, const std::string& filename,
                         const SelectionDecision& d) {
  std::string probes;
  for (const ProbeResult& c : d.candidates) {
    if (!probes.empty()) probes += ';';
    probes += c.server + "=" + (c.rtt_ms ? format_double(*c.rtt_ms) : "N/A");
  }
  writer_.write_row({timestamp, filename, d.chosen,
                     d.min_rtt_ms ? format_double(*d.min_rtt_ms) : "N/A",
                     d.fallback_used ? "true" : "false", probes});
}

Gateway::Gateway(HttpFetcher& fetcher, std::vector<NodeId> servers,
                 BaseUrlFn base_url, const Timebase& timebase, DecisionLog* log,
                 double coordination_overhead_ms)
    : fetcher_(fetcher), servers_(std::move(servers)),
      base_url_(std::move(base_url)), timebase_(timebase), log_(log),
      overhead_ms_(coordination_overhead_ms) {}

ProbeResult Gateway::ping_rtt(ActivityContext& ctx, const NodeId& server) {
  bool known = false;
  for (const NodeId& s : servers_) known |= s == server;
  if (!known) throw Error("unknown-server", server + " is not a probe target");
  ProbeResult r;
  r.server = server;
  double t0 = ctx.now_ms();
  FetchOutcome o = fetcher_.fetch_once(ctx, base_url_(server) + "echo");
  if (o.ok && o.response.status == 200) r.rtt_ms = ctx.now_ms() - t0;
  r.probed_at = timebase_.iso8601(ctx.now_ms());
  return r;
}

SelectionDecision Gateway::decide(ActivityContext& ctx) {
  if (servers_.empty()) throw Error("no-servers", "gateway has no servers configured");
  if (overhead_ms_ > 0) ctx.sleep_ms(overhead_ms_);
  std::vector<ProbeResult> probes;
  probes.reserve(servers_.size());
  for (const NodeId& s : servers_) probes.push_back(ping_rtt(ctx, s));
  return select_server(probes, ctx.rng());
}

HttpResponse Gateway::handle_redirect(ActivityContext& ctx, const std::string& filename) {
  if (filename.empty()) return HttpResponse{400, "empty-filename", "text/plain", ""};
  SelectionDecision d = decide(ctx);
  if (log_) log_->append(timebase_.iso8601(ctx.now_ms()), filename, d);
  std::string target = base_url_(d.chosen) + "segment/" + filename;
  return HttpResponse{302, "", "text/plain", target};
}

HttpResponse Gateway::handle_manifest(ActivityContext& ctx, const std::string& video_id) {
  SelectionDecision d = decide(ctx);
  if (log_) log_->append(timebase_.iso8601(ctx.now_ms()), "manifest:" + video_id, d);
  FetchOutcome o =
      fetcher_.fetch_once(ctx, base_url_(d.chosen) + "manifest/" + video_id);
  if (!o.ok) return HttpResponse{502, "upstream-unreachable: " + o.error, "text/plain", ""};
  return o.response;
}

HttpResponse Gateway::handle(ActivityContext& ctx, const HttpRequest& req) {
  const std::string cdn_prefix = "/cdn/";
  if (req.path.rfind(cdn_prefix, 0) == 0) {
    return handle_redirect(ctx, req.path.substr(cdn_prefix.size()));
  }
  const std::string manifest_prefix = "/manifest/";
  if (req.path.rfind(manifest_prefix, 0) == 0) {
    return handle_manifest(ctx, req.path.substr(manifest_prefix.size()));
  }
  return HttpResponse{404, "not-found", "text/plain", ""};
}

}  // namespace cdnsim
