#pragma once

#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "cdnsim/http.hpp"
#include "cdnsim/link.hpp"
#include "cdnsim/mpd.hpp"
#include "cdnsim/prometheus.hpp"

namespace cdnsim {

struct CpuCounters {
  std::string instance;
  double total_cpu_s = 0.0;
  double active_cpu_s = 0.0;  // never exceeds total_cpu_s
};

// Synthetic CPU accounting: the total counter advances one second per second
// per core; the active counter advances at base_load plus a fixed 5 ms per
// segment served. Counters are functions of elapsed time plus served work, so
// they are nondecreasing by construction.
class CpuModel {
 public:
  CpuModel(std::string instance, double start_ms, double base_load = 0.0,
           double cores = 1.0);

  void on_segment_served();
  CpuCounters counters(double now_ms) const;

  static constexpr double kActiveSecondsPerSegment = 0.005;

 private:
  std::string instance_;
  double start_ms_;
  double base_load_;
  double cores_;
  uint64_t segments_served_ = 0;
  mutable std::mutex mu_;
};

// Deterministic pseudo-random segment bytes for (video_id, index); index -1
// addresses the init segment. Same inputs give the same bytes on every
// platform and run.
std::string segment_payload(const std::string& video_id, int index, uint64_t size_bytes);

// One content server: serves manifests, segments (optionally rate-limited on
// the serving side), a Prometheus text endpoint, and an echo endpoint used by
// RTT probes.
class OriginServer {
 public:
  OriginServer(NodeId id, double start_ms, double cpu_base_load = 0.0);

  void provision(const Manifest& manifest);
  const Manifest* find_manifest(const std::string& video_id) const;

  // Serving-side throttle applied to every segment response.
  // Throws Error("invalid-rate") for rate <= 0; kUnlimitedRate disables it.
  void set_throttle(double bytes_per_s);

  // Routes GET /manifest/<id>, /segment/<name>, /metrics, /echo.
  HttpResponse handle(ActivityContext& ctx, const HttpRequest& req);

  const NodeId& id() const { return id_; }
  CpuCounters cpu_counters(double now_ms) const { return cpu_.counters(now_ms); }

 private:
  struct StoredSegment {
    std::string video_id;
    int index;
    uint64_t size_bytes;
  };

  HttpResponse serve_manifest(const std::string& video_id) const;
  HttpResponse serve_segment(ActivityContext& ctx, const std::string& name);

  NodeId id_;
  CpuModel cpu_;
  double throttle_bytes_per_s_;
  std::map<std::string, Manifest> manifests_;
  std::map<std::string, StoredSegment> segments_;  // by segment name
  mutable std::mutex mu_;
};

}  // namespace cdnsim
