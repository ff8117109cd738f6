#include "cdnsim/origin.hpp"

#include <algorithm>

#include "cdnsim/error.hpp"
#include "cdnsim/random.hpp"
#include "cdnsim/util.hpp"

namespace cdnsim {

CpuModel::CpuModel(std::string instance, double start_ms, double base_load,
                   double cores)
    : instance_(std::move(instance)), start_ms_(start_ms),
      base_load_(base_load), cores_(cores) {
  if (base_load < 0 || base_load > cores) {
    throw Error("invalid-cpu-load", "base load must lie in [0, cores]");
  }
}

void CpuModel::on_segment_served() {
  std::lock_guard<std::mutex> lk(mu_);
  ++segments_served_;
}

CpuCounters CpuModel::counters(double now_ms) const {
  std::lock_guard<std::mutex> lk(mu_);
  double elapsed_s = std::max(0.0, (now_ms - start_ms_) / 1000.0);
  CpuCounters c;
  c.instance = instance_;
  c.total_cpu_s = elapsed_s * cores_;
  c.active_cpu_s = std::min(
      c.total_cpu_s,
      base_load_ * elapsed_s + kActiveSecondsPerSegment * segments_served_);
  return c;
}

std::string segment_payload(const std::string& video_id, int index,
                            uint64_t size_bytes) {
  uint64_t seed = Rng::derive_seed(fnv1a64(video_id),
                                   "segment-" + std::to_string(index));
  Rng rng(seed);
  std::string out;
  out.resize(size_bytes);
  size_t i = 0;
  while (i < size_bytes) {
    uint64_t word = rng.next_u64();
    for (int b = 0; b < 8 && i < size_bytes; ++b, ++i) {
      out[i] = static_cast<char>(word >> (8 * b));
    }
  }
  return out;
}

OriginServer::OriginServer(NodeId id, double start_ms, double cpu_base_load)
    : id_(std::move(id)), cpu_(id_, start_ms, cpu_base_load),
      throttle_bytes_per_s_(kUnlimitedRate) {}

void OriginServer::provision(const Manifest& manifest) {
  std::lock_guard<std::mutex> lk(mu_);
  if (manifests_.count(manifest.video_id)) {
    throw Error("already-provisioned", manifest.video_id + " already exists on " + id_);
  }
  segments_[manifest.init_segment.name] =
      StoredSegment{manifest.video_id, -1, manifest.init_segment.size_bytes};
  for (const SegmentRef& seg : manifest.segments) {
    segments_[seg.name] = StoredSegment{manifest.video_id, seg.index, seg.size_bytes};
  }
  manifests_[manifest.video_id] = manifest;
}

const Manifest* OriginServer::find_manifest(const std::string& video_id) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = manifests_.find(video_id);
  return it == manifests_.end() ? nullptr : &it->second;
}

void OriginServer::set_throttle(double bytes_per_s) {
  if (bytes_per_s != kUnlimitedRate && bytes_per_s <= 0) {
    throw Error("invalid-rate", "throttle rate must be positive");
  }
  std::lock_guard<std::mutex> lk(mu_);
  throttle_bytes_per_s_ = bytes_per_s;
}

HttpResponse OriginServer::serve_manifest(const std::string& video_id) const {
  const Manifest* m = find_manifest(video_id);
  if (!m) return HttpResponse{404, "not-found", "text/plain", ""};
  return HttpResponse{200, mpd_to_xml(*m), "application/dash+xml", ""};
}

HttpResponse OriginServer::serve_segment(ActivityContext& ctx, const std::string& name) {
  StoredSegment seg;
  double throttle;
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = segments_.find(name);
    if (it == segments_.end()) return HttpResponse{404, "not-found", "text/plain", ""};
    seg = it->second;
    throttle = throttle_bytes_per_s_;
  }
  if (throttle != kUnlimitedRate) {
    ctx.sleep_ms(static_cast<double>(seg.size_bytes) / throttle * 1000.0);
  }
  cpu_.on_segment_served();
  return HttpResponse{200, segment_payload(seg.video_id, seg.index, seg.size_bytes),
                      "video/mp4", ""};
}

HttpResponse OriginServer::handle(ActivityContext& ctx, const HttpRequest& req) {
  const std::string& p = req.path;
  if (p == "/echo") return HttpResponse{200, "", "text/plain", ""};
  if (p == "/metrics") {
    CpuCounters c = cpu_.counters(ctx.now_ms());
    std::vector<CounterSample> samples = {
        {"cdn_cpu_seconds_total", {{"instance", id_}, {"mode", "total"}}, c.total_cpu_s},
        {"cdn_cpu_seconds_total", {{"instance", id_}, {"mode", "active"}}, c.active_cpu_s},
    };
    return HttpResponse{200, render_prometheus_text(samples),
                        "text/plain; version=0.0.4", ""};
  }
  const std::string manifest_prefix = "/manifest/";
  if (p.rfind(manifest_prefix, 0) == 0) {
    return serve_manifest(p.substr(manifest_prefix.size()));
  }
  const std::string segment_prefix = "/segment/";
  if (p.rfind(segment_prefix, 0) == 0) {
    return serve_segment(ctx, p.substr(segment_prefix.size()));
  }
  return HttpResponse{404, "not-found", "text/plain", ""};
}

}  // namespace cdnsim
