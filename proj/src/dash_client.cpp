#include "cdnsim/dash_client.hpp"

#include <fstream>

#include <json.hpp>

#include "cdnsim/csv.hpp"
#include "cdnsim/error.hpp"
#include "cdnsim/mpd.hpp"
#include "cdnsim/util.hpp"

namespace cdnsim {

bool is_media_segment(const std::string& url) {
  std::string s = strip_query(url);
  return s.size() >= 4 && s.compare(s.size() - 4, 4, ".mp4") == 0;
}

std::string extract_file_name(const std::string& url) {
  std::string s = strip_query(url);
  size_t slash = s.rfind('/');
  std::string name = slash == std::string::npos ? s : s.substr(slash + 1);
  if (name.empty()) {
    throw Error("empty-filename", "no file name in url: " + url);
  }
  return name;
}

std::string construct_redirect_url(const std::string& file_name,
                                   const std::string& base) {
  if (file_name.empty()) throw Error("empty-filename", "file name is empty");
  if (base.empty() || base.back() != '/') {
    throw Error("invalid-base", "redirect base must end with '/': " + base);
  }
  return base + file_name;
}

TokenBucket::TokenBucket(double rate_bytes_per_s, double capacity_bytes,
                         double quantum_ms)
    : rate_(rate_bytes_per_s), capacity_(capacity_bytes), quantum_ms_(quantum_ms) {
  if (rate_ != kUnlimitedRate && rate_ <= 0) {
    throw Error("invalid-rate", "token bucket rate must be positive");
  }
}

void TokenBucket::pace(ActivityContext& ctx, uint64_t bytes) {
  if (unlimited()) return;
  uint64_t remaining = bytes;
  while (true) {
    uint64_t take = std::min(remaining, static_cast<uint64_t>(available_));
    available_ -= static_cast<double>(take);
    remaining -= take;
    if (remaining == 0) return;
    ctx.sleep_ms(quantum_ms_);
    available_ = std::min(capacity_, available_ + rate_ * quantum_ms_ / 1000.0);
  }
}

double save_and_throttle_download(ActivityContext& ctx, const std::string& bytes,
                                  const std::filesystem::path& destination,
                                  double rate_bytes_per_s) {
  double t0 = ctx.now_ms();
  TokenBucket bucket(rate_bytes_per_s);  // throws invalid-rate
  bucket.pace(ctx, bytes.size());
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io-error", "cannot open " + destination.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw Error("io-error", "write failed for " + destination.string());
  return ctx.now_ms() - t0;
}

namespace {

// "http://host:port/anything?x" -> "http://host:port"
std::string url_origin(const std::string& url) {
  ParsedUrl p = parse_url(url);
  std::string origin = p.scheme + "://" + p.host;
  if (p.port != 80) origin += ":" + std::to_string(p.port);
  return origin;
}

Manifest fetch_manifest(ActivityContext& ctx, HttpFetcher& fetcher,
                        const std::string& manifest_url) {
  FetchOutcome o = fetch_with_redirects(fetcher, ctx, manifest_url);
  if (!o.ok || o.response.status != 200) {
    std::string why = o.ok ? "status " + std::to_string(o.response.status) : o.error;
    throw Error("manifest-unreachable", manifest_url + ": " + why);
  }
  return mpd_from_xml(o.response.body);
}

}  // namespace

StreamReport stream(ActivityContext& ctx, HttpFetcher& fetcher,
                    const StreamSession& session) {
  double session_start = ctx.now_ms();
  Manifest manifest = fetch_manifest(ctx, fetcher, session.manifest_url);
  std::string origin = url_origin(session.manifest_url);

  StreamReport report;
  report.video_id = manifest.video_id;

  std::vector<SegmentRef> order;
  order.push_back(manifest.init_segment);
  order.insert(order.end(), manifest.segments.begin(), manifest.segments.end());

  for (const SegmentRef& ref : order) {
    // The URL the player would request, before interception.
    std::string player_url = origin + "/segment/" + ref.name;
    std::string request_url = player_url;
    if (is_media_segment(player_url)) {
      request_url =
          construct_redirect_url(extract_file_name(player_url), session.redirect_base);
    }

    SegmentLogEntry entry;
    entry.name = ref.name;
    entry.request_url = request_url;

    double t0 = ctx.now_ms();
    FetchOutcome o = fetch_with_redirects(fetcher, ctx, request_url);
    entry.final_url = o.final_url;
    entry.status = o.status_chain.empty() ? 0 : o.status_chain.back();

    bool delivered = o.ok && o.response.status == 200;
    if (delivered) {
      entry.bytes = o.response.body.size();
      save_and_throttle_download(ctx, o.response.body,
                                 session.out_dir / ref.name,
                                 session.client_throttle);
      report.bytes_total += entry.bytes;
      if (ref.index >= 0) ++report.segments_fetched;
    } else {
      ++report.segments_failed;
    }
    entry.duration_ms = ctx.now_ms() - t0;
    report.per_segment.push_back(std::move(entry));
  }
  report.duration_ms = ctx.now_ms() - session_start;
  return report;
}

int download_mpd_and_segments(ActivityContext& ctx, HttpFetcher& fetcher,
                              const std::string& manifest_url,
                              double rate_bytes_per_s,
                              const std::filesystem::path& out_dir) {
  Manifest manifest = fetch_manifest(ctx, fetcher, manifest_url);
  std::string origin = url_origin(manifest_url);

  std::vector<SegmentRef> order;
  order.push_back(manifest.init_segment);
  order.insert(order.end(), manifest.segments.begin(), manifest.segments.end());

  int downloaded = 0;
  for (const SegmentRef& ref : order) {
    std::string url = origin + "/segment/" + ref.name;
    FetchOutcome o = fetch_with_redirects(fetcher, ctx, url);
    if (!o.ok || o.response.status != 200) {
      std::string why = o.ok ? "status " + std::to_string(o.response.status) : o.error;
      throw Error("segment-failed", ref.name + ": " + why);
    }
    save_and_throttle_download(ctx, o.response.body, out_dir / ref.name,
                               rate_bytes_per_s);
    if (ref.index >= 0) ++downloaded;
  }
  return downloaded;
}

std::string stream_report_json(const StreamReport& report) {
  nlohmann::ordered_json j;
  j["video_id"] = report.video_id;
  j["segments_fetched"] = report.segments_fetched;
  j["segments_failed"] = report.segments_failed;
  j["bytes_total"] = report.bytes_total;
  j["duration_ms"] = report.duration_ms;
  j["segments"] = nlohmann::ordered_json::array();
  for (const SegmentLogEntry& e : report.per_segment) {
    j["segments"].push_back({{"name", e.name},
                             {"request_url", e.request_url},
                             {"final_url", e.final_url},
                             {"status", e.status},
                             {"bytes", e.bytes},
                             {"duration_ms", e.duration_ms}});
  }
  return j.dump(2) + "\n";
}

void write_segment_csv(const std::filesystem::path& path, const StreamReport& report) {
  CsvWriter writer(path.string());
  writer.write_row({"name", "request_url", "final_url", "status", "bytes",
                    "duration_ms"});
  for (const SegmentLogEntry& e : report.per_segment) {
    writer.write_row({e.name, e.request_url, e.final_url, std::to_string(e.status),
                      std::to_string(e.bytes), format_double(e.duration_ms)});
  }
}

}  // namespace cdnsim
