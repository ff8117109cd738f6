#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cdnsim/http.hpp"
#include "cdnsim/link.hpp"

namespace cdnsim {

// Case-sensitive ".mp4" suffix test after dropping any query string.
bool is_media_segment(const std::string& url);

// Substring after the last "/" with the query string removed first.
// Throws Error("empty-filename") when that substring is empty.
std::string extract_file_name(const std::string& url);

// base + file_name with no other normalization; base must end with "/".
// Throws Error("invalid-base") / Error("empty-filename").
std::string construct_redirect_url(const std::string& file_name,
                                   const std::string& base);

// Client-side pacing. The bucket starts empty and refills at the configured
// rate in fixed quanta, so draining n bytes takes at least n/rate seconds.
class TokenBucket {
 public:
  explicit TokenBucket(double rate_bytes_per_s, double capacity_bytes = 8192.0,
                       double quantum_ms = 10.0);

  void pace(ActivityContext& ctx, uint64_t bytes);
  bool unlimited() const { return rate_ == kUnlimitedRate; }

 private:
  double rate_;
  double capacity_;
  double quantum_ms_;
  double available_ = 0.0;
};

// Writes the bytes to destination, paced through a fresh token bucket.
// Returns the elapsed milliseconds. Throws Error("invalid-rate") for
// rate <= 0 (kUnlimitedRate disables pacing) and Error("io-error").
double save_and_throttle_download(ActivityContext& ctx, const std::string& bytes,
                                  const std::filesystem::path& destination,
                                  double rate_bytes_per_s);

struct SegmentLogEntry {
  std::string name;
  std::string request_url;  // after interception/rewrite
  std::string final_url;    // after following redirects
  int status = 0;           // last observed status, 0 when no response arrived
  uint64_t bytes = 0;
  double duration_ms = 0.0;
};

struct StreamSession {
  std::string manifest_url;
  std::string redirect_base = "http://cdn.example.com/";
  double client_throttle = kUnlimitedRate;
  std::filesystem::path out_dir;  // segment files land here
};

struct StreamReport {
  std::string video_id;
  int segments_fetched = 0;  // media segments delivered with status 200
  int segments_failed = 0;
  uint64_t bytes_total = 0;
  double duration_ms = 0.0;
  std::vector<SegmentLogEntry> per_segment;  // init first, then playback order
};

// Full session: fetch + parse the manifest, then fetch init and every media
// segment in order. Media requests are rewritten onto redirect_base (the
// intercepted-request flow); failures are logged and the session moves on.
// Throws Error("manifest-unreachable") / Error("parse-error") / Error("io-error").
StreamReport stream(ActivityContext& ctx, HttpFetcher& fetcher,
                    const StreamSession& session);

// Manifest-driven sequential download straight from the manifest's host (no
// rewrite): init segment first, then each media segment through
// save_and_throttle_download. Returns the number of media segments downloaded.
int download_mpd_and_segments(ActivityContext& ctx, HttpFetcher& fetcher,
                              const std::string& manifest_url,
                              double rate_bytes_per_s,
                              const std::filesystem::path& out_dir);

std::string stream_report_json(const StreamReport& report);
void write_segment_csv(const std::filesystem::path& path, const StreamReport& report);

}  // namespace cdnsim
