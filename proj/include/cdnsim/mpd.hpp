#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cdnsim {

// One entry of a manifest. index is the 0-based playback position; the init
// segment uses index -1.
struct SegmentRef {
  std::string name;
  uint64_t size_bytes = 0;
  int index = 0;
};

struct Manifest {
  std::string video_id;
  int segment_count = 0;
  double segment_duration_s = 0.0;
  SegmentRef init_segment;
  std::vector<SegmentRef> segments;  // exactly segment_count entries, playback order
};

std::string segment_name(const std::string& video_id, int index);
std::string init_segment_name(const std::string& video_id);

Manifest make_manifest(const std::string& video_id, int segment_count,
                       double segment_duration_s, uint64_t segment_size_bytes,
                       uint64_t init_size_bytes = 4096);

// Minimal MPD document: <MPD videoId=".." segmentCount=".." segmentDurationS="..">
// with one <Init name=".."/> and segmentCount <Segment name=".." sizeBytes=".."/>
// children in playback order. mpd_from_xml throws Error("parse-error") on
// malformed documents or when the children contradict the declared count.
std::string mpd_to_xml(const Manifest& manifest);
Manifest mpd_from_xml(const std::string& text);

}  // namespace cdnsim
