#include "cdnsim/mpd.hpp"

#include <cctype>
#include <cstdio>
#include <map>
#include <set>

#include "cdnsim/error.hpp"
#include "cdnsim/util.hpp"

namespace cdnsim {

std::string segment_name(const std::string& video_id, int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", index);
  return video_id + "_seg_" + buf + ".mp4";
}

std::string init_segment_name(const std::string& video_id) {
  return video_id + "_init.mp4";
}

Manifest make_manifest(const std::string& video_id, int segment_count,
                       double segment_duration_s, uint64_t segment_size_bytes,
                       uint64_t init_size_bytes) {
  if (video_id.empty()) throw Error("invalid-manifest", "video_id is empty");
  if (segment_count < 0) throw Error("invalid-manifest", "segment_count is negative");
  if (segment_duration_s <= 0) {
    throw Error("invalid-manifest", "segment_duration_s must be positive");
  }
  Manifest m;
  m.video_id = video_id;
  m.segment_count = segment_count;
  m.segment_duration_s = segment_duration_s;
  m.init_segment = SegmentRef{init_segment_name(video_id), init_size_bytes, -1};
  m.segments.reserve(static_cast<size_t>(segment_count));
  for (int i = 0; i < segment_count; ++i) {
    m.segments.push_back(SegmentRef{segment_name(video_id, i), segment_size_bytes, i});
  }
  return m;
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

[[noreturn]] void fail(const std::string& what) {
  throw Error("parse-error", "mpd: " + what);
}

// Cursor over the raw document text.
struct Cursor {
  const std::string& text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool starts_with(const std::string& prefix) const {
    return text.compare(pos, prefix.size(), prefix) == 0;
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
};

struct Tag {
  std::string name;
  std::map<std::string, std::string> attrs;
  bool self_closing = false;
  bool closing = false;  // </name>
};

std::string xml_unescape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (size_t i = 0; i < s.size();) {
    if (s[i] != '&') {
      out += s[i++];
      continue;
    }
    size_t semi = s.find(';', i);
    if (semi == std::string::npos) fail("unterminated entity");
    std::string ent = s.substr(i, semi - i + 1);
    if (ent == "&amp;") out += '&';
    else if (ent == "&lt;") out += '<';
    else if (ent == "&gt;") out += '>';
    else if (ent == "&quot;") out += '"';
    else fail("unknown entity " + ent);
    i = semi + 1;
  }
  return out;
}

Tag read_tag(Cursor& c) {
  c.skip_ws();
  if (c.pos >= c.text.size() || c.text[c.pos] != '<') fail("expected a tag");
  ++c.pos;
  Tag tag;
  if (c.pos < c.text.size() && c.text[c.pos] == '/') {
    tag.closing = true;
    ++c.pos;
  }
  size_t start = c.pos;
  while (c.pos < c.text.size() &&
         (std::isalnum(static_cast<unsigned char>(c.text[c.pos])) || c.text[c.pos] == '_')) {
    ++c.pos;
  }
  tag.name = c.text.substr(start, c.pos - start);
  if (tag.name.empty()) fail("tag with no name");
  while (true) {
    c.skip_ws();
    if (c.pos >= c.text.size()) fail("unterminated tag <" + tag.name);
    char ch = c.text[c.pos];
    if (ch == '>') {
      ++c.pos;
      return tag;
    }
    if (ch == '/') {
      ++c.pos;
      if (c.pos >= c.text.size() || c.text[c.pos] != '>') fail("malformed self-closing tag");
      ++c.pos;
      tag.self_closing = true;
      return tag;
    }
    if (tag.closing) fail("attributes on a closing tag");
    size_t astart = c.pos;
    while (c.pos < c.text.size() &&
           (std::isalnum(static_cast<unsigned char>(c.text[c.pos])) || c.text[c.pos] == '_')) {
      ++c.pos;
    }
    std::string attr = c.text.substr(astart, c.pos - astart);
    if (attr.empty()) fail("bad attribute in <" + tag.name + ">");
    c.skip_ws();
    if (c.pos >= c.text.size() || c.text[c.pos] != '=') fail("attribute without value");
    ++c.pos;
    c.skip_ws();
    if (c.pos >= c.text.size() || c.text[c.pos] != '"') fail("attribute value must be quoted");
    ++c.pos;
    size_t vstart = c.pos;
    while (c.pos < c.text.size() && c.text[c.pos] != '"') ++c.pos;
    if (c.pos >= c.text.size()) fail("unterminated attribute value");
    std::string value = c.text.substr(vstart, c.pos - vstart);
    ++c.pos;
    if (!tag.attrs.emplace(attr, xml_unescape(value)).second) {
      fail("duplicate attribute " + attr);
    }
  }
}

std::string require_attr(const Tag& tag, const std::string& name) {
  auto it = tag.attrs.find(name);
  if (it == tag.attrs.end()) fail("<" + tag.name + "> missing attribute " + name);
  return it->second;
}

uint64_t parse_size(const std::string& s) {
  if (s.empty()) fail("empty sizeBytes");
  uint64_t v = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) fail("sizeBytes is not an integer");
    v = v * 10 + static_cast<uint64_t>(c - '0');
  }
  return v;
}

}  // namespace

std::string mpd_to_xml(const Manifest& manifest) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<MPD videoId=\"" + xml_escape(manifest.video_id) + "\" segmentCount=\"" +
         std::to_string(manifest.segment_count) + "\" segmentDurationS=\"" +
         format_double(manifest.segment_duration_s) + "\">\n";
  out += "  <Init name=\"" + xml_escape(manifest.init_segment.name) + "\"/>\n";
  for (const SegmentRef& seg : manifest.segments) {
    out += "  <Segment name=\"" + xml_escape(seg.name) + "\" sizeBytes=\"" +
           std::to_string(seg.size_bytes) + "\"/>\n";
  }
  out += "</MPD>\n";
  return out;
}

Manifest mpd_from_xml(const std::string& text) {
  Cursor c{text};
  c.skip_ws();
  if (c.starts_with("<?")) {
    size_t end = c.text.find("?>", c.pos);
    if (end == std::string::npos) fail("unterminated xml declaration");
    c.pos = end + 2;
  }
  Tag root = read_tag(c);
  if (root.closing || root.name != "MPD") fail("root element must be MPD");
  if (root.self_closing) fail("MPD element has no children");

  Manifest m;
  m.video_id = require_attr(root, "videoId");
  std::string count_text = require_attr(root, "segmentCount");
  for (char ch : count_text) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) fail("segmentCount is not an integer");
  }
  if (count_text.empty()) fail("segmentCount is empty");
  m.segment_count = std::stoi(count_text);
  m.segment_duration_s = parse_double(require_attr(root, "segmentDurationS"));
  if (m.segment_duration_s <= 0) fail("segmentDurationS must be positive");
  if (m.video_id.empty()) fail("videoId is empty");

  bool saw_init = false;
  std::set<std::string> names;
  while (true) {
    Tag tag = read_tag(c);
    if (tag.closing) {
      if (tag.name != "MPD") fail("unexpected closing tag </" + tag.name + ">");
      break;
    }
    if (!tag.self_closing) fail("<" + tag.name + "> children must be self-closing");
    if (tag.name == "Init") {
      if (saw_init) fail("multiple Init elements");
      saw_init = true;
      m.init_segment = SegmentRef{require_attr(tag, "name"), 0, -1};
      if (!names.insert(m.init_segment.name).second) fail("duplicate segment name");
    } else if (tag.name == "Segment") {
      SegmentRef seg;
      seg.name = require_attr(tag, "name");
      seg.size_bytes = parse_size(require_attr(tag, "sizeBytes"));
      seg.index = static_cast<int>(m.segments.size());
      if (!names.insert(seg.name).second) fail("duplicate segment name " + seg.name);
      if (seg.name.size() < 4 || seg.name.substr(seg.name.size() - 4) != ".mp4") {
        fail("segment name must end with .mp4: " + seg.name);
      }
      m.segments.push_back(std::move(seg));
    } else {
      fail("unexpected element <" + tag.name + ">");
    }
  }
  if (!c.at_end()) fail("trailing content after </MPD>");
  if (!saw_init) fail("missing Init element");
  if (static_cast<int>(m.segments.size()) != m.segment_count) {
    fail("segmentCount=" + std::to_string(m.segment_count) + " but document lists " +
         std::to_string(m.segments.size()) + " segments");
  }
  return m;
}

}  // namespace cdnsim
