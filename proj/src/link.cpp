#include "cdnsim/link.hpp"

#include <cmath>

#include "cdnsim/error.hpp"

namespace cdnsim {

LinkId LinkTable::add_link(const LinkId& id, double one_way_delay_ms,
                           double rate_limit_bytes_per_s) {
  std::lock_guard<std::mutex> lk(mu_);
  if (links_.count(id)) {
    throw Error("duplicate-link", "link '" + id + "' already exists");
  }
  if (one_way_delay_ms < 0) {
    throw Error("invalid-delay", "link delay must be >= 0");
  }
  if (!(rate_limit_bytes_per_s > 0)) {
    throw Error("invalid-rate", "link rate must be positive or unlimited");
  }
  links_[id] = LinkState{id, one_way_delay_ms, rate_limit_bytes_per_s, 0};
  order_.push_back(id);
  return id;
}

bool LinkTable::has(const LinkId& id) const {
  std::lock_guard<std::mutex> lk(mu_);
  return links_.count(id) > 0;
}

LinkState& LinkTable::find_locked(const LinkId& id) {
  auto it = links_.find(id);
  if (it == links_.end()) {
    throw Error("unknown-link", "no link '" + id + "'");
  }
  return it->second;
}

const LinkState& LinkTable::find_locked(const LinkId& id) const {
  auto it = links_.find(id);
  if (it == links_.end()) {
    throw Error("unknown-link", "no link '" + id + "'");
  }
  return it->second;
}

LinkState LinkTable::snapshot(const LinkId& id) const {
  std::lock_guard<std::mutex> lk(mu_);
  return find_locked(id);
}

LinkState LinkTable::apply_delay(const LinkId& id, double delay_ms) {
  if (delay_ms < 0 || !std::isfinite(delay_ms)) {
    throw Error("invalid-delay", "delay must be finite and >= 0");
  }
  std::lock_guard<std::mutex> lk(mu_);
  LinkState& st = find_locked(id);
  st.one_way_delay_ms = delay_ms;
  ++st.epoch;
  return st;
}

LinkState LinkTable::set_rate(const LinkId& id, double rate_limit_bytes_per_s) {
  if (!(rate_limit_bytes_per_s > 0)) {
    throw Error("invalid-rate", "rate must be positive or unlimited");
  }
  std::lock_guard<std::mutex> lk(mu_);
  LinkState& st = find_locked(id);
  st.rate_limit_bytes_per_s = rate_limit_bytes_per_s;
  ++st.epoch;
  return st;
}

double LinkTable::transmit(const LinkId& id, uint64_t payload_bytes,
                           double send_time_ms) const {
  return transmit(snapshot(id), payload_bytes, send_time_ms);
}

double LinkTable::transmit(const LinkState& snap, uint64_t payload_bytes,
                           double send_time_ms) {
  double serialization_ms = 0.0;
  if (std::isfinite(snap.rate_limit_bytes_per_s)) {
    serialization_ms =
        static_cast<double>(payload_bytes) / snap.rate_limit_bytes_per_s * 1000.0;
  }
  return send_time_ms + snap.one_way_delay_ms + serialization_ms;
}

std::vector<LinkId> LinkTable::link_ids() const {
  std::lock_guard<std::mutex> lk(mu_);
  return order_;
}

}  // namespace cdnsim
