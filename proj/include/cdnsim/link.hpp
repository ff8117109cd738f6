#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace cdnsim {

using NodeId = std::string;
using LinkId = std::string;

inline constexpr double kUnlimitedRate = std::numeric_limits<double>::infinity();

struct LinkState {
  LinkId link_id;
  double one_way_delay_ms = 0.0;
  double rate_limit_bytes_per_s = kUnlimitedRate;
  uint64_t epoch = 0;  // bumped on every mutation
};

// Registry of virtual links. Delay mutations are replacements (remove + add
// semantics), never accumulation. Readers always get a consistent snapshot;
// an in-flight transmission keeps the snapshot taken at send time.
class LinkTable {
public:
  LinkId add_link(const LinkId& id, double one_way_delay_ms,
                  double rate_limit_bytes_per_s = kUnlimitedRate);

  bool has(const LinkId& id) const;
  LinkState snapshot(const LinkId& id) const;

  // Replaces the link delay outright and bumps the epoch.
  LinkState apply_delay(const LinkId& id, double delay_ms);
  LinkState set_rate(const LinkId& id, double rate_limit_bytes_per_s);

  // arrival = send + one_way_delay + payload/rate, from the snapshot at send
  // time.
  double transmit(const LinkId& id, uint64_t payload_bytes,
                  double send_time_ms) const;
  static double transmit(const LinkState& snap, uint64_t payload_bytes,
                         double send_time_ms);

  std::vector<LinkId> link_ids() const;  // insertion order

private:
  LinkState& find_locked(const LinkId& id);
  const LinkState& find_locked(const LinkId& id) const;

  mutable std::mutex mu_;
  std::map<LinkId, LinkState> links_;
  std::vector<LinkId> order_;
};

}  // namespace cdnsim
