#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cdnsim/link.hpp"
#include "cdnsim/scenario.hpp"

namespace cdnsim {

// Star-of-two-hubs wiring: every server has one link to the gateway and one
// to the client; there are no other links. Node ids are deterministic
// functions of the config, and server order is the tie-break rank.
struct Topology {
  NodeId gateway;
  std::vector<NodeId> servers;
  NodeId client;
  std::map<std::pair<NodeId, NodeId>, LinkId> links;

  LinkId gateway_link(const NodeId& server) const;
  LinkId client_link(const NodeId& server) const;
  std::vector<LinkId> client_links() const;
  size_t server_index(const NodeId& server) const;  // throws unknown-server
};

// Throws Error("invalid-config") listing the violations when the config does
// not validate.
Topology build_topology(const ExperimentConfig& config);

// Creates the topology's links in the table with one-way delay = base_rtt/2
// per server and unlimited rate.
void populate_link_table(const Topology& topo, const ExperimentConfig& config,
                         LinkTable& table);

}  // namespace cdnsim
