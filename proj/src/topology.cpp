#include "cdnsim/topology.hpp"

#include "cdnsim/error.hpp"

namespace cdnsim {

LinkId Topology::gateway_link(const NodeId& server) const {
  auto it = links.find({gateway, server});
  if (it == links.end()) {
    throw Error("unknown-server", "no gateway link for '" + server + "'");
  }
  return it->second;
}

LinkId Topology::client_link(const NodeId& server) const {
  auto it = links.find({client, server});
  if (it == links.end()) {
    throw Error("unknown-server", "no client link for '" + server + "'");
  }
  return it->second;
}

std::vector<LinkId> Topology::client_links() const {
  std::vector<LinkId> out;
  out.reserve(servers.size());
  for (const auto& s : servers) out.push_back(client_link(s));
  return out;
}

size_t Topology::server_index(const NodeId& server) const {
  for (size_t i = 0; i < servers.size(); ++i) {
    if (servers[i] == server) return i;
  }
  throw Error("unknown-server", "no server '" + server + "' in topology");
}

Topology build_topology(const ExperimentConfig& config) {
  auto violations = validate_config(config);
  if (!violations.empty()) {
    std::string msg = "config invalid:";
    for (const auto& v : violations) msg += " [" + v.code + "]";
    throw Error("invalid-config", msg);
  }

  Topology topo;
  topo.gateway = "gateway";
  topo.client = "client";
  for (int i = 1; i <= config.server_count; ++i) {
    NodeId server = "s" + std::to_string(i);
    topo.servers.push_back(server);
    topo.links[{topo.gateway, server}] = "gw--" + server;
    topo.links[{topo.client, server}] = "cl--" + server;
  }
  return topo;
}

void populate_link_table(const Topology& topo, const ExperimentConfig& config,
                         LinkTable& table) {
  for (size_t i = 0; i < topo.servers.size(); ++i) {
    double one_way = config.base_rtt_ms[i] / 2.0;
    table.add_link(topo.gateway_link(topo.servers[i]), one_way);
    table.add_link(topo.client_link(topo.servers[i]), one_way);
  }
}

}  // namespace cdnsim
