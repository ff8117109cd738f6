#include "cdnsim/http.hpp"

#include <algorithm>

#include "cdnsim/error.hpp"

namespace cdnsim {

ParsedUrl parse_url(const std::string& url) {
  ParsedUrl out;
  size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos || scheme_end == 0) {
    throw Error("invalid-url", "missing scheme: " + url);
  }
  out.scheme = url.substr(0, scheme_end);
  size_t host_start = scheme_end + 3;
  size_t path_start = url.find('/', host_start);
  std::string authority = url.substr(
      host_start, path_start == std::string::npos ? std::string::npos
                                                  : path_start - host_start);
  if (authority.empty()) throw Error("invalid-url", "missing host: " + url);
  size_t colon = authority.rfind(':');
  if (colon != std::string::npos) {
    out.host = authority.substr(0, colon);
    std::string port_text = authority.substr(colon + 1);
    if (port_text.empty() ||
        !std::all_of(port_text.begin(), port_text.end(),
                     [](char c) { return c >= '0' && c <= '9'; })) {
      throw Error("invalid-url", "bad port in " + url);
    }
    out.port = std::stoi(port_text);
  } else {
    out.host = authority;
  }
  if (out.host.empty()) throw Error("invalid-url", "missing host: " + url);
  std::string rest = path_start == std::string::npos ? "/" : url.substr(path_start);
  size_t q = rest.find('?');
  if (q == std::string::npos) {
    out.path = rest;
  } else {
    out.path = rest.substr(0, q);
    out.query = rest.substr(q + 1);
  }
  return out;
}

std::string strip_query(const std::string& url) {
  size_t q = url.find('?');
  return q == std::string::npos ? url : url.substr(0, q);
}

FetchOutcome fetch_with_redirects(HttpFetcher& fetcher, ActivityContext& ctx,
                                  const std::string& url, int max_hops) {
  std::vector<int> chain;
  std::string current = url;
  double total_ms = 0.0;
  for (int hop = 0; hop < max_hops; ++hop) {
    FetchOutcome o = fetcher.fetch_once(ctx, current);
    total_ms += o.duration_ms;
    if (!o.ok) {
      o.status_chain = chain;
      o.duration_ms = total_ms;
      o.final_url = current;
      return o;
    }
    chain.push_back(o.response.status);
    if ((o.response.status == 301 || o.response.status == 302) &&
        !o.response.location.empty()) {
      current = o.response.location;
      continue;
    }
    o.status_chain = chain;
    o.duration_ms = total_ms;
    o.final_url = current;
    return o;
  }
  FetchOutcome o;
  o.error = "too-many-redirects";
  o.status_chain = chain;
  o.duration_ms = total_ms;
  o.final_url = current;
  return o;
}

VirtualNetwork::VirtualNetwork(LinkTable& links, const Topology& topo)
    : links_(links), topo_(topo) {}

void VirtualNetwork::register_handler(const NodeId& host, VirtualHttpHandler handler) {
  std::lock_guard<std::mutex> lk(mu_);
  handlers_[host] = std::move(handler);
}

void VirtualNetwork::set_down(const NodeId& host, bool down) {
  std::lock_guard<std::mutex> lk(mu_);
  down_[host] = down;
}

bool VirtualNetwork::is_down(const NodeId& host) const {
  std::lock_guard<std::mutex> lk(mu_);
  auto it = down_.find(host);
  return it != down_.end() && it->second;
}

std::optional<LinkId> VirtualNetwork::route(const NodeId& vantage,
                                            const NodeId& host) const {
  if (vantage == host) return std::nullopt;
  // Client and gateway sit on the same side of the topology; their channel
  // carries no modeled delay.
  if ((vantage == topo_.client && host == topo_.gateway) ||
      (vantage == topo_.gateway && host == topo_.client)) {
    return std::nullopt;
  }
  auto it = topo_.links.find({vantage, host});
  if (it == topo_.links.end()) it = topo_.links.find({host, vantage});
  if (it == topo_.links.end()) {
    throw Error("unknown-host", "no route from " + vantage + " to " + host);
  }
  return it->second;
}

FetchOutcome VirtualNetwork::perform(ActivityContext& ctx, const NodeId& vantage,
                                     const std::string& url, double timeout_ms) {
  FetchOutcome out;
  const double start = ctx.now_ms();
  auto give_up = [&](const std::string& error) {
    out.ok = false;
    out.error = error;
    out.duration_ms = ctx.now_ms() - start;
    out.final_url = url;
    return out;
  };
  // Sleeps toward `arrival`, but never past the timeout deadline.
  auto travel = [&](double arrival) {
    double deadline = start + timeout_ms;
    if (arrival > deadline) {
      ctx.sleep_ms(deadline - ctx.now_ms());
      return false;
    }
    ctx.sleep_ms(arrival - ctx.now_ms());
    return true;
  };

  ParsedUrl parsed;
  try {
    parsed = parse_url(url);
  } catch (const Error&) {
    return give_up("invalid-url");
  }

  std::optional<LinkId> link;
  try {
    link = route(vantage, parsed.host);
  } catch (const Error&) {
    return give_up("unknown-host");
  }
  if (is_down(parsed.host)) return give_up("connection-refused");

  VirtualHttpHandler handler;
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = handlers_.find(parsed.host);
    if (it == handlers_.end()) return give_up("connection-refused");
    handler = it->second;
  }

  HttpRequest req;
  req.url = url;
  req.path = parsed.path;
  req.query = parsed.query;

  uint64_t request_bytes = req.method.size() + url.size();
  if (link) {
    if (!travel(links_.transmit(*link, request_bytes, ctx.now_ms()))) {
      return give_up("timeout");
    }
  }
  HttpResponse resp = handler(ctx, req);
  if (ctx.now_ms() - start > timeout_ms) return give_up("timeout");
  if (link) {
    if (!travel(links_.transmit(*link, resp.body.size(), ctx.now_ms()))) {
      return give_up("timeout");
    }
  }
  out.ok = true;
  out.response = std::move(resp);
  out.status_chain = {out.response.status};
  out.final_url = url;
  out.duration_ms = ctx.now_ms() - start;
  return out;
}

}  // namespace cdnsim
