#include "cdnsim/wall_http.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include <httplib.h>

#include "cdnsim/error.hpp"
#include "cdnsim/random.hpp"

namespace cdnsim {

struct WallHttpServer::Impl {
  NodeId self;
  int port;
  VirtualHttpHandler handler;
  uint64_t seed;
  LinkDelayFn delay_of;
  httplib::Server server;
  std::thread thread;
  SystemClock clock;
  std::atomic<uint64_t> request_counter{0};
};

WallHttpServer::WallHttpServer(NodeId self, int port, VirtualHttpHandler handler,
                               uint64_t seed, LinkDelayFn delay_of)
    : impl_(std::make_unique<Impl>()) {
  impl_->self = std::move(self);
  impl_->port = port;
  impl_->handler = std::move(handler);
  impl_->seed = seed;
  impl_->delay_of = std::move(delay_of);

  // No SO_REUSEPORT (httplib's default): a port collision must fail the
  // bind, not silently split traffic between two listeners.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR,
               reinterpret_cast<const void*>(&yes), sizeof(yes));
  });

  impl_->server.Get(".*", [impl = impl_.get()](const httplib::Request& req,
                                               httplib::Response& res) {
    HttpRequest r;
    r.path = req.path;
    if (!req.params.empty()) {
      for (const auto& [k, v] : req.params) {
        if (!r.query.empty()) r.query += '&';
        r.query += k + "=" + v;
      }
    }
    r.url = "http://127.0.0.1:" + std::to_string(impl->port) + req.path;

    uint64_t n = impl->request_counter.fetch_add(1);
    BasicActivityContext ctx(
        impl->clock, Rng::derive_seed(impl->seed, "request-" + std::to_string(n)),
        impl->self + "-request");

    if (impl->delay_of && req.has_header("X-From")) {
      double one_way = impl->delay_of(req.get_header_value("X-From"));
      if (one_way > 0) ctx.sleep_ms(2.0 * one_way);
    }

    HttpResponse out = impl->handler(ctx, r);
    res.status = out.status;
    if (!out.location.empty()) res.set_header("Location", out.location);
    res.set_content(out.body, out.content_type);
  });
}

WallHttpServer::~WallHttpServer() { stop(); }

void WallHttpServer::start() {
  if (!impl_->server.bind_to_port("127.0.0.1", impl_->port)) {
    throw Error("listen-failed",
                impl_->self + ": cannot bind 127.0.0.1:" + std::to_string(impl_->port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  for (int i = 0; i < 200 && !impl_->server.is_running(); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  if (!impl_->server.is_running()) {
    throw Error("listen-failed", impl_->self + ": server did not come up");
  }
}

void WallHttpServer::stop() {
  if (impl_->server.is_running()) impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int WallHttpServer::port() const { return impl_->port; }

FetchOutcome WallFetcher::fetch_once(ActivityContext& ctx, const std::string& url) {
  FetchOutcome out;
  out.final_url = url;
  auto t0 = std::chrono::steady_clock::now();
  auto done = [&](FetchOutcome o) {
    o.duration_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
    return o;
  };

  ParsedUrl parsed;
  try {
    parsed = parse_url(url);
  } catch (const Error&) {
    out.error = "invalid-url";
    return done(out);
  }

  httplib::Client cli(parsed.host, parsed.port);
  auto timeout = std::chrono::milliseconds(static_cast<long>(timeout_ms_));
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  cli.set_follow_location(false);

  std::string target = parsed.path;
  if (!parsed.query.empty()) target += "?" + parsed.query;
  httplib::Headers headers = {{"X-From", vantage_}};
  httplib::Result res = cli.Get(target, headers);
  if (!res) {
    switch (res.error()) {
      case httplib::Error::Connection:
      case httplib::Error::ConnectionTimeout:
        out.error = "connection-refused";
        break;
      case httplib::Error::Read:
      case httplib::Error::Write:
        out.error = "timeout";
        break;
      default:
        out.error = "transport-error";
    }
    return done(out);
  }
  out.ok = true;
  out.response.status = res->status;
  out.response.body = res->body;
  if (res->has_header("Content-Type")) {
    out.response.content_type = res->get_header_value("Content-Type");
  }
  if (res->has_header("Location")) {
    out.response.location = res->get_header_value("Location");
  }
  out.status_chain = {res->status};
  (void)ctx;
  return done(out);
}

}  // namespace cdnsim
