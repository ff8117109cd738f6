#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "cdnsim/clock.hpp"
#include "cdnsim/delay_mutator.hpp"
#include "cdnsim/error.hpp"
#include "cdnsim/link.hpp"
#include "cdnsim/random.hpp"

using namespace cdnsim;

namespace {

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

Moments sample_moments(double lambda, uint64_t seed, int n) {
  Rng rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = static_cast<double>(poisson_sample(lambda, rng));
    sum += v;
    sumsq += v * v;
  }
  Moments m;
  m.mean = sum / n;
  m.variance = (sumsq - sum * sum / n) / (n - 1);
  return m;
}

}  // namespace

TEST_CASE("poisson lambda zero is always zero") {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    CHECK(poisson_sample(0.0, rng) == 0);
  }
}

TEST_CASE("poisson moments match lambda") {
  const int n = 100000;
  SUBCASE("lambda 200 mean") {
    Moments m = sample_moments(200.0, 42, n);
    CHECK(m.mean > 198.0);
    CHECK(m.mean < 202.0);
  }
  SUBCASE("lambda 30 variance") {
    Moments m = sample_moments(30.0, 43, n);
    CHECK(m.variance > 28.0);
    CHECK(m.variance < 32.0);
  }
  SUBCASE("mean and variance within 5 percent for representative lambdas") {
    for (double lambda : {1.0, 30.0, 200.0}) {
      Moments m = sample_moments(lambda, 44, n);
      CHECK(std::abs(m.mean - lambda) < 0.05 * lambda);
      CHECK(std::abs(m.variance - lambda) < 0.05 * lambda);
    }
  }
}

TEST_CASE("poisson draws are deterministic per seed") {
  Rng a(7), b(7);
  for (int i = 0; i < 200; ++i) {
    CHECK(poisson_sample(5.0, a) == poisson_sample(5.0, b));
  }
}

TEST_CASE("poisson rejects negative lambda") {
  Rng rng(1);
  CHECK_THROWS_AS(poisson_sample(-1.0, rng), Error);
}

TEST_CASE("uniform_int covers both bounds inclusively") {
  Rng rng(11);
  bool saw_lo = false, saw_hi = false;
  for (int i = 0; i < 10000; ++i) {
    int64_t v = rng.uniform_int(3, 5);
    CHECK(v >= 3);
    CHECK(v <= 5);
    saw_lo |= v == 3;
    saw_hi |= v == 5;
  }
  CHECK(saw_lo);
  CHECK(saw_hi);
}

TEST_CASE("apply_delay replaces rather than accumulates") {
  LinkTable links;
  links.add_link("l1", 100.0);
  links.apply_delay("l1", 300.0);
  LinkState st = links.apply_delay("l1", 500.0);
  CHECK(st.one_way_delay_ms == 500.0);
  CHECK(st.epoch == 2);
}

TEST_CASE("apply_delay zero still bumps the epoch") {
  LinkTable links;
  links.add_link("l1", 100.0);
  LinkState st = links.apply_delay("l1", 0.0);
  CHECK(st.one_way_delay_ms == 0.0);
  CHECK(st.epoch == 1);
}

TEST_CASE("unknown link is an error") {
  LinkTable links;
  CHECK_THROWS_WITH_AS(links.apply_delay("nope", 10.0),
                       doctest::Contains("unknown-link"), Error);
  CHECK_THROWS_AS(links.transmit("nope", 1, 0.0), Error);
  CHECK_THROWS_AS(links.snapshot("nope"), Error);
}

TEST_CASE("replacement semantics hold for random mutation sequences") {
  Rng rng(99);
  LinkTable links;
  links.add_link("l1", 0.0);
  for (int trial = 0; trial < 50; ++trial) {
    int steps = 1 + static_cast<int>(rng.uniform_u64(40));
    double last = 0.0;
    uint64_t epoch_before = links.snapshot("l1").epoch;
    for (int i = 0; i < steps; ++i) {
      last = static_cast<double>(rng.uniform_int(0, 2000));
      links.apply_delay("l1", last);
    }
    LinkState st = links.snapshot("l1");
    CHECK(st.one_way_delay_ms == last);
    CHECK(st.epoch == epoch_before + static_cast<uint64_t>(steps));
  }
}

TEST_CASE("transmit arithmetic") {
  LinkTable links;
  links.add_link("delay-only", 100.0);
  links.add_link("rate-only", 0.0, 102400.0);
  links.add_link("both", 250.0, 102400.0);

  CHECK(links.transmit("delay-only", 1, 0.0) == 100.0);
  CHECK(links.transmit("rate-only", 204800, 0.0) == 2000.0);
  CHECK(links.transmit("both", 102400, 0.0) == 1250.0);
  // offset send time shifts arrival by the same amount
  CHECK(links.transmit("both", 102400, 500.0) == 1750.0);
}

TEST_CASE("transmit is monotone in payload and delay, arrival never precedes send") {
  Rng rng(5);
  LinkTable links;
  links.add_link("l", 10.0, 50000.0);
  double prev = 0.0;
  for (uint64_t bytes : {0ull, 10ull, 1000ull, 100000ull}) {
    double arrival = links.transmit("l", bytes, 0.0);
    CHECK(arrival >= prev);
    CHECK(arrival >= 0.0);
    prev = arrival;
  }
  double lo = links.transmit("l", 500, 0.0);
  links.apply_delay("l", 400.0);
  double hi = links.transmit("l", 500, 0.0);
  CHECK(hi > lo);
  for (int i = 0; i < 200; ++i) {
    uint64_t bytes = rng.uniform_u64(1 << 20);
    double send = static_cast<double>(rng.uniform_u64(10000));
    CHECK(links.transmit("l", bytes, send) >= send);
  }
}

TEST_CASE("in-flight arrivals keep the snapshot taken at send time") {
  LinkTable links;
  links.add_link("l", 100.0);
  LinkState snap = links.snapshot("l");
  links.apply_delay("l", 900.0);
  // Arrival computed from the pre-mutation snapshot is unchanged.
  CHECK(LinkTable::transmit(snap, 0, 0.0) == 100.0);
  CHECK(links.transmit("l", 0, 0.0) == 900.0);
}

TEST_CASE("delay mutator draws stay inside the configured bounds") {
  DelayMutatorConfig cfg;  // defaults 200..800
  LinkTable links;
  links.add_link("l", 0.0);
  Rng rng(123);
  int last = -1;
  for (int i = 0; i < 10000; ++i) {
    MutationStep step = delay_mutator_step(cfg, links, "l", rng);
    CHECK(step.applied_delay_ms >= 200);
    CHECK(step.applied_delay_ms <= 800);
    last = step.applied_delay_ms;
  }
  CHECK(links.snapshot("l").one_way_delay_ms == static_cast<double>(last));
  CHECK(links.snapshot("l").epoch == 10000);
}

TEST_CASE("collapsed mutator range always applies that delay") {
  DelayMutatorConfig cfg;
  cfg.min_delay_ms = 400;
  cfg.max_delay_ms = 400;
  LinkTable links;
  links.add_link("l", 0.0);
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    CHECK(delay_mutator_step(cfg, links, "l", rng).applied_delay_ms == 400);
  }
}

TEST_CASE("mutator sleep with degenerate lambda is zero") {
  DelayMutatorConfig cfg;
  cfg.sleep_lambda_s = 0.0;
  LinkTable links;
  links.add_link("l", 0.0);
  Rng rng(1);
  CHECK(delay_mutator_step(cfg, links, "l", rng).sleep_s == 0.0);
}

TEST_CASE("virtual scheduler orders events by time then spawn order") {
  VirtualScheduler sched(1);
  std::vector<std::string> trace;
  sched.spawn("a", [&](ActivityContext& ctx) {
    trace.push_back("a@" + std::to_string(static_cast<int>(ctx.now_ms())));
    ctx.sleep_ms(10);
    trace.push_back("a@" + std::to_string(static_cast<int>(ctx.now_ms())));
  });
  sched.spawn("b", [&](ActivityContext& ctx) {
    trace.push_back("b@" + std::to_string(static_cast<int>(ctx.now_ms())));
    ctx.sleep_ms(5);
    trace.push_back("b@" + std::to_string(static_cast<int>(ctx.now_ms())));
  });
  sched.run();
  CHECK(trace == std::vector<std::string>{"a@0", "b@0", "b@5", "a@10"});
}

TEST_CASE("virtual scheduler runs are deterministic") {
  auto run_once = [] {
    VirtualScheduler sched(77);
    std::vector<double> trace;
    for (int i = 0; i < 4; ++i) {
      sched.spawn("worker-" + std::to_string(i), [&trace](ActivityContext& ctx) {
        for (int k = 0; k < 20; ++k) {
          ctx.sleep_ms(static_cast<double>(ctx.rng().uniform_u64(50)));
          trace.push_back(ctx.now_ms());
        }
      });
    }
    sched.run();
    return trace;
  };
  CHECK(run_once() == run_once());
}

TEST_CASE("daemons are cancelled when foreground work completes") {
  VirtualScheduler sched(1);
  int daemon_steps = 0;
  bool daemon_observed_cancel = false;
  sched.spawn_daemon("daemon", [&](ActivityContext& ctx) {
    try {
      while (true) {
        ctx.sleep_ms(1);
        ++daemon_steps;
      }
    } catch (ActivityCancelled&) {
      daemon_observed_cancel = true;
      throw;
    }
  });
  sched.spawn("fg", [](ActivityContext& ctx) { ctx.sleep_ms(10); });
  sched.run();
  // Ticks land at t=1..9. At t=10 the foreground's wake entry was enqueued
  // earlier, so it wins the tie and the run ends before the daemon's tick.
  CHECK(daemon_steps == 9);
  CHECK(daemon_observed_cancel);
}

TEST_CASE("activity failures propagate out of run") {
  VirtualScheduler sched(1);
  sched.spawn("boom", [](ActivityContext& ctx) {
    ctx.sleep_ms(1);
    throw Error("runtime-failure", "synthetic");
  });
  sched.spawn_daemon("idle", [](ActivityContext& ctx) {
    while (true) ctx.sleep_ms(100);
  });
  CHECK_THROWS_AS(sched.run(), Error);
}

TEST_CASE("wall runtime joins daemons after foreground completion") {
  WallRuntime rt(1, 2.0);
  std::atomic<int> ticks{0};
  rt.spawn_daemon("d", [&](ActivityContext& ctx) {
    while (true) {
      ctx.sleep_ms(1);
      ++ticks;
    }
  });
  rt.spawn("fg", [](ActivityContext& ctx) { ctx.sleep_ms(20); });
  rt.run();
  CHECK(ticks.load() > 0);
}
