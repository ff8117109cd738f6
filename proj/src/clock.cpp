#include "cdnsim/clock.hpp"

#include <cmath>

#include "cdnsim/error.hpp"

namespace cdnsim {

namespace detail {

struct VirtualActivity final : ActivityContext {
  VirtualActivity(VirtualScheduler* s, std::string n, uint64_t seed, bool d,
                  ActivityBody b)
      : sched(s), activity_name(std::move(n)), rng_(seed), daemon(d),
        body(std::move(b)) {}

  double now_ms() const override { return sched->now_; }
  void sleep_ms(double duration_ms) override {
    sched->yield_and_wait(this, duration_ms);
  }
  bool is_virtual() const override { return true; }
  Rng& rng() override { return rng_; }
  const std::string& name() const override { return activity_name; }

  VirtualScheduler* sched;
  std::string activity_name;
  Rng rng_;
  bool daemon;
  ActivityBody body;
  std::binary_semaphore resume{0};
  std::thread thread;
  bool cancelled = false;
  bool done = false;
  std::exception_ptr error;
};

}  // namespace detail

using detail::VirtualActivity;

VirtualScheduler::VirtualScheduler(uint64_t master_seed, double start_ms)
    : master_seed_(master_seed), now_(start_ms) {}

VirtualScheduler::~VirtualScheduler() {
  cancel_remaining();
  join_all();
}

void VirtualScheduler::spawn(const std::string& name, ActivityBody body) {
  spawn_impl(name, false, std::move(body));
}

void VirtualScheduler::spawn_daemon(const std::string& name, ActivityBody body) {
  spawn_impl(name, true, std::move(body));
}

void VirtualScheduler::spawn_impl(const std::string& name, bool daemon,
                                  ActivityBody body) {
  auto act = std::make_unique<VirtualActivity>(
      this, name, Rng::derive_seed(master_seed_, name), daemon, std::move(body));
  if (!daemon) ++foreground_alive_;
  enqueue(now_, act.get());
  act->thread = std::thread([this, a = act.get()] { thread_main(a); });
  activities_.push_back(std::move(act));
}

void VirtualScheduler::enqueue(double at_ms, VirtualActivity* act) {
  queue_.push(WakeEntry{at_ms, next_seq_++, act});
}

void VirtualScheduler::thread_main(VirtualActivity* act) {
  act->resume.acquire();
  if (!act->cancelled) {
    try {
      act->body(*act);
    } catch (ActivityCancelled&) {
    } catch (...) {
      act->error = std::current_exception();
    }
  }
  act->done = true;
  control_.release();
}

// Called on the activity's thread. Hands control back to the scheduler and
// blocks until the scheduler wakes this activity again.
void VirtualScheduler::yield_and_wait(VirtualActivity* act, double dt_ms) {
  if (act->cancelled) throw ActivityCancelled{};
  if (dt_ms < 0 || !std::isfinite(dt_ms)) dt_ms = 0;
  enqueue(now_ + dt_ms, act);
  control_.release();
  act->resume.acquire();
  if (act->cancelled) throw ActivityCancelled{};
}

void VirtualScheduler::settle(VirtualActivity* act) {
  if (!act->done) return;
  if (!act->daemon) --foreground_alive_;
  act->daemon = true;  // only decrement once
  if (act->error && !first_error_) first_error_ = act->error;
}

void VirtualScheduler::run() {
  if (ran_) throw Error("scheduler-reuse", "run() may only be called once");
  ran_ = true;
  while (foreground_alive_ > 0 && !first_error_) {
    if (queue_.empty()) {
      throw Error("scheduler-stall", "foreground activities left but nothing scheduled");
    }
    WakeEntry e = queue_.top();
    queue_.pop();
    if (e.act->done) continue;
    if (e.at_ms > now_) now_ = e.at_ms;
    e.act->resume.release();
    control_.acquire();
    settle(e.act);
  }
  cancel_remaining();
  join_all();
  if (first_error_) std::rethrow_exception(first_error_);
}

// Wakes every still-parked activity with the cancelled flag set; each throws
// out of its sleep and finishes. Every live activity has exactly one queue
// entry, so draining the queue reaches them all.
void VirtualScheduler::cancel_remaining() {
  while (!queue_.empty()) {
    WakeEntry e = queue_.top();
    queue_.pop();
    if (e.act->done) continue;
    e.act->cancelled = true;
    e.act->resume.release();
    control_.acquire();
    settle(e.act);
  }
}

void VirtualScheduler::join_all() {
  for (auto& act : activities_) {
    if (act->thread.joinable()) act->thread.join();
  }
}

// ---------------------------------------------------------------------------
// Wall runtime

struct WallRuntime::WallActivity final : ActivityContext {
  WallActivity(WallRuntime* r, std::string n, uint64_t seed, bool d, ActivityBody b)
      : rt(r), activity_name(std::move(n)), rng_(seed), daemon(d), body(std::move(b)) {}

  double now_ms() const override { return rt->now_ms(); }
  void sleep_ms(double duration_ms) override { rt->interruptible_sleep(duration_ms); }
  bool is_virtual() const override { return false; }
  Rng& rng() override { return rng_; }
  const std::string& name() const override { return activity_name; }

  WallRuntime* rt;
  std::string activity_name;
  Rng rng_;
  bool daemon;
  ActivityBody body;
  std::thread thread;
  std::atomic<bool> done{false};
};

WallRuntime::WallRuntime(uint64_t master_seed, double shutdown_deadline_s)
    : master_seed_(master_seed), shutdown_deadline_s_(shutdown_deadline_s),
      start_(std::chrono::steady_clock::now()) {}

WallRuntime::~WallRuntime() {
  stop_.store(true);
  cv_.notify_all();
  for (auto& act : activities_) {
    if (act->thread.joinable()) act->thread.join();
  }
}

double WallRuntime::now_ms() const {
  using namespace std::chrono;
  return duration<double, std::milli>(steady_clock::now() - start_).count();
}

void WallRuntime::interruptible_sleep(double duration_ms) {
  if (stop_.load()) throw ActivityCancelled{};
  if (duration_ms <= 0) return;
  std::unique_lock<std::mutex> lk(mu_);
  cv_.wait_for(lk, std::chrono::duration<double, std::milli>(duration_ms),
               [this] { return stop_.load(); });
  if (stop_.load()) throw ActivityCancelled{};
}

void WallRuntime::spawn(const std::string& name, ActivityBody body) {
  spawn_impl(name, false, std::move(body));
}

void WallRuntime::spawn_daemon(const std::string& name, ActivityBody body) {
  spawn_impl(name, true, std::move(body));
}

void WallRuntime::spawn_impl(const std::string& name, bool daemon, ActivityBody body) {
  auto act = std::make_unique<WallActivity>(
      this, name, Rng::derive_seed(master_seed_, name), daemon, std::move(body));
  act->thread = std::thread([this, a = act.get()] {
    try {
      a->body(*a);
    } catch (ActivityCancelled&) {
    } catch (...) {
      std::lock_guard<std::mutex> lk(error_mu_);
      if (!first_error_) first_error_ = std::current_exception();
    }
    a->done.store(true);
    cv_.notify_all();
  });
  activities_.push_back(std::move(act));
}

void WallRuntime::run() {
  // Wait for every foreground activity, then tear down the daemons.
  for (auto& act : activities_) {
    if (!act->daemon && act->thread.joinable()) act->thread.join();
  }
  stop_.store(true);
  cv_.notify_all();
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration<double>(shutdown_deadline_s_);
  for (auto& act : activities_) {
    if (!act->daemon || !act->thread.joinable()) continue;
    while (!act->done.load() && std::chrono::steady_clock::now() < deadline) {
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    act->thread.join();
  }
  std::lock_guard<std::mutex> lk(error_mu_);
  if (first_error_) std::rethrow_exception(first_error_);
}

void SystemClock::sleep_ms(double duration_ms) {
  if (duration_ms <= 0) return;
  std::this_thread::sleep_for(std::chrono::duration<double, std::milli>(duration_ms));
}

}  // namespace cdnsim
