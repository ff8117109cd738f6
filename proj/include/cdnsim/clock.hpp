#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <queue>
#include <semaphore>
#include <string>
#include <thread>
#include <vector>

#include "cdnsim/random.hpp"

namespace cdnsim {

// Clock seen by simulation code. Virtual mode advances only through
// sleeps dispatched by the scheduler; wall mode maps onto real sleeps.
class Clock {
public:
  virtual ~Clock() = default;
  virtual double now_ms() const = 0;
  virtual void sleep_ms(double duration_ms) = 0;
  virtual bool is_virtual() const = 0;

  void sleep_until_ms(double t_ms) {
    double d = t_ms - now_ms();
    if (d > 0) sleep_ms(d);
  }
};

// Thrown out of sleep_ms when the runtime cancels an activity. Bodies let it
// propagate; the activity wrapper absorbs it.
struct ActivityCancelled {};

// What an activity body gets: a clock plus its own seeded RNG stream.
class ActivityContext : public Clock {
public:
  virtual Rng& rng() = 0;
  virtual const std::string& name() const = 0;
};

using ActivityBody = std::function<void(ActivityContext&)>;

// Spawns concurrent activities and drives them to completion. Foreground
// activities define the run's extent; daemons are cancelled once the last
// foreground activity finishes.
class Runtime {
public:
  virtual ~Runtime() = default;
  virtual void spawn(const std::string& name, ActivityBody body) = 0;
  virtual void spawn_daemon(const std::string& name, ActivityBody body) = 0;
  // Runs to completion; rethrows the first activity failure after stopping
  // the others.
  virtual void run() = 0;
};

namespace detail {
struct VirtualActivity;
}

// Discrete-event scheduler. Activities are cooperative threads: exactly one
// runs at any instant, woken in (wake time, enqueue sequence) order, so a
// run is a deterministic function of the master seed. Per-activity RNG
// streams are derived from (seed, activity name).
class VirtualScheduler : public Runtime {
public:
  explicit VirtualScheduler(uint64_t master_seed, double start_ms = 0.0);
  ~VirtualScheduler() override;

  VirtualScheduler(const VirtualScheduler&) = delete;
  VirtualScheduler& operator=(const VirtualScheduler&) = delete;

  void spawn(const std::string& name, ActivityBody body) override;
  void spawn_daemon(const std::string& name, ActivityBody body) override;
  void run() override;

  double now_ms() const { return now_; }

private:
  friend struct detail::VirtualActivity;

  struct WakeEntry {
    double at_ms;
    uint64_t seq;
    detail::VirtualActivity* act;
    bool operator>(const WakeEntry& o) const {
      if (at_ms != o.at_ms) return at_ms > o.at_ms;
      return seq > o.seq;
    }
  };

  void spawn_impl(const std::string& name, bool daemon, ActivityBody body);
  void enqueue(double at_ms, detail::VirtualActivity* act);
  void yield_and_wait(detail::VirtualActivity* act, double dt_ms);
  void thread_main(detail::VirtualActivity* act);
  void settle(detail::VirtualActivity* act);
  void cancel_remaining();
  void join_all();

  uint64_t master_seed_;
  double now_ = 0.0;
  uint64_t next_seq_ = 0;
  int foreground_alive_ = 0;
  bool ran_ = false;
  std::exception_ptr first_error_;
  std::priority_queue<WakeEntry, std::vector<WakeEntry>, std::greater<>> queue_;
  std::vector<std::unique_ptr<detail::VirtualActivity>> activities_;
  std::counting_semaphore<1> control_{0};
};

// Wall-clock runtime: activities are free-running threads, sleeps are real
// and interruptible. Not deterministic; used for live demos and the HTTP
// listeners.
class WallRuntime : public Runtime {
public:
  explicit WallRuntime(uint64_t master_seed, double shutdown_deadline_s = 5.0);
  ~WallRuntime() override;

  void spawn(const std::string& name, ActivityBody body) override;
  void spawn_daemon(const std::string& name, ActivityBody body) override;
  void run() override;

  double now_ms() const;
  // Sleep that wakes early (throwing ActivityCancelled) on shutdown.
  void interruptible_sleep(double duration_ms);
  bool stopping() const { return stop_.load(); }

private:
  struct WallActivity;

  void spawn_impl(const std::string& name, bool daemon, ActivityBody body);

  uint64_t master_seed_;
  double shutdown_deadline_s_;
  std::chrono::steady_clock::time_point start_;
  std::atomic<bool> stop_{false};
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::vector<std::unique_ptr<WallActivity>> activities_;
  std::exception_ptr first_error_;
  std::mutex error_mu_;
};

// Standalone clock handles for unit tests and wall-mode helper threads.
class ManualClock : public Clock {
public:
  explicit ManualClock(double start_ms = 0.0) : now_(start_ms) {}
  double now_ms() const override { return now_; }
  void sleep_ms(double duration_ms) override {
    if (duration_ms > 0) now_ += duration_ms;
  }
  bool is_virtual() const override { return true; }

private:
  double now_;
};

class SystemClock : public Clock {
public:
  SystemClock() : start_(std::chrono::steady_clock::now()) {}
  double now_ms() const override {
    using namespace std::chrono;
    return duration<double, std::milli>(steady_clock::now() - start_).count();
  }
  void sleep_ms(double duration_ms) override;
  bool is_virtual() const override { return false; }

private:
  std::chrono::steady_clock::time_point start_;
};

// ActivityContext over an external clock, for code paths that run outside a
// Runtime (wall-mode request handlers, unit tests).
class BasicActivityContext : public ActivityContext {
public:
  BasicActivityContext(Clock& clock, uint64_t seed, std::string name = "adhoc")
      : clock_(clock), rng_(seed), name_(std::move(name)) {}

  double now_ms() const override { return clock_.now_ms(); }
  void sleep_ms(double duration_ms) override { clock_.sleep_ms(duration_ms); }
  bool is_virtual() const override { return clock_.is_virtual(); }
  Rng& rng() override { return rng_; }
  const std::string& name() const override { return name_; }

private:
  Clock& clock_;
  Rng rng_;
  std::string name_;
};

}  // namespace cdnsim
