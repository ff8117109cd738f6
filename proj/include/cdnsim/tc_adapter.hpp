#pragma once

#include <string>

namespace cdnsim {

// Applies a one-way delay to a real network interface. The virtual layer
// never needs this; it exists for wall-mode runs on hosts where shaping real
// traffic is wanted.
class TrafficControlAdapter {
 public:
  virtual ~TrafficControlAdapter() = default;
  virtual void apply(int delay_ms) = 0;
  virtual void clear() = 0;
};

// Builds the tc command lines without running anything.
struct TcCommands {
  static std::string add(const std::string& iface, int delay_ms);
  static std::string change(const std::string& iface, int delay_ms);
  static std::string del(const std::string& iface);
};

// Shells out to tc(8). Requires root and a real interface; construct it only
// on explicit operator request. apply() issues change and falls back to add
// when no qdisc exists yet; failures raise Error("tc-failed").
class ShellTcAdapter : public TrafficControlAdapter {
 public:
  explicit ShellTcAdapter(std::string iface) : iface_(std::move(iface)) {}
  void apply(int delay_ms) override;
  void clear() override;

 private:
  std::string iface_;
  bool installed_ = false;
};

}  // namespace cdnsim
