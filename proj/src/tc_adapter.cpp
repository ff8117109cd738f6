#include "cdnsim/tc_adapter.hpp"

#include <cstdlib>

#include "cdnsim/error.hpp"

namespace cdnsim {

std::string TcCommands::add(const std::string& iface, int delay_ms) {
  return "tc qdisc add dev " + iface + " root netem delay " +
         std::to_string(delay_ms) + "ms";
}

std::string TcCommands::change(const std::string& iface, int delay_ms) {
  return "tc qdisc change dev " + iface + " root netem delay " +
         std::to_string(delay_ms) + "ms";
}

std::string TcCommands::del(const std::string& iface) {
  return "tc qdisc del dev " + iface + " root netem";
}

void ShellTcAdapter::apply(int delay_ms) {
  std::string cmd = installed_ ? TcCommands::change(iface_, delay_ms)
                               : TcCommands::add(iface_, delay_ms);
  if (std::system(cmd.c_str()) != 0) {
    throw Error("tc-failed", cmd);
  }
  installed_ = true;
}

void ShellTcAdapter::clear() {
  if (!installed_) return;
  if (std::system(TcCommands::del(iface_).c_str()) != 0) {
    throw Error("tc-failed", "failed to remove qdisc on " + iface_);
  }
  installed_ = false;
}

}  // namespace cdnsim
