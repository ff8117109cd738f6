#pragma once

#include "cdnsim/clock.hpp"
#include "cdnsim/csv.hpp"
#include "cdnsim/link.hpp"
#include "cdnsim/scenario.hpp"
#include "cdnsim/util.hpp"

namespace cdnsim {

struct MutationStep {
  int applied_delay_ms = 0;
  double sleep_s = 0.0;
};

// One mutation step: draw an integer delay uniformly from
// [min_delay_ms, max_delay_ms] (both inclusive), replace the link's delay
// with it, then draw the Poisson sleep that separates steps.
MutationStep delay_mutator_step(const DelayMutatorConfig& cfg, LinkTable& links,
                                const LinkId& link, Rng& rng);

// Shared single-writer mutation log: "timestamp,link_id,delay_ms,sleep_s".
class MutationLog {
public:
  MutationLog(const std::string& path, Timebase timebase);
  void record(double now_ms, const LinkId& link, const MutationStep& step);
  const std::string& path() const { return writer_.path(); }

private:
  CsvWriter writer_;
  Timebase timebase_;
};

// Runs the mutation loop on one link until cancelled.
void delay_mutator_loop(ActivityContext& ctx, const DelayMutatorConfig& cfg,
                        LinkTable& links, const LinkId& link, MutationLog* log);

}  // namespace cdnsim
