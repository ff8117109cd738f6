#include "cdnsim/delay_mutator.hpp"

#include "cdnsim/error.hpp"

namespace cdnsim {

MutationStep delay_mutator_step(const DelayMutatorConfig& cfg, LinkTable& links,
                                const LinkId& link, Rng& rng) {
  if (cfg.min_delay_ms < 0 || cfg.min_delay_ms > cfg.max_delay_ms) {
    throw Error("invalid-config", "delay mutator bounds are inverted or negative");
  }
  MutationStep step;
  step.applied_delay_ms =
      static_cast<int>(rng.uniform_int(cfg.min_delay_ms, cfg.max_delay_ms));
  links.apply_delay(link, static_cast<double>(step.applied_delay_ms));
  step.sleep_s = static_cast<double>(poisson_sample(cfg.sleep_lambda_s, rng));
  return step;
}

MutationLog::MutationLog(const std::string& path, Timebase timebase)
    : writer_(path), timebase_(timebase) {
  writer_.write_row({"timestamp", "link_id", "delay_ms", "sleep_s"});
}

void MutationLog::record(double now_ms, const LinkId& link, const MutationStep& step) {
  writer_.write_row({timebase_.iso8601(now_ms), link,
                     std::to_string(step.applied_delay_ms),
                     format_double(step.sleep_s)});
}

void delay_mutator_loop(ActivityContext& ctx, const DelayMutatorConfig& cfg,
                        LinkTable& links, const LinkId& link, MutationLog* log) {
  while (true) {
    MutationStep step = delay_mutator_step(cfg, links, link, ctx.rng());
    if (log) log->record(ctx.now_ms(), link, step);
    // A zero draw must still yield so the loop stays cancellable.
    ctx.sleep_ms(step.sleep_s > 0 ? step.sleep_s * 1000.0 : 0.0);
  }
}

}  // namespace cdnsim
