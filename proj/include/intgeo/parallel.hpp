#pragma once

#include <cstdint>
#include <functional>
#include <string>

namespace intgeo {

/// Value contributed by one Monte Carlo trial, plus how many times the trial
/// had to be redrawn before producing it.
struct TrialOutcome {
  double value = 0.0;
  int redraws = 0;
};

/// Mean, standard error and bookkeeping of a finished Monte Carlo run.
struct McResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  std::int64_t redraws = 0;
};

/// Runs `trials` independent trials and reduces them deterministically.
///
/// Trials are grouped into fixed chunks of 1024 consecutive indices; chunk
/// partial sums are combined in chunk order, so the result is bit-identical
/// for any worker count. `trial_fn` must depend only on the trial index
/// (derive its random stream from the index).
McResult run_trials(std::int64_t trials, int threads,
                    const std::function<TrialOutcome(std::int64_t)>& trial_fn);

/// Default worker count when a caller passes threads <= 0.
int default_thread_count();

}  // namespace intgeo
