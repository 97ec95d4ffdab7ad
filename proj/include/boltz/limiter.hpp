#pragma once

#include "boltz/transport.hpp"

namespace boltz {

struct LimiterConfig {
  bool enabled = false;
  /// Uniform interior samples per cell used to estimate extrema; 0 selects max(k + 3, 8).
  int sample_count = 0;

  int samples_for(int degree) const;
};

/// Linear rescaling p~ = theta (p - pbar) + pbar of every shifted cell polynomial so that its sampled
/// range stays inside the range of the upstream cells of `before` it was reconstructed from.
/// `shifted` must equal shift_apply(plan, before). Returns `shifted` unchanged when disabled.
DistributionField lmpp_apply(const DistributionField& shifted, const DistributionField& before, const ShiftPlan& plan,
                             const LimiterConfig& cfg, long* limited_count = nullptr);

}  // namespace boltz
