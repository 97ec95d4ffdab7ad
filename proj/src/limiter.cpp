#include "boltz/limiter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace boltz {

int LimiterConfig::samples_for(int degree) const {
  if (sample_count == 0) return std::max(degree + 3, 8);
  if (sample_count < degree + 3) throw std::invalid_argument("LimiterConfig: sample_count must be >= k + 3");
  return sample_count;
}

namespace {

// Rows: nodes, both endpoints, then uniform interior points.
std::vector<double> sampling_matrix(const NodalBasis& basis, int n_uniform, int& n_rows) {
  std::vector<double> pts(basis.nodes().begin(), basis.nodes().end());
  pts.push_back(0.0);
  pts.push_back(1.0);
  for (int m = 1; m <= n_uniform; ++m) pts.push_back(static_cast<double>(m) / (n_uniform + 1));
  n_rows = static_cast<int>(pts.size());
  const int kp = basis.size();
  std::vector<double> S(static_cast<std::size_t>(n_rows * kp));
  for (int r = 0; r < n_rows; ++r)
    for (int p = 0; p < kp; ++p) S[static_cast<std::size_t>(r * kp + p)] = basis.lagrange_eval(p, pts[static_cast<std::size_t>(r)]);
  return S;
}

double ratio(double num, double den) {
  if (std::abs(den) < 1e-14) return std::numeric_limits<double>::infinity();
  return std::abs(num / den);
}

}  // namespace

DistributionField lmpp_apply(const DistributionField& shifted, const DistributionField& before, const ShiftPlan& plan,
                             const LimiterConfig& cfg, long* limited_count) {
  if (limited_count) *limited_count = 0;
  if (!cfg.enabled) return shifted;
  if (!shifted.same_shape(before)) throw std::invalid_argument("lmpp_apply: field shape mismatch");
  const auto& disc = shifted.disc();
  const int kp = disc.basis.size();
  const int nv = disc.grid.n_points();
  const int nc = disc.mesh.n_cells();
  const std::size_t nslice = static_cast<std::size_t>(nv) * nv;
  int n_rows = 0;
  const auto S = sampling_matrix(disc.basis, cfg.samples_for(disc.basis.degree()), n_rows);

  auto extrema = [&](const double* base, std::size_t stride, double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (int r = 0; r < n_rows; ++r) {
      double v = 0.0;
      for (int p = 0; p < kp; ++p) v += S[static_cast<std::size_t>(r * kp + p)] * base[static_cast<std::size_t>(p) * stride];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  };

  // Sampled range of every background cell polynomial.
  std::vector<double> old_lo(static_cast<std::size_t>(nc) * nslice), old_hi(old_lo.size());
  const double* fb = before.values().data();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < nc; ++j)
    for (std::size_t v = 0; v < nslice; ++v) {
      const std::size_t at = static_cast<std::size_t>(j) * nslice + v;
      extrema(fb + static_cast<std::size_t>(j * kp) * nslice + v, nslice, old_lo[at], old_hi[at]);
    }

  DistributionField out = shifted;
  double* fo = out.values().data();
  const double* fs = shifted.values().data();
  long count = 0;
#pragma omp parallel for schedule(static) reduction(+ : count)
  for (int j = 0; j < nc; ++j) {
    for (int ix = 0; ix < nv; ++ix) {
      const auto up = plan.upstream(j, ix);
      const bool two = !up.clamped && plan.at(ix).alpha > 0.0;
      for (int iy = 0; iy < nv; ++iy) {
        const std::size_t v = static_cast<std::size_t>(ix) * nv + iy;
        double Mn = old_hi[static_cast<std::size_t>(up.first) * nslice + v];
        double mn = old_lo[static_cast<std::size_t>(up.first) * nslice + v];
        if (two) {
          Mn = std::max(Mn, old_hi[static_cast<std::size_t>(up.second) * nslice + v]);
          mn = std::min(mn, old_lo[static_cast<std::size_t>(up.second) * nslice + v]);
        }
        const double* p = fs + static_cast<std::size_t>(j * kp) * nslice + v;
        double lo = 0.0, hi = 0.0;
        extrema(p, nslice, lo, hi);
        double avg = 0.0;
        for (int q = 0; q < kp; ++q) avg += disc.basis.weight(q) * p[static_cast<std::size_t>(q) * nslice];
        const double theta = std::clamp(std::min(ratio(Mn - avg, hi - avg), ratio(mn - avg, lo - avg)), 0.0, 1.0);
        if (theta < 1.0) {
          ++count;
          double* o = fo + static_cast<std::size_t>(j * kp) * nslice + v;
          for (int q = 0; q < kp; ++q) {
            const auto s = static_cast<std::size_t>(q) * nslice;
            o[s] = theta * (p[s] - avg) + avg;
          }
        }
      }
    }
  }
  if (limited_count) *limited_count = count;
  return out;
}

}  // namespace boltz
