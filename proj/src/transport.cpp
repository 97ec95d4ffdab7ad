#include "boltz/transport.hpp"

#include <stdexcept>
#include <string>

namespace boltz {

ShiftMatrices build_shift_matrices(const NodalBasis& basis, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("build_shift_matrices: alpha must lie in [0, 1), got " + std::to_string(alpha));
  }
  const int n = basis.size();
  ShiftMatrices m;
  m.n = n;
  m.A.assign(static_cast<std::size_t>(n * n), 0.0);
  m.B.assign(static_cast<std::size_t>(n * n), 0.0);
  for (int row = 0; row < n; ++row) {
    const double inv_w = 1.0 / basis.weight(row);
    for (int col = 0; col < n; ++col) {
      double a = 0.0, b = 0.0;
      for (int q = 0; q < n; ++q) {
        const double u = basis.node(q);
        const double w = basis.weight(q);
        a += w * basis.lagrange_eval(col, alpha + u * (1.0 - alpha)) * basis.lagrange_eval(row, u * (1.0 - alpha));
        b += w * basis.lagrange_eval(col, alpha * u) * basis.lagrange_eval(row, alpha * (u - 1.0) + 1.0);
      }
      m.A[static_cast<std::size_t>(row * n + col)] = inv_w * (1.0 - alpha) * a;
      m.B[static_cast<std::size_t>(row * n + col)] = inv_w * alpha * b;
    }
  }
  return m;
}

ShiftPlan::ShiftPlan(DiscretizationPtr disc, double tau) : disc_(std::move(disc)), tau_(tau) {
  const auto& grid = disc_->grid;
  shifts_.reserve(static_cast<std::size_t>(grid.n_points()));
  for (int ix = 0; ix < grid.n_points(); ++ix) {
    const CellShift cs = cell_shift(disc_->mesh.dx(), grid.point(ix), tau);
    if (cs.offset != 0 || cs.alpha != 0.0) identity_ = false;
    shifts_.push_back({cs.offset, cs.alpha, build_shift_matrices(disc_->basis, cs.alpha)});
  }
}

ShiftPlan::Upstream ShiftPlan::upstream(int j, int ix) const {
  const int n = disc_->mesh.n_cells();
  const VelocityShift& s = shifts_[static_cast<std::size_t>(ix)];
  int first = j + s.offset;
  if (disc_->mesh.boundary() == Boundary::Periodic) {
    first %= n;
    if (first < 0) first += n;
    return {first, first + 1 == n ? 0 : first + 1, false};
  }
  if (first < 0) return {0, 0, true};
  if (first > n - 1 || (first == n - 1 && s.alpha > 0.0)) return {n - 1, n - 1, true};
  return {first, first + 1 < n ? first + 1 : first, false};
}

ShiftPlan build_shift_plan(const DiscretizationPtr& disc, double tau) { return ShiftPlan(disc, tau); }

namespace {

void check_plan(const ShiftPlan& plan, const DistributionField& f) {
  const auto& d = f.disc();
  if (!(d.mesh == plan.disc().mesh) || !(d.basis == plan.disc().basis) || !(d.grid == plan.disc().grid)) {
    throw std::invalid_argument("shift_apply: plan does not match field discretization");
  }
}

void shift_cell(const ShiftPlan& plan, const DistributionField& f, DistributionField& out, int j) {
  const auto& disc = f.disc();
  const int kp = disc.basis.size();
  const int nv = disc.grid.n_points();
  const double* fv = f.values().data();
  auto src_ptr = [&](int node, int ix) { return fv + (static_cast<std::size_t>(node) * nv + ix) * nv; };
  for (int ix = 0; ix < nv; ++ix) {
    const auto up = plan.upstream(j, ix);
    const VelocityShift& s = plan.at(ix);
    for (int row = 0; row < kp; ++row) {
      double* dst = &out.at(j * kp + row, ix, 0);
      for (int iy = 0; iy < nv; ++iy) dst[iy] = 0.0;
      if (up.clamped) {
        const double* src = src_ptr(up.first * kp + row, ix);
        for (int iy = 0; iy < nv; ++iy) dst[iy] = src[iy];
        continue;
      }
      for (int col = 0; col < kp; ++col) {
        const double a = s.matrices.a(row, col);
        const double b = s.matrices.b(row, col);
        const double* src_a = src_ptr(up.first * kp + col, ix);
        const double* src_b = src_ptr(up.second * kp + col, ix);
        if (b == 0.0) {
          for (int iy = 0; iy < nv; ++iy) dst[iy] += a * src_a[iy];
        } else {
          for (int iy = 0; iy < nv; ++iy) dst[iy] += a * src_a[iy] + b * src_b[iy];
        }
      }
    }
  }
}

}  // namespace

DistributionField shift_apply(const ShiftPlan& plan, const DistributionField& f) {
  check_plan(plan, f);
  if (plan.is_identity()) return f;
  DistributionField out(f.disc_ptr());
  const int n = f.disc().mesh.n_cells();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) shift_cell(plan, f, out, j);
  return out;
}

DistributionField shift_apply_serial(const ShiftPlan& plan, const DistributionField& f) {
  check_plan(plan, f);
  DistributionField out(f.disc_ptr());
  for (int j = 0; j < f.disc().mesh.n_cells(); ++j) shift_cell(plan, f, out, j);
  return out;
}

const ShiftPlan& ShiftPlanCache::get(double tau) {
  auto it = plans_.find(tau);
  if (it == plans_.end()) it = plans_.emplace(tau, ShiftPlan(disc_, tau)).first;
  return it->second;
}

}  // namespace boltz
