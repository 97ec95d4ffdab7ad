#include "boltz/velocity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "boltz/errors.hpp"

namespace boltz {

VelocityGrid::VelocityGrid(double half_width, int n_points) : half_width_(half_width), n_points_(n_points) {
  if (n_points <= 0) throw std::invalid_argument("VelocityGrid: n_points must be positive");
  if (!(half_width > 0.0)) throw std::invalid_argument("VelocityGrid: half_width must be positive");
  dv_ = 2.0 * half_width / n_points;
  points_.resize(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    // symmetric construction: v_i = -v_{N-1-i} exactly
    points_[static_cast<std::size_t>(i)] = (2.0 * i + 1.0 - n_points) * half_width / n_points;
  }
}

DiscretizationPtr make_discretization(const SpatialMesh& mesh, int degree, const VelocityGrid& grid) {
  return std::make_shared<const Discretization>(Discretization{mesh, NodalBasis(degree), grid});
}

DistributionField::DistributionField(DiscretizationPtr disc, double fill)
    : disc_(std::move(disc)),
      values_(static_cast<std::size_t>(disc_->n_nodes()) * disc_->grid.slice_size(), fill) {}

bool DistributionField::same_shape(const DistributionField& o) const {
  if (disc_ == o.disc_) return true;
  return disc_ && o.disc_ && disc_->mesh == o.disc_->mesh && disc_->basis == o.disc_->basis &&
         disc_->grid == o.disc_->grid;
}

namespace {
void require_same(const DistributionField& a, const DistributionField& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("DistributionField: shape mismatch");
}
}  // namespace

DistributionField& DistributionField::operator+=(const DistributionField& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

DistributionField& DistributionField::operator-=(const DistributionField& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

DistributionField& DistributionField::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

DistributionField& DistributionField::axpy(double a, const DistributionField& o) {
  require_same(*this, o);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * o.values_[i];
  return *this;
}

double DistributionField::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

bool DistributionField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

MacroField::MacroField(DiscretizationPtr disc) : disc_(std::move(disc)) {
  const auto n = static_cast<std::size_t>(disc_->n_nodes());
  rho.assign(n, 0.0);
  mom1.assign(n, 0.0);
  mom2.assign(n, 0.0);
  energy.assign(n, 0.0);
}

double MacroField::temperature(int i) const {
  const auto k = idx(i);
  const double r = rho[k];
  const double a = mom1[k] / r;
  const double b = mom2[k] / r;
  return 0.5 * (energy[k] / r - a * a - b * b);
}

namespace {
[[noreturn]] void throw_degenerate(const MacroField& U, int node, const char* what, double value) {
  std::ostringstream os;
  os << "degenerate moments: " << what << " = " << value << " at node " << node << " (x = " << U.disc().node_x(node)
     << ")";
  throw DegenerateMoments(os.str(), node, U.disc().node_x(node));
}
}  // namespace

void MacroField::check_nondegenerate() const {
  for (int i = 0; i < n_nodes(); ++i) {
    if (!(rho[idx(i)] > 0.0)) throw_degenerate(*this, i, "rho", rho[idx(i)]);
    const double T = temperature(i);
    if (!(T > 0.0)) throw_degenerate(*this, i, "T", T);
  }
}

void set_primitive(MacroField& U, int node, double rho, double u1, double u2, double T) {
  const auto k = static_cast<std::size_t>(node);
  U.rho[k] = rho;
  U.mom1[k] = rho * u1;
  U.mom2[k] = rho * u2;
  U.energy[k] = 2.0 * rho * T + rho * (u1 * u1 + u2 * u2);
}

MacroField moments_raw(const DistributionField& f) {
  MacroField U(f.disc_ptr());
  const auto& grid = f.disc().grid;
  const int nv = grid.n_points();
  const double w = grid.dv() * grid.dv();
  const auto v = grid.points();
  const int n_nodes = f.n_nodes();
#pragma omp parallel for schedule(static)
  for (int node = 0; node < n_nodes; ++node) {
    const auto s = f.slice(node);
    double r = 0.0, m1 = 0.0, m2 = 0.0, e = 0.0;
    for (int ix = 0; ix < nv; ++ix) {
      const double vx = v[static_cast<std::size_t>(ix)];
      double row = 0.0, row_vy = 0.0, row_vy2 = 0.0;
      for (int iy = 0; iy < nv; ++iy) {
        const double vy = v[static_cast<std::size_t>(iy)];
        const double fv = s[static_cast<std::size_t>(ix * nv + iy)];
        row += fv;
        row_vy += fv * vy;
        row_vy2 += fv * vy * vy;
      }
      r += row;
      m1 += vx * row;
      m2 += row_vy;
      e += vx * vx * row + row_vy2;
    }
    const auto k = static_cast<std::size_t>(node);
    U.rho[k] = w * r;
    U.mom1[k] = w * m1;
    U.mom2[k] = w * m2;
    U.energy[k] = w * e;
  }
  return U;
}

MacroField moments(const DistributionField& f) {
  MacroField U = moments_raw(f);
  for (int i = 0; i < U.n_nodes(); ++i) {
    if (!(U.rho[static_cast<std::size_t>(i)] > 0.0)) throw_degenerate(U, i, "rho", U.rho[static_cast<std::size_t>(i)]);
  }
  return U;
}

void maxwellian_slice(const VelocityGrid& grid, double rho, double u1, double u2, double T, std::span<double> out) {
  const int nv = grid.n_points();
  const double amp = rho / (2.0 * std::numbers::pi * T);
  const double inv2T = 1.0 / (2.0 * T);
  // exp(-(a^2+b^2)/2T) = exp(-a^2/2T) exp(-b^2/2T)
  double gy[256];
  std::vector<double> gy_heap;
  double* gyp = gy;
  if (nv > 256) {
    gy_heap.resize(static_cast<std::size_t>(nv));
    gyp = gy_heap.data();
  }
  for (int iy = 0; iy < nv; ++iy) {
    const double b = grid.point(iy) - u2;
    gyp[iy] = std::exp(-b * b * inv2T);
  }
  for (int ix = 0; ix < nv; ++ix) {
    const double a = grid.point(ix) - u1;
    const double gx = amp * std::exp(-a * a * inv2T);
    for (int iy = 0; iy < nv; ++iy) out[static_cast<std::size_t>(ix * nv + iy)] = gx * gyp[iy];
  }
}

DistributionField maxwellian(const MacroField& U) {
  U.check_nondegenerate();
  DistributionField M(U.disc_ptr());
  const auto& grid = U.disc().grid;
  const int n_nodes = U.n_nodes();
#pragma omp parallel for schedule(static)
  for (int node = 0; node < n_nodes; ++node) {
    maxwellian_slice(grid, U.rho[static_cast<std::size_t>(node)], U.u1(node), U.u2(node), U.temperature(node),
                     M.slice(node));
  }
  return M;
}

double ap_error(const DistributionField& f) {
  const MacroField U = moments(f);
  const DistributionField M = maxwellian(U);
  const auto& disc = f.disc();
  const double dv2 = disc.grid.dv() * disc.grid.dv();
  double total = 0.0;
  for (int node = 0; node < f.n_nodes(); ++node) {
    const auto a = f.slice(node);
    const auto b = M.slice(node);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
    total += disc.node_weight(node) * dv2 * s;
  }
  return total;
}

EulerFlux euler_flux(const MacroField& U) {
  U.check_nondegenerate();
  const auto n = static_cast<std::size_t>(U.n_nodes());
  EulerFlux F{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    const int node = static_cast<int>(i);
    const double u1 = U.u1(node);
    const double u2 = U.u2(node);
    const double p = U.rho[i] * U.temperature(node);
    F.mass[i] = U.mom1[i];
    F.mom1[i] = U.mom1[i] * u1 + p;
    F.mom2[i] = U.mom1[i] * u2;
    // <v1 |v|^2 M> = u1 (rho |u|^2 + 4 rho T) for the unhalved energy E = rho |u|^2 + 2 rho T.
    F.energy[i] = U.energy[i] * u1 + 2.0 * p * u1;
  }
  return F;
}

ErrorNorms relative_norms(std::span<const double> a, std::span<const double> b, const Discretization& disc) {
  if (a.size() != b.size() || a.size() != static_cast<std::size_t>(disc.n_nodes())) {
    throw std::invalid_argument("relative_norms: size mismatch");
  }
  double d1 = 0.0, d2 = 0.0, n1 = 0.0, n2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double w = disc.node_weight(static_cast<int>(i));
    const double d = a[i] - b[i];
    d1 += w * std::abs(d);
    d2 += w * d * d;
    n1 += w * std::abs(a[i]);
    n2 += w * a[i] * a[i];
  }
  return {d1 / n1, std::sqrt(d2 / n2)};
}

ErrorNorms error_norms(const MacroField& a, const MacroField& b) {
  const auto& da = a.disc();
  const auto& db = b.disc();
  if (!(da.mesh == db.mesh) || !(da.basis == db.basis)) {
    throw std::invalid_argument("error_norms: mesh mismatch");
  }
  return relative_norms(a.rho, b.rho, da);
}

MacroField restrict_to(const MacroField& fine, const DiscretizationPtr& coarse) {
  const auto& fd = fine.disc();
  const int kf = fd.basis.size();
  const double dx = fd.mesh.dx();
  MacroField out(coarse);
  std::vector<double> local(static_cast<std::size_t>(kf));
  const std::vector<double>* comps_in[4] = {&fine.rho, &fine.mom1, &fine.mom2, &fine.energy};
  std::vector<double>* comps_out[4] = {&out.rho, &out.mom1, &out.mom2, &out.energy};

  auto eval_in_cell = [&](const std::vector<double>& comp, int cell, double x) {
    for (int p = 0; p < kf; ++p) local[static_cast<std::size_t>(p)] = comp[static_cast<std::size_t>(cell * kf + p)];
    return fd.basis.interpolate(local, (x - fd.mesh.cell_left(cell)) / dx);
  };

  for (int node = 0; node < coarse->n_nodes(); ++node) {
    const double x = coarse->node_x(node);
    const double pos = (x - fd.mesh.x_left()) / dx;
    const double r = std::round(pos);
    const bool on_interface = std::abs(pos - r) < 1e-12 && r > 0 && r < fd.mesh.n_cells();
    for (int c = 0; c < 4; ++c) {
      double val;
      if (on_interface) {
        const int right = static_cast<int>(r);
        val = 0.5 * (eval_in_cell(*comps_in[c], right - 1, x) + eval_in_cell(*comps_in[c], right, x));
      } else {
        const int cell = std::clamp(static_cast<int>(std::floor(pos)), 0, fd.mesh.n_cells() - 1);
        val = eval_in_cell(*comps_in[c], cell, x);
      }
      (*comps_out[c])[static_cast<std::size_t>(node)] = val;
    }
  }
  return out;
}

Totals totals(const MacroField& U) {
  Totals t{0, 0, 0, 0};
  for (int i = 0; i < U.n_nodes(); ++i) {
    const double w = U.disc().node_weight(i);
    const auto k = static_cast<std::size_t>(i);
    t.mass += w * U.rho[k];
    t.mom1 += w * U.mom1[k];
    t.mom2 += w * U.mom2[k];
    t.energy += w * U.energy[k];
  }
  return t;
}

double l2_norm(const DistributionField& f) {
  const auto& disc = f.disc();
  const double dv2 = disc.grid.dv() * disc.grid.dv();
  double s = 0.0;
  for (int node = 0; node < f.n_nodes(); ++node) {
    double local = 0.0;
    for (double v : f.slice(node)) local += v * v;
    s += disc.node_weight(node) * dv2 * local;
  }
  return std::sqrt(s);
}

}  // namespace boltz
