#include "boltz/collision.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "boltz/errors.hpp"
#include "boltz/mesh_basis.hpp"

namespace boltz {

namespace {

double bilinear_at(std::span<const double> fv, const VelocityGrid& grid, double vx, double vy) {
  const int n = grid.n_points();
  const double L = grid.half_width();
  const double dv = grid.dv();
  const double xi = (vx + L) / dv - 0.5;
  const double eta = (vy + L) / dv - 0.5;
  if (xi <= -1.0 || eta <= -1.0 || xi >= n || eta >= n) return 0.0;
  const int i0 = static_cast<int>(std::floor(xi));
  const int j0 = static_cast<int>(std::floor(eta));
  const double tx = xi - i0;
  const double ty = eta - j0;
  auto val = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= n || j >= n) return 0.0;
    return fv[static_cast<std::size_t>(i * n + j)];
  };
  return (1 - tx) * ((1 - ty) * val(i0, j0) + ty * val(i0, j0 + 1)) +
         tx * ((1 - ty) * val(i0 + 1, j0) + ty * val(i0 + 1, j0 + 1));
}

// Band-limited interpolant of grid data, Nyquist modes dropped.
class TrigInterpolant {
public:
  TrigInterpolant(std::span<const double> fv, const VelocityGrid& grid) : grid_(grid), n_(grid.n_points()) {
    const int n = n_;
    coeff_.assign(static_cast<std::size_t>(n * n), 0.0);
    // direct DFT in mode order k = -(n/2 - 1) .. n/2 - 1, using phases of the physical coordinates
    std::vector<std::complex<double>> tmp(static_cast<std::size_t>(n * n));
    const double w = std::numbers::pi / grid.half_width();
    std::vector<std::complex<double>> ph(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a) {
      const int k = a - n / 2;
      for (int i = 0; i < n; ++i) ph[static_cast<std::size_t>(a * n + i)] = std::polar(1.0, -w * k * grid.point(i));
    }
    for (int ix = 0; ix < n; ++ix) {
      for (int b = 0; b < n; ++b) {
        std::complex<double> s = 0.0;
        for (int iy = 0; iy < n; ++iy) s += fv[static_cast<std::size_t>(ix * n + iy)] * ph[static_cast<std::size_t>(b * n + iy)];
        tmp[static_cast<std::size_t>(ix * n + b)] = s;
      }
    }
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        std::complex<double> s = 0.0;
        for (int ix = 0; ix < n; ++ix) s += ph[static_cast<std::size_t>(a * n + ix)] * tmp[static_cast<std::size_t>(ix * n + b)];
        const bool nyquist = (a == 0 || b == 0);
        coeff_[static_cast<std::size_t>(a * n + b)] = nyquist ? 0.0 : s / static_cast<double>(n * n);
      }
    }
    ex_.resize(static_cast<std::size_t>(n));
    ey_.resize(static_cast<std::size_t>(n));
  }

  double operator()(double vx, double vy) {
    const double L = grid_.half_width();
    if (std::abs(vx) > L || std::abs(vy) > L) return 0.0;
    const double w = std::numbers::pi / L;
    for (int a = 0; a < n_; ++a) {
      ex_[static_cast<std::size_t>(a)] = std::polar(1.0, w * (a - n_ / 2) * vx);
      ey_[static_cast<std::size_t>(a)] = std::polar(1.0, w * (a - n_ / 2) * vy);
    }
    std::complex<double> s = 0.0;
    for (int a = 1; a < n_; ++a) {
      std::complex<double> row = 0.0;
      for (int b = 1; b < n_; ++b) row += coeff_[static_cast<std::size_t>(a * n_ + b)] * ey_[static_cast<std::size_t>(b)];
      s += ex_[static_cast<std::size_t>(a)] * row;
    }
    return s.real();
  }

private:
  const VelocityGrid& grid_;
  int n_;
  std::vector<std::complex<double>> coeff_;
  std::vector<std::complex<double>> ex_;
  std::vector<std::complex<double>> ey_;
};

}  // namespace

std::vector<double> q_direct(std::span<const double> fv, const VelocityGrid& grid, const DirectQuadratureOptions& opts) {
  const int n = grid.n_points();
  if (fv.size() != static_cast<std::size_t>(n * n)) throw std::invalid_argument("q_direct: slice size mismatch");
  if (opts.n_angles < 4) throw std::invalid_argument("q_direct: n_angles must be >= 4");
  const int m = opts.n_angles;
  std::vector<double> cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m));
  for (int a = 0; a < m; ++a) {
    const double th = 2.0 * std::numbers::pi * a / m;
    cs[static_cast<std::size_t>(a)] = std::cos(th);
    sn[static_cast<std::size_t>(a)] = std::sin(th);
  }
  const double R = opts.truncation;
  std::unique_ptr<TrigInterpolant> trig;
  if (opts.interp == PostCollisionInterp::Trigonometric) trig = std::make_unique<TrigInterpolant>(fv, grid);
  auto eval = [&](double x, double y) {
    return trig ? (*trig)(x, y) : bilinear_at(fv, grid, x, y);
  };

  // With a truncation radius the admissible scattering directions form two arcs symmetric about
  // the relative velocity; each arc gets its own m-point Gauss rule so the angular integrand stays smooth.
  const QuadratureRule arc_rule = gauss_legendre(m, 0.0, 1.0);

  std::vector<double> out(fv.size(), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double vx = grid.point(i), vy = grid.point(j);
      const double f_v = fv[static_cast<std::size_t>(i * n + j)];
      double acc = 0.0;
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          const double wx = grid.point(a), wy = grid.point(b);
          const double f_w = fv[static_cast<std::size_t>(a * n + b)];
          const double gx = vx - wx, gy = vy - wy;
          const double g = std::hypot(gx, gy);
          const double cx = 0.5 * (vx + wx), cy = 0.5 * (vy + wy);
          if (R <= 0.0) {
            for (int s = 0; s < m; ++s) {
              const double sx = 0.5 * g * cs[static_cast<std::size_t>(s)];
              const double sy = 0.5 * g * sn[static_cast<std::size_t>(s)];
              acc += (eval(cx + sx, cy + sy) * eval(cx - sx, cy - sy) - f_v * f_w) * (2.0 * std::numbers::pi / m);
            }
            continue;
          }
          if (g == 0.0) {
            acc += 2.0 * std::numbers::pi * (eval(cx, cy) * eval(cx, cy) - f_v * f_w);
            continue;
          }
          // |v' - v|^2 = g^2 (1 - cos t) / 2 and |v'_* - v|^2 = g^2 (1 + cos t) / 2, t = angle(sigma, g)
          const double r2 = 2.0 * R * R / (g * g);
          const double c_lo = std::max(-1.0, 1.0 - r2);
          const double c_hi = std::min(1.0, r2 - 1.0);
          if (c_lo > c_hi) continue;
          const double t0 = std::acos(c_hi), t1 = std::acos(c_lo);
          const double base = std::atan2(gy, gx);
          const double width = t1 - t0;
          for (int side = -1; side <= 1; side += 2) {
            for (int q = 0; q < m; ++q) {
              const double t = base + side * (t0 + width * arc_rule.nodes[static_cast<std::size_t>(q)]);
              const double sx = 0.5 * g * std::cos(t);
              const double sy = 0.5 * g * std::sin(t);
              acc += width * arc_rule.weights[static_cast<std::size_t>(q)] *
                     (eval(cx + sx, cy + sy) * eval(cx - sx, cy - sy) - f_v * f_w);
            }
          }
        }
      }
      // kernel 1/(2 pi), v_* weight dv^2
      out[static_cast<std::size_t>(i * n + j)] = grid.dv() * grid.dv() / (2.0 * std::numbers::pi) * acc;
    }
  }
  return out;
}

struct CollisionWorkspace {
  explicit CollisionWorkspace(int n) : size(static_cast<std::size_t>(n) * n) {
    spectrum = fftw_alloc_complex(size);
    scratch = fftw_alloc_complex(size);
    gain.assign(size, 0.0);
  }
  ~CollisionWorkspace() {
    fftw_free(spectrum);
    fftw_free(scratch);
  }
  CollisionWorkspace(const CollisionWorkspace&) = delete;
  CollisionWorkspace& operator=(const CollisionWorkspace&) = delete;

  std::size_t size;
  fftw_complex* spectrum;
  fftw_complex* scratch;
  std::vector<double> gain;
};

CollisionPlan::CollisionPlan(const VelocityGrid& grid, const CollisionPlanOptions& opts)
    : n_(grid.n_points()), half_width_(grid.half_width()), n_angles_(opts.n_angles) {
  if (n_ < 8) throw std::invalid_argument("CollisionPlan: N_v must be >= 8");
  if (n_ % 2 != 0) throw std::invalid_argument("CollisionPlan: N_v must be even");
  if (n_angles_ < 4) throw std::invalid_argument("CollisionPlan: n_angles must be >= 4");
  if (opts.radial_points < 64) throw std::invalid_argument("CollisionPlan: radial_points must be >= 64");
  truncation_ = opts.truncation > 0.0 ? opts.truncation : 0.5 * half_width_;

  const auto nn = static_cast<std::size_t>(n_) * n_;
  const double L = half_width_;
  const double R = truncation_;
  const QuadratureRule radial = gauss_legendre(opts.radial_points, 0.0, R);
  // phi_R(s) = int_{-R}^{R} cos(pi rho s / L) d rho
  auto radial_mode = [&](double s) {
    double sum = 0.0;
    for (std::size_t q = 0; q < radial.nodes.size(); ++q) {
      sum += radial.weights[q] * std::cos(std::numbers::pi * radial.nodes[q] * s / L);
    }
    return 2.0 * sum;
  };

  gain_.assign(nn * n_angles_, 0.0);
  gain_perp_.assign(nn * n_angles_, 0.0);
  loss_.assign(nn, 0.0);
  for (int p = 0; p < n_angles_; ++p) {
    // directions over a half circle; the integrand is pi-periodic in the angle
    const double th = std::numbers::pi * p / n_angles_;
    const double ex = std::cos(th), ey = std::sin(th);
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) {
        if (a == n_ / 2 || b == n_ / 2) continue;
        const double kx = mode_of_index(a), ky = mode_of_index(b);
        const std::size_t i = static_cast<std::size_t>(p) * nn + static_cast<std::size_t>(a * n_ + b);
        gain_[i] = radial_mode(kx * ex + ky * ey);
        gain_perp_[i] = radial_mode(-kx * ey + ky * ex);
      }
    }
  }
  const double inv_m = 1.0 / n_angles_;
  for (int p = 0; p < n_angles_; ++p) {
    for (std::size_t i = 0; i < nn; ++i) {
      loss_[i] += inv_m * gain_[static_cast<std::size_t>(p) * nn + i] * gain_perp_[static_cast<std::size_t>(p) * nn + i];
    }
  }

  fftw_complex* tmp = fftw_alloc_complex(nn);
  forward_ = fftw_plan_dft_2d(n_, n_, tmp, tmp, FFTW_FORWARD, FFTW_ESTIMATE);
  backward_ = fftw_plan_dft_2d(n_, n_, tmp, tmp, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(tmp);
}

CollisionPlan::~CollisionPlan() {
  if (forward_) fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  if (backward_) fftw_destroy_plan(static_cast<fftw_plan>(backward_));
}

std::span<const double> CollisionPlan::gain_mode(int p) const {
  const auto nn = static_cast<std::size_t>(n_) * n_;
  return std::span<const double>(gain_).subspan(static_cast<std::size_t>(p) * nn, nn);
}

std::span<const double> CollisionPlan::gain_mode_perp(int p) const {
  const auto nn = static_cast<std::size_t>(n_) * n_;
  return std::span<const double>(gain_perp_).subspan(static_cast<std::size_t>(p) * nn, nn);
}

std::unique_ptr<CollisionWorkspace> CollisionPlan::make_workspace() const {
  return std::make_unique<CollisionWorkspace>(n_);
}

void CollisionPlan::evaluate(std::span<const double> fv, std::span<double> out, CollisionWorkspace& ws) const {
  const std::size_t nn = ws.size;
  if (fv.size() != nn || out.size() != nn) throw std::invalid_argument("CollisionPlan::evaluate: shape mismatch");
  auto fwd = static_cast<fftw_plan>(forward_);
  auto bwd = static_cast<fftw_plan>(backward_);
  fftw_complex* F = ws.spectrum;
  fftw_complex* G = ws.scratch;
  for (std::size_t i = 0; i < nn; ++i) {
    F[i][0] = fv[i];
    F[i][1] = 0.0;
  }
  fftw_execute_dft(fwd, F, F);

  const double norm = 1.0 / static_cast<double>(nn);
  std::fill(ws.gain.begin(), ws.gain.end(), 0.0);
  for (int p = 0; p < n_angles_; ++p) {
    const double* a = gain_.data() + static_cast<std::size_t>(p) * nn;
    const double* b = gain_perp_.data() + static_cast<std::size_t>(p) * nn;
    // both filtered signals are real: pack them as real + i * imag in one inverse transform
    for (std::size_t i = 0; i < nn; ++i) {
      G[i][0] = a[i] * F[i][0] - b[i] * F[i][1];
      G[i][1] = a[i] * F[i][1] + b[i] * F[i][0];
    }
    fftw_execute_dft(bwd, G, G);
    for (std::size_t i = 0; i < nn; ++i) ws.gain[i] += (G[i][0] * norm) * (G[i][1] * norm);
  }
  for (std::size_t i = 0; i < nn; ++i) {
    G[i][0] = loss_[i] * F[i][0];
    G[i][1] = loss_[i] * F[i][1];
  }
  fftw_execute_dft(bwd, G, G);
  const double inv_m = 1.0 / n_angles_;
  for (std::size_t i = 0; i < nn; ++i) out[i] = inv_m * ws.gain[i] - fv[i] * (G[i][0] * norm);
}

std::unique_ptr<CollisionPlan> build_collision_plan(const VelocityGrid& grid, int n_angles) {
  CollisionPlanOptions opts;
  opts.n_angles = n_angles;
  return std::make_unique<CollisionPlan>(grid, opts);
}

std::vector<double> q_spectral(const CollisionPlan& plan, std::span<const double> fv) {
  const auto nn = static_cast<std::size_t>(plan.n_points()) * plan.n_points();
  if (fv.size() != nn) throw std::invalid_argument("q_spectral: slice size does not match plan");
  std::vector<double> out(nn);
  auto ws = plan.make_workspace();
  plan.evaluate(fv, out, *ws);
  return out;
}

namespace {
void check_plan_matches(const CollisionPlan& plan, const DistributionField& f) {
  if (plan.n_points() != f.disc().grid.n_points() || plan.half_width() != f.disc().grid.half_width()) {
    throw std::invalid_argument("collision_field: plan does not match velocity grid");
  }
}
}  // namespace

DistributionField collision_field(const CollisionPlan& plan, const DistributionField& f) {
  check_plan_matches(plan, f);
  DistributionField Q(f.disc_ptr());
  const int n_nodes = f.n_nodes();
#pragma omp parallel
  {
    auto ws = plan.make_workspace();
#pragma omp for schedule(static)
    for (int node = 0; node < n_nodes; ++node) plan.evaluate(f.slice(node), Q.slice(node), *ws);
  }
  return Q;
}

DistributionField collision_field_serial(const CollisionPlan& plan, const DistributionField& f) {
  check_plan_matches(plan, f);
  DistributionField Q(f.disc_ptr());
  auto ws = plan.make_workspace();
  for (int node = 0; node < f.n_nodes(); ++node) plan.evaluate(f.slice(node), Q.slice(node), *ws);
  return Q;
}

std::vector<double> penalty_beta(const MacroField& U) {
  std::vector<double> beta(U.rho.size());
  for (std::size_t i = 0; i < beta.size(); ++i) {
    if (!(U.rho[i] > 0.0)) {
      throw DegenerateMoments("penalty_beta: nonpositive density", static_cast<int>(i),
                              U.disc().node_x(static_cast<int>(i)));
    }
    beta[i] = U.rho[i];
  }
  return beta;
}

DistributionField q_p(const DistributionField& f, const DistributionField& M, std::span<const double> beta) {
  if (!f.same_shape(M)) throw std::invalid_argument("q_p: shape mismatch");
  if (beta.size() != static_cast<std::size_t>(f.n_nodes())) throw std::invalid_argument("q_p: beta size mismatch");
  DistributionField out(f.disc_ptr());
  for (int node = 0; node < f.n_nodes(); ++node) {
    const double b = beta[static_cast<std::size_t>(node)];
    const auto fs = f.slice(node);
    const auto ms = M.slice(node);
    auto os = out.slice(node);
    for (std::size_t i = 0; i < fs.size(); ++i) os[i] = b * (ms[i] - fs[i]);
  }
  return out;
}

DistributionField q_p(const DistributionField& f, const MacroField& U, std::span<const double> beta) {
  return q_p(f, maxwellian(U), beta);
}

DistributionField g_p(const DistributionField& Q_of_f, const DistributionField& Q_P) {
  DistributionField out = Q_of_f;
  out -= Q_P;
  return out;
}

DistributionField g_p(const DistributionField& f, const DistributionField& Q_of_f, const MacroField& U,
                      std::span<const double> beta) {
  return g_p(Q_of_f, q_p(f, U, beta));
}

}  // namespace boltz
