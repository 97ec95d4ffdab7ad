#include "boltz/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "boltz/errors.hpp"

namespace boltz {

namespace {

bool eq(double a, double b) { return std::abs(a - b) <= kOrderTolerance; }

}  // namespace

OrderReport limiting_order_coeffs(const ButcherPair& t) {
  const int s = t.s;
  const auto n = static_cast<std::size_t>(s);
  // bt_kj recursion; columns with a zero diagonal in the first stage are skipped.
  std::vector<double> bt(n * n, 0.0);
  auto skip = [&](int j) { return std::abs(t.at(j, j)) <= kTableauZero; };
  for (int j = 1; j < s; ++j) {
    if (skip(j)) throw SingularTableau("limiting_order_coeffs: zero implicit diagonal at stage " + std::to_string(j + 1));
  }
  for (int k = 0; k < s; ++k) {
    for (int j = 0; j < k; ++j) {
      if (skip(j)) continue;
      double v = t.at(k, j) / t.at(j, j);
      for (int l = j + 1; l < k; ++l) v -= t.at(k, l) * bt[static_cast<std::size_t>(l) * n + static_cast<std::size_t>(j)] / t.at(l, l);
      bt[static_cast<std::size_t>(k) * n + static_cast<std::size_t>(j)] = v;
    }
  }
  OrderReport r;
  r.C = t.ct;
  r.D.assign(n, 0.0);
  r.B.assign(n, 0.0);
  r.G.assign(n, 0.0);
  r.H.assign(n, 0.0);
  r.Bs.assign(n, 0.0);
  r.Bss.assign(n, 0.0);
  r.Bsss.assign(n, 0.0);
  const auto& c = t.ct;
  for (int k = 0; k < s; ++k) {
    const auto K = static_cast<std::size_t>(k);
    double sum_b = 0.0, D = 0, B = 0, G = 0, H = 0, Bs = 0, Bss = 0, Bsss = 0;
    for (int j = 0; j < k; ++j) {
      const auto J = static_cast<std::size_t>(j);
      const double w = bt[K * n + J];
      const double dc = c[K] - c[J];
      sum_b += w;
      D += w * (r.D[J] + dc * c[J]);
      B += w * (r.B[J] + dc * dc);
      G += w * (r.G[J] + 0.5 * dc * dc * c[J]);
      H += w * (r.H[J] + dc * r.D[J]);
      Bs += w * (r.Bs[J] + dc * r.B[J]);
      Bss += w * (r.Bss[J] + dc * dc * c[J]);
      Bsss += w * (r.Bsss[J] + dc * dc * dc);
    }
    r.D[K] = D;
    r.B[K] = (1.0 - sum_b) * c[K] * c[K] + B;
    r.G[K] = G;
    r.H[K] = H;
    r.Bs[K] = Bs;
    r.Bss[K] = Bss;
    r.Bsss[K] = (1.0 - sum_b) * c[K] * c[K] * c[K] + Bsss;
  }
  const auto L = n - 1;
  r.c_last = t.c[L];
  r.ct_last = t.ct[L];
  r.first_order = eq(r.ct_last, 1.0) && eq(r.c_last, 1.0);
  r.second_order = r.first_order && eq(r.D[L], 0.5) && eq(r.B[L], 0.0);
  r.third_order = r.second_order && eq(r.G[L], 1.0 / 6.0) && eq(r.H[L], 1.0 / 6.0) && eq(r.Bs[L], 0.0) &&
                  eq(r.Bss[L], 0.0) && eq(r.Bsss[L], 0.0);
  r.order = r.third_order ? 3 : r.second_order ? 2 : r.first_order ? 1 : 0;
  return r;
}

FirstOrderReport first_order_gh(const ButcherPair& t) {
  if (!classify(t).type_CK) throw std::invalid_argument("first_order_gh: tableau is not of type CK");
  const auto so = shu_osher_coeffs(t);
  const int s = t.s;
  FirstOrderReport r;
  r.g.assign(static_cast<std::size_t>(s), 0.0);
  r.h.assign(static_cast<std::size_t>(s), 0.0);
  for (int i = 1; i < s; ++i) {
    const auto& st = so.stages[static_cast<std::size_t>(i)];
    double g = t.at(i, i), h = st.explicit_weights[0];
    for (int j = 1; j < i; ++j) {
      const auto J = static_cast<std::size_t>(j);
      g += st.history[J] * r.g[J];
      h += st.history[J] * r.h[J] + st.explicit_weights[J];
    }
    r.g[static_cast<std::size_t>(i)] = g;
    r.h[static_cast<std::size_t>(i)] = h;
  }
  r.verdict = eq(r.g.back(), 1.0) && eq(r.h.back(), 1.0);
  return r;
}

std::vector<double> PositivityReport::margins(double z) const {
  if (!has_stage3) return {};
  const double q = 1.0 + z * at11;
  return {1.0 - z * at21 / q, a2 - z * at21 * a1 / q, -ah21 + at21 - z * at21 * at11 / q};
}

PositivityReport positivity_zmax(const ButcherPair& t) {
  if (!classify(t).type_CK) throw std::invalid_argument("positivity_zmax: tableau is not of type CK");
  PositivityReport r;
  const int s = t.s;
  r.a1 = s > 1 ? t.a(1, 0) : 0.0;
  r.at11 = s > 1 ? t.at(1, 1) : 0.0;
  r.has_stage3 = s > 2;
  if (r.has_stage3) {
    r.a2 = t.a(2, 0);
    r.ah21 = t.a(2, 1);
    r.at21 = t.at(2, 1);
    r.at22 = t.at(2, 2);
  }
  r.partial_coverage = !r.has_stage3;
  r.beyond_three_stages = s > 3;

  r.conditions.push_back({"a1 >= 0", false, r.a1 >= 0.0});
  r.conditions.push_back({"at11 > 0", false, r.at11 > 0.0});
  if (r.has_stage3) {
    r.conditions.push_back({"ah21 >= 0", false, r.ah21 >= 0.0});
    r.conditions.push_back({"at22 > 0", false, r.at22 > 0.0});
    r.conditions.push_back({"1 - z at21/(1 + z at11) >= 0", true, true});
    r.conditions.push_back({"a2 - z at21 a1/(1 + z at11) >= 0", true, true});
    r.conditions.push_back({"-ah21 + at21 - z at21 at11/(1 + z at11) >= 0", true, true});
  }
  for (const auto& c : r.conditions) {
    if (!c.z_dependent && !c.holds) {
      r.violated = c.name;
      r.z_max = 0.0;
      return r;
    }
  }
  r.z_max = std::numeric_limits<double>::infinity();
  if (r.has_stage3) {
    // With at11 > 0 each condition A - z B/(1 + z at11) >= 0 is linear after clearing the denominator:
    // A + z (A at11 - B) >= 0.
    const double A[3] = {1.0, r.a2, -r.ah21 + r.at21};
    const double B[3] = {r.at21, r.at21 * r.a1, r.at21 * r.at11};
    for (int m = 0; m < 3; ++m) {
      const double slope = A[m] * r.at11 - B[m];
      double bound = std::numeric_limits<double>::infinity();
      if (A[m] < 0.0) bound = 0.0;
      else if (slope < 0.0) bound = A[m] / -slope;
      if (bound < r.z_max) {
        r.z_max = bound;
        r.violated = r.conditions[static_cast<std::size_t>(4 + m)].name;
      }
    }
  }
  r.unconditional = std::isinf(r.z_max);
  return r;
}

}  // namespace boltz
