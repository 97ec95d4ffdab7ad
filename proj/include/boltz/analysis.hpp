#pragma once

#include <limits>
#include <string>
#include <vector>

#include "boltz/tableau.hpp"

namespace boltz {

/// Limiting-scheme order coefficients per stage (0-based) and the verified order at the last stage.
struct OrderReport {
  std::vector<double> C, D, B, G, H, Bs, Bss, Bsss;
  double c_last = 0.0;   ///< explicit c_s
  double ct_last = 0.0;  ///< implicit c~_s
  int order = 0;         ///< 0..3
  bool first_order = false;
  bool second_order = false;
  bool third_order = false;
};

/// Tolerance on each order equality.
inline constexpr double kOrderTolerance = 1e-12;

/// Throws SingularTableau if a zero implicit diagonal beyond the first stage is encountered.
OrderReport limiting_order_coeffs(const ButcherPair& t);

struct FirstOrderReport {
  std::vector<double> g;
  std::vector<double> h;
  bool verdict = false;
};

/// First-order semi-Lagrangian truncation recursion; throws std::invalid_argument for non-CK input.
FirstOrderReport first_order_gh(const ButcherPair& t);

struct PositivityCondition {
  std::string name;
  bool z_dependent = false;
  bool holds = true;  ///< z-independent conditions only
};

struct PositivityReport {
  std::vector<PositivityCondition> conditions;
  double z_max = 0.0;                 ///< +infinity when no condition binds for any z >= 0
  bool unconditional = false;
  bool partial_coverage = false;      ///< some conditions need more stages than the tableau has
  bool beyond_three_stages = false;   ///< only the first three stages were analysed
  std::string violated;               ///< failing z-independent condition, or the z condition binding at z_max
  /// Margins of the z-dependent conditions at z (negative means violated).
  std::vector<double> margins(double z) const;

  // internal coefficients
  double a1 = 0, a2 = 0, at11 = 0, at21 = 0, at22 = 0, ah21 = 0;
  bool has_stage3 = false;
};


/// Sufficient positivity constraints on z = beta dt / eps; throws std::invalid_argument for non-CK input.
PositivityReport positivity_zmax(const ButcherPair& t);

}  // namespace boltz
