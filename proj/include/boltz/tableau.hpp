#pragma once

#include <istream>
#include <string>
#include <vector>

namespace boltz {

/// Explicit (A, b, c) and diagonally implicit (At, bt, ct) Butcher tableaux of an IMEX-RK scheme.
/// Indices are 0-based; A is strictly lower triangular and At lower triangular.
struct ButcherPair {
  std::string name;
  int s = 0;
  std::vector<double> A;
  std::vector<double> At;
  std::vector<double> b;
  std::vector<double> bt;
  std::vector<double> c;
  std::vector<double> ct;

  double a(int i, int j) const { return A[static_cast<std::size_t>(i * s + j)]; }
  double at(int i, int j) const { return At[static_cast<std::size_t>(i * s + j)]; }
};

/// Builds a pair from row-major matrices and weights; c and ct are the row sums.
/// Throws std::invalid_argument on shape or triangularity violations.
ButcherPair make_butcher_pair(std::string name, int s, std::vector<double> A, std::vector<double> At,
                              std::vector<double> b, std::vector<double> bt);

/// "FBEuler", "DP2A242" or "ARS443"; throws std::invalid_argument otherwise.
ButcherPair builtin_tableau(const std::string& name);

std::vector<std::string> builtin_tableau_names();

struct TableauClass {
  bool type_A = false;   ///< At invertible
  bool type_CK = false;  ///< first row of At zero, lower-right block invertible
  bool ars = false;      ///< CK with zero first column below the diagonal and bt_1 = 0
  bool gsa = false;      ///< last rows equal the weights
};

/// Zero threshold for diagonal entries and structural equalities.
inline constexpr double kTableauZero = 1e-14;

TableauClass classify(const ButcherPair& t);

/// Stage-combination coefficients of the Shu-Osher rewriting, one entry per stage (0-based).
///
/// CK form (requires c = ct):
///   f(i) = w_n S[f^n] + sum_{j>=1} history_j S[f(j)] + dt/eps at_ii Q_P(f(i))
///          + dt sum_{j>=0} explicit_j S[G_P(f(j))/eps] + dt implicit_first S[Q_P(f(0))/eps]
/// with history_0 = 0 since f(0) = f^n.
/// Type A form:
///   f(i) = w_n S~[f^n] + sum_{j>=0} history_j S~[f(j)] + dt/eps at_ii Q_P(f(i)) + dt E(i),
///   E(i) = sum_j a_ij S[G_P(f(j))/eps] - sum_j (at_ij / at_jj) S~[E(j)].
struct ShuOsherStage {
  double fn_weight = 1.0;
  std::vector<double> history;
  std::vector<double> explicit_weights;
  double implicit_first = 0.0;
};

struct ShuOsherCoeffs {
  enum class Form { CK, A };
  Form form = Form::CK;
  std::vector<ShuOsherStage> stages;
};

/// Throws SingularTableau when a required block is singular and std::invalid_argument when the
/// tableau is neither type A nor type CK with c = ct.
ShuOsherCoeffs shu_osher_coeffs(const ButcherPair& t);

/// Parses the tableau text format:
///
///   name   MyScheme
///   stages 2
///   explicit
///   0 0
///   1 0
///   explicit_b 1 0
///   implicit
///   0 0
///   0 1
///   implicit_b 0 1
///
/// Entries may be decimals or rationals p/q. Optional `explicit_c` / `implicit_c` lines are
/// checked against the row sums. '#' starts a comment. Errors throw TableauParseError.
ButcherPair parse_tableau(std::istream& in, const std::string& source = "<input>");

ButcherPair load_tableau_file(const std::string& path);

/// Builtin name or path to a tableau file.
ButcherPair resolve_tableau(const std::string& name_or_path);

}  // namespace boltz
