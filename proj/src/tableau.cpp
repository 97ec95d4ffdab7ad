#include "boltz/tableau.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "boltz/errors.hpp"

namespace boltz {

namespace {

using Matrix = std::vector<double>;

// x such that x * L = r for the n x n lower-triangular block L(p, q).
template <class Block>
std::vector<double> row_times_inverse(const std::vector<double>& r, int n, Block L) {
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  for (int q = n - 1; q >= 0; --q) {
    double acc = r[static_cast<std::size_t>(q)];
    for (int p = q + 1; p < n; ++p) acc -= x[static_cast<std::size_t>(p)] * L(p, q);
    const double diag = L(q, q);
    if (std::abs(diag) <= kTableauZero) throw SingularTableau("shu_osher_coeffs: singular diagonal block");
    x[static_cast<std::size_t>(q)] = acc / diag;
  }
  return x;
}

bool near(double a, double b) { return std::abs(a - b) <= kTableauZero; }

}  // namespace

ButcherPair make_butcher_pair(std::string name, int s, std::vector<double> A, std::vector<double> At,
                              std::vector<double> b, std::vector<double> bt) {
  if (s < 1) throw std::invalid_argument("make_butcher_pair: stage count must be positive");
  const auto ss = static_cast<std::size_t>(s);
  if (A.size() != ss * ss || At.size() != ss * ss || b.size() != ss || bt.size() != ss) {
    throw std::invalid_argument("make_butcher_pair: inconsistent tableau sizes");
  }
  ButcherPair t;
  t.name = std::move(name);
  t.s = s;
  t.A = std::move(A);
  t.At = std::move(At);
  t.b = std::move(b);
  t.bt = std::move(bt);
  t.c.assign(ss, 0.0);
  t.ct.assign(ss, 0.0);
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      if (j >= i && t.a(i, j) != 0.0) throw std::invalid_argument("make_butcher_pair: explicit matrix must be strictly lower triangular");
      if (j > i && t.at(i, j) != 0.0) throw std::invalid_argument("make_butcher_pair: implicit matrix must be lower triangular");
      t.c[static_cast<std::size_t>(i)] += t.a(i, j);
      t.ct[static_cast<std::size_t>(i)] += t.at(i, j);
    }
  }
  return t;
}

ButcherPair builtin_tableau(const std::string& name) {
  if (name == "FBEuler") {
    return make_butcher_pair(name, 2, {0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0}, {0, 1});
  }
  if (name == "DP2A242") {
    // gamma = 2 member of the family
    return make_butcher_pair(name, 4,
                             {0, 0, 0, 0,  //
                              0, 0, 0, 0,  //
                              0, 1, 0, 0,  //
                              0, 0.5, 0.5, 0},
                             {2, 0, 0, 0,    //
                              -2, 2, 0, 0,   //
                              0, -1, 2, 0,   //
                              0, 0.5, -1.5, 2},
                             {0, 0.5, 0.5, 0}, {0, 0.5, -1.5, 2});
  }
  if (name == "ARS443") {
    return make_butcher_pair(name, 5,
                             {0, 0, 0, 0, 0,                               //
                              0.5, 0, 0, 0, 0,                             //
                              11.0 / 18.0, 1.0 / 18.0, 0, 0, 0,            //
                              5.0 / 6.0, -5.0 / 6.0, 0.5, 0, 0,            //
                              0.25, 7.0 / 4.0, 0.75, -7.0 / 4.0, 0},
                             {0, 0, 0, 0, 0,                  //
                              0, 0.5, 0, 0, 0,                //
                              0, 1.0 / 6.0, 0.5, 0, 0,        //
                              0, -0.5, 0.5, 0.5, 0,           //
                              0, 1.5, -1.5, 0.5, 0.5},
                             {0.25, 7.0 / 4.0, 0.75, -7.0 / 4.0, 0}, {0, 1.5, -1.5, 0.5, 0.5});
  }
  throw std::invalid_argument("unknown tableau '" + name + "' (expected FBEuler, DP2A242 or ARS443)");
}

std::vector<std::string> builtin_tableau_names() { return {"FBEuler", "DP2A242", "ARS443"}; }

TableauClass classify(const ButcherPair& t) {
  TableauClass k;
  const int s = t.s;
  bool full_diag = true, hat_diag = true;
  for (int i = 0; i < s; ++i) {
    if (std::abs(t.at(i, i)) <= kTableauZero) {
      full_diag = false;
      if (i > 0) hat_diag = false;
    }
  }
  k.type_A = full_diag;
  const bool first_row_zero = std::abs(t.at(0, 0)) <= kTableauZero;
  k.type_CK = first_row_zero && hat_diag && s > 1;
  if (k.type_CK) {
    bool first_col_zero = true;
    for (int i = 1; i < s; ++i) first_col_zero = first_col_zero && std::abs(t.at(i, 0)) <= kTableauZero;
    k.ars = first_col_zero && std::abs(t.bt[0]) <= kTableauZero;
  }
  bool gsa = true;
  for (int j = 0; j < s; ++j) {
    gsa = gsa && near(t.a(s - 1, j), t.b[static_cast<std::size_t>(j)]) && near(t.at(s - 1, j), t.bt[static_cast<std::size_t>(j)]);
  }
  k.gsa = gsa;
  return k;
}

ShuOsherCoeffs shu_osher_coeffs(const ButcherPair& t) {
  const TableauClass cls = classify(t);
  const int s = t.s;
  ShuOsherCoeffs out;
  out.stages.resize(static_cast<std::size_t>(s));

  if (cls.type_A) {
    out.form = ShuOsherCoeffs::Form::A;
    for (int i = 0; i < s; ++i) {
      std::vector<double> row(t.At.begin() + i * s, t.At.begin() + i * s + i);
      auto w = row_times_inverse(row, i, [&](int p, int q) { return t.at(p, q); });
      auto& st = out.stages[static_cast<std::size_t>(i)];
      st.history = w;
      st.fn_weight = 1.0;
      for (double x : w) st.fn_weight -= x;
    }
    return out;
  }

  if (!cls.type_CK) {
    if (std::abs(t.at(0, 0)) <= kTableauZero) throw SingularTableau("shu_osher_coeffs: implicit lower-right block is singular");
    throw std::invalid_argument("shu_osher_coeffs: tableau is neither type A nor type CK");
  }
  for (int i = 0; i < s; ++i) {
    if (!near(t.c[static_cast<std::size_t>(i)], t.ct[static_cast<std::size_t>(i)])) {
      throw std::invalid_argument("shu_osher_coeffs: type CK form requires c = c~");
    }
  }
  out.form = ShuOsherCoeffs::Form::CK;
  out.stages[0].history.clear();
  for (int i = 1; i < s; ++i) {
    const int m = i - 1;  // size of the hatted leading block
    std::vector<double> row(static_cast<std::size_t>(m));
    for (int q = 0; q < m; ++q) row[static_cast<std::size_t>(q)] = t.at(i, q + 1);
    auto B = row_times_inverse(row, m, [&](int p, int q) { return t.at(p + 1, q + 1); });

    auto& st = out.stages[static_cast<std::size_t>(i)];
    st.history.assign(static_cast<std::size_t>(i), 0.0);
    st.explicit_weights.assign(static_cast<std::size_t>(i), 0.0);
    st.fn_weight = 1.0;
    double d = t.a(i, 0), dt = t.at(i, 0);
    for (int q = 0; q < m; ++q) {
      const double Bq = B[static_cast<std::size_t>(q)];
      st.history[static_cast<std::size_t>(q + 1)] = Bq;
      st.fn_weight -= Bq;
      d -= Bq * t.a(q + 1, 0);
      dt -= Bq * t.at(q + 1, 0);
    }
    for (int q = 0; q < m; ++q) {
      double Dq = t.a(i, q + 1);
      for (int p = 0; p < m; ++p) Dq -= B[static_cast<std::size_t>(p)] * t.a(p + 1, q + 1);
      st.explicit_weights[static_cast<std::size_t>(q + 1)] = Dq;
    }
    st.explicit_weights[0] = d;
    st.implicit_first = dt;
  }
  return out;
}

namespace {

double parse_number(const std::string& tok, const std::string& source, int line) {
  auto fail = [&]() -> double {
    throw TableauParseError(source + ":" + std::to_string(line) + ": invalid number '" + tok + "'", line);
  };
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      fail();
    }
    if (used != s.size() || !std::isfinite(v)) fail();
    return v;
  };
  const auto slash = tok.find('/');
  if (slash == std::string::npos) return to_double(tok);
  const double num = to_double(tok.substr(0, slash));
  const double den = to_double(tok.substr(slash + 1));
  if (den == 0.0) fail();
  return num / den;
}

}  // namespace

ButcherPair parse_tableau(std::istream& in, const std::string& source) {
  auto err = [&](int line, const std::string& msg) -> TableauParseError {
    return TableauParseError(source + ":" + std::to_string(line) + ": " + msg, line);
  };
  std::string name = "custom";
  int s = 0;
  std::vector<double> A, At, b, bt, c_given, ct_given;
  std::vector<double>* matrix = nullptr;
  int rows_left = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string w; ls >> w;) tok.push_back(w);
    if (tok.empty()) continue;

    auto numbers = [&](std::size_t from) {
      std::vector<double> v;
      for (std::size_t k = from; k < tok.size(); ++k) v.push_back(parse_number(tok[k], source, lineno));
      if (v.size() != static_cast<std::size_t>(s)) {
        throw err(lineno, "expected " + std::to_string(s) + " entries, got " + std::to_string(v.size()));
      }
      return v;
    };

    if (rows_left > 0) {
      auto row = numbers(0);
      matrix->insert(matrix->end(), row.begin(), row.end());
      --rows_left;
      continue;
    }
    const std::string& key = tok[0];
    if (key == "name") {
      if (tok.size() != 2) throw err(lineno, "'name' takes one word");
      name = tok[1];
    } else if (key == "stages") {
      if (tok.size() != 2) throw err(lineno, "'stages' takes one integer");
      try {
        std::size_t used = 0;
        s = std::stoi(tok[1], &used);
        if (used != tok[1].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw err(lineno, "invalid stage count '" + tok[1] + "'");
      }
      if (s < 1 || s > 64) throw err(lineno, "stage count out of range");
    } else if (key == "explicit" || key == "implicit") {
      if (s == 0) throw err(lineno, "'stages' must precede the matrices");
      if (tok.size() != 1) throw err(lineno, "'" + key + "' header takes no values");
      matrix = key == "explicit" ? &A : &At;
      if (!matrix->empty()) throw err(lineno, "duplicate '" + key + "' block");
      rows_left = s;
    } else if (key == "explicit_b" || key == "implicit_b" || key == "explicit_c" || key == "implicit_c") {
      if (s == 0) throw err(lineno, "'stages' must precede '" + key + "'");
      auto v = numbers(1);
      if (key == "explicit_b") b = v;
      else if (key == "implicit_b") bt = v;
      else if (key == "explicit_c") c_given = v;
      else ct_given = v;
    } else {
      throw err(lineno, "unknown key '" + key + "'");
    }
  }
  if (rows_left > 0) throw err(lineno, "unexpected end of input inside a matrix block");
  if (s == 0) throw err(0, "missing 'stages'");
  if (A.empty()) throw err(0, "missing 'explicit' block");
  if (At.empty()) throw err(0, "missing 'implicit' block");
  if (b.empty()) throw err(0, "missing 'explicit_b'");
  if (bt.empty()) throw err(0, "missing 'implicit_b'");
  ButcherPair t;
  try {
    t = make_butcher_pair(name, s, A, At, b, bt);
  } catch (const std::invalid_argument& e) {
    throw err(0, e.what());
  }
  for (int i = 0; i < s; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (!c_given.empty() && !near(c_given[k], t.c[k])) throw err(0, "explicit_c disagrees with the row sums");
    if (!ct_given.empty() && !near(ct_given[k], t.ct[k])) throw err(0, "implicit_c disagrees with the row sums");
  }
  return t;
}

ButcherPair load_tableau_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw TableauParseError("cannot open tableau file '" + path + "'", 0);
  return parse_tableau(in, path);
}

ButcherPair resolve_tableau(const std::string& name_or_path) {
  for (const auto& n : builtin_tableau_names())
    if (n == name_or_path) return builtin_tableau(n);
  std::ifstream probe(name_or_path);
  if (!probe) throw std::invalid_argument("unknown tableau '" + name_or_path + "' (not a builtin and no such file)");
  return load_tableau_file(name_or_path);
}

}  // namespace boltz
