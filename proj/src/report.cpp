#include "boltz/report.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "boltz/analysis.hpp"
#include "boltz/errors.hpp"

namespace boltz {

namespace {

std::string type_name(const TableauClass& c) {
  if (c.type_A) return "A";
  if (c.type_CK) return "CK";
  return "neither";
}

nlohmann::ordered_json report(const ButcherPair& t) {
  const TableauClass cls = classify(t);
  nlohmann::ordered_json j;
  j["name"] = t.name;
  j["stages"] = t.s;
  j["type"] = type_name(cls);
  j["ars"] = cls.ars;
  j["gsa"] = cls.gsa;
  j["c"] = t.c;
  j["c_implicit"] = t.ct;
  try {
    const OrderReport o = limiting_order_coeffs(t);
    j["order"] = {{"verdict", o.order},
                  {"first_order", o.first_order},
                  {"second_order", o.second_order},
                  {"third_order", o.third_order},
                  {"C", o.C},
                  {"D", o.D},
                  {"B", o.B},
                  {"G", o.G},
                  {"H", o.H}};
  } catch (const SingularTableau& e) {
    j["order"] = {{"error", e.what()}};
  }
  if (cls.type_CK) {
    const FirstOrderReport gh = first_order_gh(t);
    j["first_order_gh"] = {{"g", gh.g}, {"h", gh.h}, {"verdict", gh.verdict}};
    const PositivityReport p = positivity_zmax(t);
    if (p.unconditional) {
      j["positivity"] = "unconditional";
      j["z_max"] = nullptr;
    } else {
      j["positivity"] = "conditional";
      j["z_max"] = p.z_max;
    }
    j["positivity_binding"] = p.violated;
    j["positivity_partial_coverage"] = p.partial_coverage;
  } else {
    j["positivity"] = "not applicable";
    j["z_max"] = nullptr;
  }
  return j;
}

}  // namespace

std::string tableau_report_json(const ButcherPair& t) { return report(t).dump(2); }

std::string tableau_report_text(const ButcherPair& t) {
  const auto j = report(t);
  std::ostringstream out;
  out << "tableau " << t.name << " (" << t.s << " stages)\n";
  out << "  type: " << j["type"].get<std::string>() << (j["ars"].get<bool>() ? ", ARS" : "")
      << (j["gsa"].get<bool>() ? ", GSA" : ", not GSA") << '\n';
  if (j["order"].contains("verdict")) {
    out << "  limiting-scheme order: " << j["order"]["verdict"].get<int>() << '\n';
  } else {
    out << "  limiting-scheme order: " << j["order"]["error"].get<std::string>() << '\n';
  }
  if (j.contains("first_order_gh")) {
    out << "  g/h first-order verdict: " << (j["first_order_gh"]["verdict"].get<bool>() ? "yes" : "no") << '\n';
  }
  out << "  positivity: " << j["positivity"].get<std::string>();
  if (j["z_max"].is_number()) out << ", dt beta / eps <= " << j["z_max"].get<double>();
  out << '\n';
  return out.str();
}

}  // namespace boltz
