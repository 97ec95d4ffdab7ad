#pragma once

#include <string>

#include "boltz/tableau.hpp"

namespace boltz {

/// Classification, order report, g/h verdict and positivity bound of a tableau as a JSON document.
/// "positivity" is "unconditional", "conditional" (with "z_max") or "not applicable" (non-CK).
std::string tableau_report_json(const ButcherPair& t);

/// Human-readable form of the same report.
std::string tableau_report_text(const ButcherPair& t);

}  // namespace boltz
