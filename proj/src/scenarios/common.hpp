#pragma once

#include "qmo/markov.hpp"
#include "qmo/report.hpp"
#include "qmo/scenarios.hpp"

#include <string>

namespace qmo::detail {

// Records "<name>" as a boolean check; the scenario stops when it fails.
inline bool require_causal(ScenarioReport& r, const ProcessTensor& ups, const std::string& name = "causality") {
  const CausalityReport c = check_causality(ups);
  double worst = 0.0;
  for (const auto& l : c.levels) worst = std::max(worst, l.residual);
  Check& ch = r.boolean(name, c.pass);
  ch.note = "max residual " + json(worst).dump() + (c.pass ? "" : "; " + c.diagnostics);
  return c.pass;
}

inline double max_mi(const MarkovOrderReport& rep) {
  double m = 0.0;
  for (const auto& row : rep.rows)
    if (!row.vacuous) m = std::max(m, row.mi_bits);
  return m;
}

inline double max_distance(const MarkovOrderReport& rep) {
  double m = 0.0;
  for (const auto& row : rep.rows)
    if (!row.vacuous) m = std::max(m, row.product_distance);
  return m;
}

}  // namespace qmo::detail
