#ifndef MCG_ERRATA_HPP
#define MCG_ERRATA_HPP

// Printed-formula audit. The displayed score components and second
// derivatives are transcribed literally so they can be compared against
// the derivatives of the implemented likelihood; the series identities are
// compared against quadrature. Each finding becomes one Erratum record.

#include <cstdint>
#include <string>
#include <vector>

#include "mcg/inference.hpp"

namespace mcg {

/// Score components (U_a, U_b, U_c, U_theta, U_gamma) as displayed,
/// including the (1 - t^c) misprints in U_b and U_c. Gompertz base only.
FullVector printed_score(const FullVector& full, const Dataset& data);

/// Second derivatives J_aa ... J_gammagamma as displayed (raw d^2 l, before
/// the leading minus sign of the information matrix).
FullMatrix printed_hessian(const FullVector& full, const Dataset& data);

struct Erratum {
  std::string id;
  std::string location;     // which display or passage
  std::string category;     // printed_formula | series_divergence | prose
  std::string printed;
  std::string implemented;
  double discrepancy;       // max relative discrepancy observed; NaN when not numeric
  bool confirmed;           // discrepancy above tolerance, or a structural defect
  std::string note;
};

struct ErrataConfig {
  int random_points = 25;
  std::uint64_t seed = 7;
  double tolerance = 1e-6;
};

/// Per-entry maximum relative discrepancy between printed and analytic
/// derivatives over random parameter points and small simulated datasets.
/// Index 0..4 are the score components, 5.. the 15 upper-triangle entries
/// in row order (aa, ab, ac, at, ag, bb, bc, ...).
std::vector<double> derivative_discrepancies(const ErrataConfig& cfg = {});

/// Name of entry k of derivative_discrepancies ("U_a", "J_ac", ...).
std::string derivative_entry_name(int k);

std::vector<Erratum> collect_errata(const ErrataConfig& cfg = {});

/// JSON document {"schema_version": 1, "errata": [...]}.
std::string errata_json(const std::vector<Erratum>& errata);

}  // namespace mcg

#endif  // MCG_ERRATA_HPP
