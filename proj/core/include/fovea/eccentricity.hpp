#pragma once

#include <span>
#include <vector>

namespace fovea {

/// One row of an eccentricity table: angle from the fovea (degrees) and the
/// cumulative number of retinal data fields out to that angle.
struct EccentricityPoint {
  double eccentricity_deg = 0.0;
  double fields = 0.0;
};

/// Parameters of f(e) = scale * ln(1 + e / offset) and the fit residual.
struct FitResult {
  double scale = 0.0;
  double offset = 0.0;
  double rmse = 0.0;

  double operator()(double eccentricity_deg) const;
};

/// Cumulative data-field counts versus eccentricity for the human retina
/// (Wilson's table, 0.5 to 90 degrees).
std::span<const EccentricityPoint> wilson_table();

/// Least-squares fit of scale * ln(1 + e / offset). Throws DegenerateFit
/// unless the table has >= 3 rows, strictly increasing in both columns, with
/// positive eccentricities.
FitResult fit_eccentricity(std::span<const EccentricityPoint> table);

/// Root-mean-square residual of the model with the given parameters.
double fit_rmse(std::span<const EccentricityPoint> table, double scale, double offset);

}  // namespace fovea
