#include "fovea/eccentricity.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "fovea/error.hpp"

namespace fovea {

namespace {

constexpr std::array<EccentricityPoint, 10> kWilson{{
    {0.5, 256},
    {1, 552},
    {2, 848},
    {5, 1239},
    {10, 1534},
    {30, 2003},
    {45, 2176},
    {60, 2299},
    {70, 2365},
    {90, 2472},
}};

// Closed-form scale for a fixed offset (the model is linear in scale).
double best_scale(std::span<const EccentricityPoint> table, double offset) {
  double gy = 0.0;
  double gg = 0.0;
  for (const auto& p : table) {
    const double g = std::log1p(p.eccentricity_deg / offset);
    gy += g * p.fields;
    gg += g * g;
  }
  return gy / gg;
}

double profile_sse(std::span<const EccentricityPoint> table, double log_offset) {
  const double offset = std::exp(log_offset);
  const double scale = best_scale(table, offset);
  double sse = 0.0;
  for (const auto& p : table) {
    const double r = scale * std::log1p(p.eccentricity_deg / offset) - p.fields;
    sse += r * r;
  }
  return sse;
}

}  // namespace

double FitResult::operator()(double eccentricity_deg) const {
  return scale * std::log1p(eccentricity_deg / offset);
}

std::span<const EccentricityPoint> wilson_table() { return kWilson; }

double fit_rmse(std::span<const EccentricityPoint> table, double scale, double offset) {
  double sse = 0.0;
  for (const auto& p : table) {
    const double r = scale * std::log1p(p.eccentricity_deg / offset) - p.fields;
    sse += r * r;
  }
  return std::sqrt(sse / static_cast<double>(table.size()));
}

FitResult fit_eccentricity(std::span<const EccentricityPoint> table) {
  if (table.size() < 3) {
    throw Error(ErrorCode::DegenerateFit, "need at least 3 rows, got " + std::to_string(table.size()));
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& p = table[i];
    if (!std::isfinite(p.eccentricity_deg) || !std::isfinite(p.fields) || p.eccentricity_deg <= 0) {
      throw Error(ErrorCode::DegenerateFit, "row " + std::to_string(i) + " is not a positive finite value");
    }
    if (i > 0 && (p.eccentricity_deg <= table[i - 1].eccentricity_deg ||
                  p.fields <= table[i - 1].fields)) {
      throw Error(ErrorCode::DegenerateFit, "table must be strictly increasing at row " + std::to_string(i));
    }
  }

  // Scan log(offset) over a wide bracket, then golden-section on the best cell.
  constexpr double kLo = -14.0;  // offset ~ 8e-7
  constexpr double kHi = 14.0;   // offset ~ 1.2e6
  constexpr int kSteps = 560;
  int best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kSteps; ++i) {
    const double x = kLo + (kHi - kLo) * i / kSteps;
    const double s = profile_sse(table, x);
    if (s < best_sse) {
      best_sse = s;
      best = i;
    }
  }
  const double step = (kHi - kLo) / kSteps;
  double a = kLo + step * (best - 1);
  double b = kLo + step * (best + 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = profile_sse(table, c);
  double fd = profile_sse(table, d);
  for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = profile_sse(table, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = profile_sse(table, d);
    }
  }

  FitResult fit;
  fit.offset = std::exp(0.5 * (a + b));
  fit.scale = best_scale(table, fit.offset);

  // Gauss-Newton polish on (scale, offset); keep a step only if it helps.
  double sse = profile_sse(table, std::log(fit.offset));
  for (int it = 0; it < 20; ++it) {
    double jtj00 = 0, jtj01 = 0, jtj11 = 0, jtr0 = 0, jtr1 = 0;
    for (const auto& p : table) {
      const double e = p.eccentricity_deg;
      const double g = std::log1p(e / fit.offset);
      const double r = fit.scale * g - p.fields;
      const double ds = g;
      const double doff = -fit.scale * e / (fit.offset * (fit.offset + e));
      jtj00 += ds * ds;
      jtj01 += ds * doff;
      jtj11 += doff * doff;
      jtr0 += ds * r;
      jtr1 += doff * r;
    }
    const double det = jtj00 * jtj11 - jtj01 * jtj01;
    if (!(std::abs(det) > 0)) break;
    const double step_s = (jtj11 * jtr0 - jtj01 * jtr1) / det;
    const double step_o = (jtj00 * jtr1 - jtj01 * jtr0) / det;
    const double ns = fit.scale - step_s;
    const double no = fit.offset - step_o;
    if (!(no > 0)) break;
    const double nsse = std::pow(fit_rmse(table, ns, no), 2) * static_cast<double>(table.size());
    if (!(nsse < sse)) break;
    fit.scale = ns;
    fit.offset = no;
    sse = nsse;
  }
  fit.rmse = fit_rmse(table, fit.scale, fit.offset);
  return fit;
}

}  // namespace fovea
