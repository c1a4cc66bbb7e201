#include <cmath>
#include <numbers>
#include <stdexcept>

#include "eulerstab/benchmarks.hpp"

namespace eulerstab {

double theta_beta_mach(double beta, double mach1, double gamma) {
  const double m2s = mach1 * mach1 * std::sin(beta) * std::sin(beta);
  return 2.0 / std::tan(beta) * (m2s - 1.0) / (mach1 * mach1 * (gamma + std::cos(2.0 * beta)) + 2.0);
}

ObliqueShock oblique_shock(double mach1, double deflection_deg, double gamma) {
  if (!(mach1 > 1.0)) throw std::domain_error("oblique_shock: upstream flow must be supersonic");
  if (deflection_deg < 0.0) throw std::domain_error("oblique_shock: negative deflection");
  const double deg = std::numbers::pi / 180.0;
  const double theta = deflection_deg * deg;
  const double tan_theta = std::tan(theta);
  const double mu = std::asin(1.0 / mach1);

  // Maximum deflection: theta(beta) is unimodal on (mu, pi/2).
  double lo = mu;
  double hi = 0.5 * std::numbers::pi;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (theta_beta_mach(m1, mach1, gamma) < theta_beta_mach(m2, mach1, gamma)) {
      lo = m1;
    } else {
      hi = m2;
    }
  }
  const double beta_max = 0.5 * (lo + hi);
  if (tan_theta > theta_beta_mach(beta_max, mach1, gamma)) {
    throw std::domain_error("oblique_shock: deflection beyond detachment, shock is detached");
  }

  double beta = mu;
  if (theta > 0.0) {
    double a = mu;
    double b = beta_max;
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (a + b);
      if (theta_beta_mach(m, mach1, gamma) < tan_theta) {
        a = m;
      } else {
        b = m;
      }
    }
    beta = 0.5 * (a + b);
  }

  ObliqueShock out;
  out.wave_angle_deg = beta / deg;
  out.shock_angle_deg = (beta - theta) / deg;
  const double mn1 = mach1 * std::sin(beta);
  const double mn1s = mn1 * mn1;
  if (theta == 0.0) {
    out.rho_ratio = 1.0;
    out.p_ratio = 1.0;
    out.mach2 = mach1;
    return out;
  }
  out.rho_ratio = (gamma + 1.0) * mn1s / ((gamma - 1.0) * mn1s + 2.0);
  out.p_ratio = 1.0 + 2.0 * gamma / (gamma + 1.0) * (mn1s - 1.0);
  const double mn2s = (1.0 + 0.5 * (gamma - 1.0) * mn1s) / (gamma * mn1s - 0.5 * (gamma - 1.0));
  out.mach2 = std::sqrt(mn2s) / std::sin(beta - theta);
  return out;
}

}  // namespace eulerstab
