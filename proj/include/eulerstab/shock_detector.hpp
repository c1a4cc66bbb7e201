#pragma once

// Per-node shock detector, plain and regularized.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "eulerstab/mesh.hpp"
#include "eulerstab/smooth_functions.hpp"

namespace eulerstab {

struct DetectorParams {
  double q = 10.0;
  double eps = 1e-4;
  double sigma = 1e-2;
  double zeta = 1e-10;
  bool differentiable = true;
  double length_scale = 1.0;    // L
  double lambda_max_ref = 1.0;  // |lambda_max| in the sigma scaling
};

struct ScaledParams {
  double eps_h = 0.0;
  double sigma_h = 0.0;
  double zeta_h = 0.0;
};

/// sigma_h = sigma lambda^2 L^-2 h^4, eps_h = eps L^-4 h^2, zeta_h = zeta / L
/// (two space dimensions). All zero for the non-differentiable variant.
inline ScaledParams scale_params(const DetectorParams& p, double h) {
  if (!p.differentiable) return {};
  const double L = p.length_scale;
  const double h2 = h * h;
  return {p.eps * h2 / (L * L * L * L), p.sigma * p.lambda_max_ref * p.lambda_max_ref * h2 * h2 / (L * L),
          p.zeta / L};
}

template <class T>
struct JumpMean {
  T jump;
  T mean;
};

/// Jump and mean of the linear reconstruction along one pair. eps_h > 0
/// switches the inner absolute values to |.|_down.
template <class T, class Field>
JumpMean<T> jump_and_mean(const Field& u, int i, const SymmetricPoint& sp, double eps_h) {
  const T ui = u(i);
  const T ua = u(sp.a);
  const T usym = sp.wb == 0.0 ? ua : ua + sp.wb * (u(sp.b) - ua);
  const T a = u(sp.j) - ui;
  const T b = usym - ui;
  const T jump = a / sp.r_len + b / sp.r_sym_len;
  const T mean = 0.5 * (smooth_abs_down(a, eps_h) / sp.r_len + smooth_abs_down(b, eps_h) / sp.r_sym_len);
  return {jump, mean};
}

/// alpha_i for one scalar field given as a callable node -> value.
template <class T, class Field>
T detector_node(const Field& u, const PairGeometry& geom, int i, const DetectorParams& p, double h_i) {
  const ScaledParams s = scale_params(p, h_i);
  T num(0.0);
  T den(0.0);
  for (const SymmetricPoint& sp : geom.pairs(i)) {
    const JumpMean<T> jm = jump_and_mean<T>(u, i, sp, s.eps_h);
    num += jm.jump;
    den += 2.0 * jm.mean;
  }
  if (!p.differentiable) {
    using std::abs;
    using std::pow;
    if (value_of(den) < 1e-300) return T(0.0);
    T ratio = abs(num) / den;
    if (value_of(ratio) > 1.0) ratio = T(1.0);
    return pow(ratio, p.q);
  }
  using std::pow;
  const T ratio = (smooth_abs_up(num, s.eps_h) + s.zeta_h) / (den + s.zeta_h);
  return pow(limiter_z(ratio), p.q);
}

/// Folds per-component detectors with a (smooth) max in ascending component
/// order.
template <class T>
T combine_detectors(const std::vector<T>& alphas, const DetectorParams& p, double h_i) {
  const ScaledParams s = scale_params(p, h_i);
  T beta = alphas.front();
  for (std::size_t k = 1; k < alphas.size(); ++k) {
    beta = p.differentiable ? smooth_max(beta, alphas[k], s.sigma_h) : hard_max(beta, alphas[k]);
  }
  return beta;
}

struct DetectorField {
  std::vector<std::vector<double>> alpha;  // [node][position in C]
  std::vector<double> beta;
};

/// Detector of the conserved components in C (indices into the state) at
/// every node. Throws std::invalid_argument for an empty C.
DetectorField system_detector(const Mesh& mesh, const PairGeometry& geom, const BlockVector& U,
                              const std::vector<int>& components, const DetectorParams& params);

}  // namespace eulerstab
