#pragma once

// Detector-modulated Rusanov diffusion, blended mass and the stabilized
// residual R(U) = Mbar(U) (U - U_old) / dt + (K(U) + B(U)) U - G.

#include <algorithm>
#include <vector>

#include "eulerstab/constraints.hpp"
#include "eulerstab/euler_physics.hpp"
#include "eulerstab/fe_assembly.hpp"
#include "eulerstab/shock_detector.hpp"

namespace eulerstab {

/// Per-step data of the residual. A null u_old means steady mode (no mass
/// term).
struct StepData {
  const BlockVector* u_old = nullptr;
  double dt = 0.0;
  const BlockVector* forcing = nullptr;
  const Constraints* constraints = nullptr;
};

struct Stabilization {
  DetectorParams detector;
  std::vector<int> components{kDensity};
};

/// nu^e_ij for one cell: max(beta_i lambda_ij, beta_j lambda_ji), smooth max
/// with sigma_h in the differentiable variant.
template <class T>
T elemental_nu(const RoeAverageT<T>& avg, const Vec2& c_ij, const Vec2& c_ji, const T& beta_i, const T& beta_j,
               const ScaledParams& s, bool differentiable) {
  const T lij = beta_i * spectral_radius(avg, c_ij, s.eps_h);
  const T lji = beta_j * spectral_radius(avg, c_ji, s.eps_h);
  return differentiable ? smooth_max(lij, lji, s.sigma_h) : hard_max(lij, lji);
}

/// Largest |v| + c over the nodes.
double max_wave_speed(const BlockVector& U, double gamma = kDefaultGamma);

/// Per-node detector beta (scalar type T) of the components in C.
template <class T>
std::vector<T> node_detectors(const Discretization& d, const std::vector<StateT<T>>& U, const Stabilization& stab) {
  const int n = d.num_nodes();
  std::vector<T> beta(n);
  std::vector<T> alphas(stab.components.size());
  for (int i = 0; i < n; ++i) {
    const double h = d.mesh.h_char(i);
    for (std::size_t c = 0; c < stab.components.size(); ++c) {
      const int comp = stab.components[c];
      const auto field = [&U, comp](int k) -> const T& { return U[k][comp]; };
      alphas[c] = detector_node<T>(field, d.geometry, i, stab.detector, h);
    }
    beta[i] = combine_detectors(alphas, stab.detector, h);
  }
  return beta;
}

template <class T>
void check_admissible_all(const std::vector<StateT<T>>& U, double gamma) {
  for (std::size_t i = 0; i < U.size(); ++i) {
    const double rho = value_of(U[i][0]);
    if (!(rho > 0.0)) throw InadmissibleState("non-positive density", static_cast<int>(i), rho);
    const double p = value_of(pressure(U[i], gamma));
    if (!(p > 0.0)) throw InadmissibleState("non-positive pressure", static_cast<int>(i), p);
  }
}

/// Stabilized residual with constrained rows replaced. Generic over the
/// scalar so the same code yields the exact Jacobian with dual numbers.
template <class T>
std::vector<StateT<T>> stabilized_residual_t(const Discretization& d, const std::vector<StateT<T>>& U,
                                             const StepData& step, const Stabilization& stab,
                                             std::vector<double>* beta_out = nullptr) {
  const int n = d.num_nodes();
  const double gamma = d.gamma;
  const auto& pat = *d.pattern;
  const DetectorParams& dp = stab.detector;
  check_admissible_all(U, gamma);

  const std::vector<T> beta = node_detectors(d, U, stab);
  if (beta_out != nullptr) {
    beta_out->resize(n);
    for (int i = 0; i < n; ++i) (*beta_out)[i] = value_of(beta[i]);
  }

  std::vector<StateT<T>> R(n);
  for (auto& r : R) r.fill(T(0.0));

  // Galerkin part: sum_j c_ij . f(u_j).
  std::vector<std::array<StateT<T>, kDim>> f(n);
  for (int i = 0; i < n; ++i) f[i] = flux(U[i], gamma);
  for (int i = 0; i < n; ++i) {
    for (int p = pat.row_ptr[i]; p < pat.row_ptr[i + 1]; ++p) {
      const int j = pat.cols[p];
      const Vec2& c = d.cvec.global[p];
      for (int k = 0; k < kComponents; ++k) R[i][k] += c[0] * f[j][0][k] + c[1] * f[j][1][k];
    }
  }

  const bool transient = step.u_old != nullptr;
  std::vector<StateT<T>> delta;
  if (transient) {
    delta.resize(n);
    const double inv_dt = 1.0 / step.dt;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < kComponents; ++k) delta[i][k] = (U[i][k] - (*step.u_old)[i][k]) * inv_dt;
      for (int k = 0; k < kComponents; ++k) R[i][k] += d.mass.lumped[i] * delta[i][k];
    }
  }

  // Pair terms, once per unordered pair.
  for (int i = 0; i < n; ++i) {
    for (int p = pat.row_ptr[i]; p < pat.row_ptr[i + 1]; ++p) {
      const int j = pat.cols[p];
      if (j <= i) continue;
      const double h = std::max(d.mesh.h_char(i), d.mesh.h_char(j));
      const ScaledParams s = scale_params(dp, h);

      const RoeAverageT<T> avg = roe_average(U[i], U[j], gamma);
      const PairCells& pc = d.cvec.pairs[p];
      T nu(0.0);
      for (int e = 0; e < pc.count; ++e) {
        nu += elemental_nu(avg, pc.c_ij[e], pc.c_ji[e], beta[i], beta[j], s, dp.differentiable);
      }
      for (int k = 0; k < kComponents; ++k) {
        const T flow = nu * (U[i][k] - U[j][k]);
        R[i][k] += flow;
        R[j][k] -= flow;
      }

      if (transient) {
        const T theta = dp.differentiable ? smooth_max(beta[i], beta[j], s.sigma_h) : hard_max(beta[i], beta[j]);
        const T w = (1.0 - theta) * d.mass.consistent[p];
        for (int k = 0; k < kComponents; ++k) {
          const T diff = w * (delta[j][k] - delta[i][k]);
          R[i][k] += diff;
          R[j][k] -= diff;
        }
      }
    }
  }

  if (step.forcing != nullptr && !step.forcing->empty()) {
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < kComponents; ++k) R[i][k] -= (*step.forcing)[i][k];
    }
  }
  if (step.constraints != nullptr) step.constraints->apply_residual(U, R);
  return R;
}

inline BlockVector stabilized_residual(const Discretization& d, const BlockVector& U, const StepData& step,
                                       const Stabilization& stab, std::vector<double>* beta_out = nullptr) {
  return stabilized_residual_t<double>(d, U, step, stab, beta_out);
}

/// nu_ij per adjacency position (zero on the diagonal) for detector values
/// beta; beta = 1 everywhere gives full Rusanov diffusion.
std::vector<double> pair_diffusion(const Discretization& d, const BlockVector& U, const std::vector<double>& beta,
                                   const DetectorParams& params);

/// Graph-Laplacian diffusion matrix with blocks nu_ij I.
BlockSparseMatrix assemble_B(const Discretization& d, const BlockVector& U, const std::vector<double>& beta,
                             const DetectorParams& params);

/// Blended mass scalar entries aligned with the adjacency:
/// Mbar_ij = (1 - theta_ij) M_ij for j != i, Mbar_ii = m_i - sum_{j != i} Mbar_ij.
std::vector<double> assemble_blended_mass(const Discretization& d, const std::vector<double>& beta,
                                          const DetectorParams& params);

}  // namespace eulerstab
