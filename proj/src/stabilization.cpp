#include "eulerstab/stabilization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eulerstab {

DetectorField system_detector(const Mesh& mesh, const PairGeometry& geom, const BlockVector& U,
                              const std::vector<int>& components, const DetectorParams& params) {
  if (components.empty()) throw std::invalid_argument("system_detector: empty component set");
  for (int c : components) {
    if (c < 0 || c >= kComponents) throw std::invalid_argument("system_detector: bad component index");
  }
  DetectorField out;
  const int n = mesh.num_nodes();
  out.alpha.assign(n, std::vector<double>(components.size(), 0.0));
  out.beta.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double h = mesh.h_char(i);
    for (std::size_t c = 0; c < components.size(); ++c) {
      const int comp = components[c];
      const auto field = [&U, comp](int k) { return U[k][comp]; };
      out.alpha[i][c] = detector_node<double>(field, geom, i, params, h);
    }
    out.beta[i] = combine_detectors(out.alpha[i], params, h);
  }
  return out;
}

double max_wave_speed(const BlockVector& U, double gamma) {
  double m = 0.0;
  for (const State& u : U) {
    const double v = std::hypot(u[1], u[2]) / u[0];
    m = std::max(m, v + sound_speed(u, gamma));
  }
  return m;
}

std::vector<double> pair_diffusion(const Discretization& d, const BlockVector& U, const std::vector<double>& beta,
                                   const DetectorParams& params) {
  const auto& pat = *d.pattern;
  std::vector<double> nu(pat.nnz(), 0.0);
  for (int i = 0; i < d.num_nodes(); ++i) {
    for (int p = pat.row_ptr[i]; p < pat.row_ptr[i + 1]; ++p) {
      const int j = pat.cols[p];
      if (j <= i) continue;
      const double h = std::max(d.mesh.h_char(i), d.mesh.h_char(j));
      const ScaledParams s = scale_params(params, h);
      const RoeAverage avg = roe_average(U[i], U[j], d.gamma);
      const PairCells& pc = d.cvec.pairs[p];
      double v = 0.0;
      for (int e = 0; e < pc.count; ++e) {
        v += elemental_nu(avg, pc.c_ij[e], pc.c_ji[e], beta[i], beta[j], s, params.differentiable);
      }
      nu[p] = v;
      nu[d.transpose[p]] = v;
    }
  }
  return nu;
}

BlockSparseMatrix assemble_B(const Discretization& d, const BlockVector& U, const std::vector<double>& beta,
                             const DetectorParams& params) {
  const std::vector<double> nu = pair_diffusion(d, U, beta, params);
  BlockSparseMatrix B(d.pattern);
  const auto& pat = *d.pattern;
  for (int i = 0; i < d.num_nodes(); ++i) {
    for (int p = pat.row_ptr[i]; p < pat.row_ptr[i + 1]; ++p) {
      if (pat.cols[p] == i) continue;
      B.at(p) = identity_block(-nu[p]);
      B.add_scaled_identity(i, i, nu[p]);
    }
  }
  return B;
}

std::vector<double> assemble_blended_mass(const Discretization& d, const std::vector<double>& beta,
                                          const DetectorParams& params) {
  const auto& pat = *d.pattern;
  std::vector<double> m(pat.nnz(), 0.0);
  for (int i = 0; i < d.num_nodes(); ++i) {
    double off = 0.0;
    for (int p = pat.row_ptr[i]; p < pat.row_ptr[i + 1]; ++p) {
      const int j = pat.cols[p];
      if (j == i) continue;
      const double h = std::max(d.mesh.h_char(i), d.mesh.h_char(j));
      const double s = scale_params(params, h).sigma_h;
      const double theta = params.differentiable ? smooth_max(beta[i], beta[j], s) : hard_max(beta[i], beta[j]);
      m[p] = (1.0 - theta) * d.mass.consistent[p];
      off += m[p];
    }
    m[d.diagonal[i]] = d.mass.lumped[i] - off;
  }
  return m;
}

}  // namespace eulerstab
