#include <algorithm>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "eulerstab/euler_physics.hpp"
#include "test_util.hpp"

using namespace eulerstab;
using eulerstab::test_util::random_state;
using eulerstab::test_util::random_vec;

namespace {

Eigen::Matrix4d to_eigen(const Block& b) {
  Eigen::Matrix4d m;
  for (int k = 0; k < 16; ++k) m(k / 4, k % 4) = b[k];
  return m;
}

State directional_flux(const State& u, const Vec2& n) {
  const auto f = flux(u);
  State out;
  for (int c = 0; c < kComponents; ++c) out[c] = f[0][c] * n[0] + f[1][c] * n[1];
  return out;
}

}  // namespace

TEST(Physics, PrimitiveRoundTrip) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 1000; ++k) {
    const State u = random_state(rng);
    const State back = conserved_from_primitive(primitive_from_conserved(u));
    for (int c = 0; c < kComponents; ++c) EXPECT_NEAR(back[c], u[c], 1e-12 * (1.0 + std::abs(u[c])));
  }
}

TEST(Physics, InadmissibleStatesThrow) {
  EXPECT_THROW(check_admissible({-1.0, 0.0, 0.0, 1.0}), InadmissibleState);
  EXPECT_THROW(check_admissible({1.0, 2.0, 0.0, 1.0}), InadmissibleState);
  EXPECT_THROW(conserved_from_primitive({1.0, {0.0, 0.0}, -1.0}), InadmissibleState);
  EXPECT_NO_THROW(check_admissible({1.0, 0.0, 0.0, 2.5}));
}

TEST(Physics, SodRoeAverage) {
  const State l{1.0, 0.0, 0.0, 2.5};
  const State r{0.125, 0.0, 0.0, 0.25};
  const RoeAverage avg = roe_average(l, r);
  EXPECT_NEAR(avg.rho, std::sqrt(0.125), 1e-14);
  EXPECT_NEAR(avg.enthalpy, 3.317157, 1e-6);
  EXPECT_NEAR(avg.sound_speed, 1.151896, 1e-6);
}

TEST(Physics, RoeAverageConsistentAndSymmetric) {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 1000; ++k) {
    const State a = random_state(rng);
    const State b = random_state(rng);
    const State same = roe_state(roe_average(a, a));
    for (int c = 0; c < kComponents; ++c) EXPECT_NEAR(same[c], a[c], 1e-12 * (1.0 + std::abs(a[c])));
    const RoeAverage ab = roe_average(a, b);
    const RoeAverage ba = roe_average(b, a);
    EXPECT_NEAR(ab.rho, ba.rho, 1e-13);
    EXPECT_NEAR(ab.enthalpy, ba.enthalpy, 1e-12 * ab.enthalpy);
    EXPECT_NEAR(ab.vel[0], ba.vel[0], 1e-12);
    EXPECT_NEAR(ab.vel[1], ba.vel[1], 1e-12);
  }
}

// f(u_j).n - f(u_i).n = f'(u_roe).n (u_j - u_i) for an ideal gas.
TEST(Physics, RoeLinearizationProperty) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 1000; ++k) {
    const State a = random_state(rng);
    const State b = random_state(rng);
    const Vec2 n = random_vec(rng);
    const Block A = flux_jacobian(roe_state(roe_average(a, b)), n);
    const State fa = directional_flux(a, n);
    const State fb = directional_flux(b, n);
    double scale = 0.0;
    for (int c = 0; c < kComponents; ++c) scale = std::max(scale, std::abs(fb[c] - fa[c]));
    for (int r = 0; r < kComponents; ++r) {
      double lin = 0.0;
      for (int c = 0; c < kComponents; ++c) lin += A[r * kComponents + c] * (b[c] - a[c]);
      EXPECT_NEAR(lin, fb[r] - fa[r], 1e-10 * (1.0 + scale));
    }
  }
}

TEST(Physics, WaveSpeedsMatchDenseEigensolver) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 1000; ++k) {
    const RoeAverage avg = roe_average(random_state(rng), random_state(rng));
    const Vec2 n = random_vec(rng);
    const Eigen::Vector4cd ev = to_eigen(flux_jacobian(roe_state(avg), n)).eigenvalues();
    std::array<double, 4> dense;
    for (int c = 0; c < 4; ++c) {
      EXPECT_NEAR(ev[c].imag(), 0.0, 1e-8);
      dense[c] = ev[c].real();
    }
    std::array<double, 4> ws = wave_speeds(avg, n);
    std::sort(dense.begin(), dense.end());
    std::sort(ws.begin(), ws.end());
    const double scale = 1.0 + std::abs(ws[3]) + std::abs(ws[0]);
    for (int c = 0; c < 4; ++c) EXPECT_NEAR(ws[c], dense[c], 1e-8 * scale);
    EXPECT_NEAR(spectral_radius(avg, n, 0.0), std::max(std::abs(ws[0]), std::abs(ws[3])), 1e-12 * scale);
  }
}

TEST(Physics, FluxJacobianMatchesCentralDifferences) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 200; ++k) {
    const State u = random_state(rng);
    const Vec2 n = random_vec(rng);
    const Block A = flux_jacobian(u, n);
    for (int c = 0; c < kComponents; ++c) {
      const double t = 1e-6 * (1.0 + std::abs(u[c]));
      State up = u, um = u;
      up[c] += t;
      um[c] -= t;
      const State fp = directional_flux(up, n);
      const State fm = directional_flux(um, n);
      for (int r = 0; r < kComponents; ++r) {
        EXPECT_NEAR(A[r * kComponents + c], (fp[r] - fm[r]) / (2.0 * t), 1e-5 * (1.0 + std::abs(A[r * kComponents + c])));
      }
    }
  }
}

TEST(Physics, GroupFluxIdentityKUEqualsFlux) {
  // f(u).n = f'(u).n u (flux is homogeneous of degree one).
  std::mt19937_64 rng(6);
  for (int k = 0; k < 500; ++k) {
    const State u = random_state(rng);
    const Vec2 n = random_vec(rng);
    const Block A = flux_jacobian(u, n);
    const State f = directional_flux(u, n);
    for (int r = 0; r < kComponents; ++r) {
      double s = 0.0;
      for (int c = 0; c < kComponents; ++c) s += A[r * kComponents + c] * u[c];
      EXPECT_NEAR(s, f[r], 1e-11 * (1.0 + std::abs(f[r])));
    }
  }
}
