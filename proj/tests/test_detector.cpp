#include <gtest/gtest.h>

#include "eulerstab/dual.hpp"
#include "eulerstab/shock_detector.hpp"
#include "eulerstab/smooth_functions.hpp"
#include "test_util.hpp"

using namespace eulerstab;

namespace {

struct Stencils {
  Mesh mesh;
  PairGeometry geom;
};

const Stencils& stencils() {
  static const Stencils s = [] {
    std::mt19937_64 rng(31);
    Mesh m = test_util::jittered_mesh(10, 10, 0.3, rng);
    PairGeometry g(m);
    return Stencils{std::move(m), std::move(g)};
  }();
  return s;
}

double alpha(const std::vector<double>& u, int i, const DetectorParams& p) {
  const auto& s = stencils();
  return detector_node<double>([&](int k) { return u[k]; }, s.geom, i, p, s.mesh.h_char(i));
}

DetectorParams params(bool differentiable, double q = 2.0) {
  DetectorParams p;
  p.q = q;
  p.differentiable = differentiable;
  p.eps = 1e-4;
  p.sigma = 1e-2;
  p.zeta = 1e-10;
  p.length_scale = stencils().mesh.L_char();
  return p;
}

bool strict_extremum(const std::vector<double>& u, int i) {
  bool max = true, min = true;
  for (int j : stencils().mesh.neighbors(i)) {
    if (j == i) continue;
    max = max && u[j] < u[i];
    min = min && u[j] > u[i];
  }
  return max || min;
}

}  // namespace

TEST(Detector, BoundsOverRandomStencils) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  const int n = stencils().mesh.num_nodes();
  int evaluations = 0;
  for (int field = 0; evaluations < 10000; ++field) {
    std::vector<double> u(n);
    for (double& x : u) x = val(rng);
    for (int i = 0; i < n; ++i, ++evaluations) {
      for (bool diff : {false, true}) {
        const double a = alpha(u, i, params(diff, 1.0 + field % 10));
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, 1.0);
      }
    }
  }
}

TEST(Detector, ExtremaActivateFully) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  const int n = stencils().mesh.num_nodes();
  int extrema = 0;
  for (int field = 0; field < 100; ++field) {
    std::vector<double> u(n);
    for (double& x : u) x = val(rng);
    for (int i = 0; i < n; ++i) {
      if (!strict_extremum(u, i)) continue;
      ++extrema;
      EXPECT_NEAR(alpha(u, i, params(false, 10.0)), 1.0, 1e-12);
      EXPECT_NEAR(alpha(u, i, params(true, 10.0)), 1.0, 1e-12);
    }
  }
  EXPECT_GT(extrema, 500);
}

TEST(Detector, LinearFieldsAreNotDetected) {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  const auto& m = stencils().mesh;
  for (int field = 0; field < 100; ++field) {
    const double a = coef(rng), b = coef(rng), c = coef(rng);
    std::vector<double> u(m.num_nodes());
    for (int i = 0; i < m.num_nodes(); ++i) u[i] = a + b * m.node(i)[0] + c * m.node(i)[1];
    for (int i = 0; i < m.num_nodes(); ++i) {
      if (m.is_boundary(i)) continue;
      EXPECT_LE(alpha(u, i, params(false, 2.0)), 1e-20);
      EXPECT_LE(alpha(u, i, params(true, 2.0)), 1e-4);
    }
  }
}

TEST(Detector, ConstantFieldGivesZero) {
  const std::vector<double> u(stencils().mesh.num_nodes(), 3.0);
  for (int i = 0; i < stencils().mesh.num_nodes(); ++i) EXPECT_EQ(alpha(u, i, params(false)), 0.0);
}

TEST(Detector, AffineInvarianceAndMonotoneInQ) {
  std::mt19937_64 rng(35);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  const int n = stencils().mesh.num_nodes();
  for (int field = 0; field < 20; ++field) {
    std::vector<double> u(n), v(n);
    for (int i = 0; i < n; ++i) {
      u[i] = val(rng);
      v[i] = -7.0 * u[i] + 3.0;
    }
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(alpha(u, i, params(false)), alpha(v, i, params(false)), 1e-12);
      EXPECT_GE(alpha(u, i, params(false, 2.0)) + 1e-15, alpha(u, i, params(false, 5.0)));
      EXPECT_GE(alpha(u, i, params(true, 2.0)) + 1e-15, alpha(u, i, params(true, 5.0)));
    }
  }
}

TEST(Detector, DualDerivativeMatchesCentralDifferences) {
  std::mt19937_64 rng(36);
  std::uniform_real_distribution<double> val(0.5, 1.5);
  const auto& s = stencils();
  const int n = s.mesh.num_nodes();
  for (int field = 0; field < 20; ++field) {
    std::vector<double> u(n);
    for (double& x : u) x = val(rng);
    const int i = static_cast<int>(rng() % n);
    const DetectorParams p = params(true, 3.0);
    for (int j : s.mesh.neighbors(i)) {
      const auto f = [&](int k) {
        Dual<1> d(u[k]);
        if (k == j) d.d[0] = 1.0;
        return d;
      };
      const Dual<1> ad = detector_node<Dual<1>>(f, s.geom, i, p, s.mesh.h_char(i));
      const double t = 1e-7;
      std::vector<double> up = u, um = u;
      up[j] += t;
      um[j] -= t;
      const double fd = (alpha(up, i, p) - alpha(um, i, p)) / (2.0 * t);
      EXPECT_NEAR(ad.d[0], fd, 1e-5 * (1.0 + std::abs(fd)));
    }
  }
}

TEST(Detector, SystemDetectorCombinesComponents) {
  std::mt19937_64 rng(37);
  const auto& s = stencils();
  BlockVector U(s.mesh.num_nodes());
  for (auto& u : U) u = test_util::random_state(rng);
  for (bool diff : {false, true}) {
    DetectorParams p = params(diff, 2.0);
    p.lambda_max_ref = 1.0;
    const DetectorField f = system_detector(s.mesh, s.geom, U, {kDensity, kEnergy}, p);
    for (int i = 0; i < s.mesh.num_nodes(); ++i) {
      const double mx = std::max(f.alpha[i][0], f.alpha[i][1]);
      if (diff) {
        EXPECT_GE(f.beta[i], mx - 1e-15);
      } else {
        EXPECT_EQ(f.beta[i], mx);
      }
    }
  }
  EXPECT_THROW(system_detector(s.mesh, s.geom, U, {}, params(false)), std::invalid_argument);
}

TEST(Detector, ParameterScaling) {
  DetectorParams p;
  p.eps = 2.0;
  p.sigma = 3.0;
  p.zeta = 5.0;
  p.length_scale = 2.0;
  p.lambda_max_ref = 7.0;
  const ScaledParams s = scale_params(p, 0.5);
  EXPECT_DOUBLE_EQ(s.eps_h, 2.0 * 0.25 / 16.0);
  EXPECT_DOUBLE_EQ(s.sigma_h, 3.0 * 49.0 * 0.0625 / 4.0);
  EXPECT_DOUBLE_EQ(s.zeta_h, 2.5);
  p.differentiable = false;
  EXPECT_EQ(scale_params(p, 0.5).eps_h, 0.0);
}

TEST(SmoothFunctions, LimiterIsC2AtOne) {
  EXPECT_EQ(limiter_z(0.0), 0.0);
  EXPECT_NEAR(limiter_z(1.0 - 1e-15), 1.0, 1e-12);
  EXPECT_EQ(limiter_z(1.0), 1.0);
  EXPECT_EQ(limiter_z(3.0), 1.0);
  const auto d1 = [](double x, double t) { return (limiter_z(x + t) - limiter_z(x - t)) / (2.0 * t); };
  const auto d2 = [](double x, double t) {
    return (limiter_z(x + t) - 2.0 * limiter_z(x) + limiter_z(x - t)) / (t * t);
  };
  // One-sided limits at 1 from below.
  EXPECT_NEAR(d1(1.0 - 1e-3, 1e-5), 0.0, 1e-4);
  EXPECT_NEAR(d2(1.0 - 1e-3, 1e-4), 0.0, 5e-2);
  EXPECT_NEAR(d1(1.0, 1e-4), 0.0, 1e-7);
  EXPECT_NEAR(d2(1.0, 1e-3), 0.0, 1e-2);
  EXPECT_NEAR(d1(0.0, 1e-6), 1.0, 1e-8);
  double prev = -1.0;
  for (int k = 0; k <= 1000; ++k) {
    const double z = limiter_z(k / 1000.0);
    EXPECT_GE(z, prev);
    EXPECT_GE(z, 0.0);
    EXPECT_LE(z, 1.0);
    prev = z;
  }
  // Second derivative continuous on [0, 1) by FD against the analytic 24x^2 - 30x + 6.
  for (int k = 1; k < 100; ++k) {
    const double x = k / 100.0;
    EXPECT_NEAR(d2(x, 1e-4), 24.0 * x * x - 30.0 * x + 6.0, 1e-5);
  }
}

TEST(SmoothFunctions, AbsAndMaxBounds) {
  std::mt19937_64 rng(38);
  std::uniform_real_distribution<double> val(-5.0, 5.0);
  std::uniform_real_distribution<double> reg(1e-8, 1.0);
  for (int k = 0; k < 10000; ++k) {
    const double x = val(rng), y = val(rng), e = reg(rng);
    EXPECT_LE(smooth_abs_down(x, e), std::abs(x) + 1e-15);
    EXPECT_GE(smooth_abs_up(x, e), std::abs(x));
    const double m = smooth_max(x, y, e);
    EXPECT_GE(m, std::max(x, y));
    EXPECT_LE(m, std::max(x, y) + 0.5 * std::sqrt(e) + 1e-15);
  }
  EXPECT_EQ(smooth_max(1.0, 2.0, 0.0), 2.0);
  EXPECT_EQ(smooth_abs_up(-3.0, 0.0), 3.0);
}
