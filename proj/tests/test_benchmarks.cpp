#include <numbers>

#include <gtest/gtest.h>

#include "eulerstab/benchmarks.hpp"
#include "test_util.hpp"

using namespace eulerstab;

namespace {

constexpr double kGamma = kDefaultGamma;
constexpr double kDeg = std::numbers::pi / 180.0;

// Pressure function of one side, written out independently of the library.
double side_function(double p, const Primitive1D& s) {
  const double g = kGamma;
  if (p > s.p) {
    const double A = 2.0 / ((g + 1.0) * s.rho);
    const double B = (g - 1.0) / (g + 1.0) * s.p;
    return (p - s.p) * std::sqrt(A / (p + B));
  }
  const double c = std::sqrt(g * s.p / s.rho);
  return 2.0 * c / (g - 1.0) * (std::pow(p / s.p, (g - 1.0) / (2.0 * g)) - 1.0);
}

double bisect_star_pressure(const Primitive1D& l, const Primitive1D& r) {
  double lo = 1e-12, hi = 100.0 * std::max(l.p, r.p);
  for (int it = 0; it < 300; ++it) {
    const double m = 0.5 * (lo + hi);
    if (side_function(m, l) + side_function(m, r) + (r.u - l.u) > 0.0) {
      hi = m;
    } else {
      lo = m;
    }
  }
  return 0.5 * (lo + hi);
}

struct Conserved1D {
  double m, mom, e;
};

Conserved1D conserved(const Primitive1D& w) {
  return {w.rho, w.rho * w.u, w.p / (kGamma - 1.0) + 0.5 * w.rho * w.u * w.u};
}

Conserved1D flux1d(const Primitive1D& w) {
  const Conserved1D u = conserved(w);
  return {w.rho * w.u, w.rho * w.u * w.u + w.p, (u.e + w.p) * w.u};
}

// Max Rankine-Hugoniot residual across a discontinuity between pre and post.
double rh_residual(const Primitive1D& pre, const Primitive1D& post) {
  const double s = (post.rho * post.u - pre.rho * pre.u) / (post.rho - pre.rho);
  const Conserved1D ua = conserved(pre), ub = conserved(post);
  const Conserved1D fa = flux1d(pre), fb = flux1d(post);
  const double scale = 1.0 + std::abs(fb.e) + std::abs(fa.e);
  return std::max({std::abs(fb.m - fa.m - s * (ub.m - ua.m)), std::abs(fb.mom - fa.mom - s * (ub.mom - ua.mom)),
                   std::abs(fb.e - fa.e - s * (ub.e - ua.e))}) /
         scale;
}

double sound(const Primitive1D& w) { return std::sqrt(kGamma * w.p / w.rho); }

}  // namespace

TEST(Riemann, SodStarStateMatchesBisection) {
  const Primitive1D l{1.0, 0.0, 1.0}, r{0.125, 0.0, 0.1};
  const RiemannSolution s = solve_riemann(l, r);
  const double p_bis = bisect_star_pressure(l, r);
  EXPECT_NEAR(s.p_star, p_bis, 1e-12);
  EXPECT_NEAR(s.u_star, 0.5 * (side_function(p_bis, r) - side_function(p_bis, l)), 1e-12);
  EXPECT_NEAR(s.p_star, 0.30313, 1e-5);
  EXPECT_NEAR(s.u_star, 0.92745, 1e-5);
  EXPECT_FALSE(s.left_shock);
  EXPECT_TRUE(s.right_shock);
  EXPECT_LE(s.pressure_residual, 1e-12);
}

TEST(Riemann, EqualStatesGiveConstantSolution) {
  const Primitive1D w{0.7, 0.3, 2.0};
  const RiemannSolution s = solve_riemann(w, w);
  for (double xi : {-5.0, -0.1, 0.0, 0.4, 3.0}) {
    const Primitive1D x = s.sample(xi);
    EXPECT_NEAR(x.rho, w.rho, 1e-12);
    EXPECT_NEAR(x.u, w.u, 1e-12);
    EXPECT_NEAR(x.p, w.p, 1e-12);
  }
}

TEST(Riemann, MirroredStatesGiveMirroredSolution) {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> d(0.1, 3.0), v(-1.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Primitive1D l{d(rng), v(rng), d(rng)}, r{d(rng), v(rng), d(rng)};
    const RiemannSolution a = solve_riemann(l, r);
    const RiemannSolution b = solve_riemann({r.rho, -r.u, r.p}, {l.rho, -l.u, l.p});
    EXPECT_NEAR(a.p_star, b.p_star, 1e-10 * a.p_star);
    EXPECT_NEAR(a.u_star, -b.u_star, 1e-10);
    for (double xi : {-1.3, -0.2, 0.5, 1.1}) {
      EXPECT_NEAR(a.sample(xi).rho, b.sample(-xi).rho, 1e-9);
      EXPECT_NEAR(a.sample(xi).u, -b.sample(-xi).u, 1e-9);
    }
  }
}

TEST(Riemann, RandomProblemsSatisfyJumpConditions) {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> d(0.1, 5.0), v(-1.0, 1.0);
  int shocks = 0;
  for (int k = 0; k < 500; ++k) {
    const Primitive1D l{d(rng), v(rng), d(rng)}, r{d(rng), v(rng), d(rng)};
    const RiemannSolution s = solve_riemann(l, r);
    ASSERT_GT(s.p_star, 0.0);
    EXPECT_LE(s.pressure_residual, 1e-12);
    EXPECT_NEAR(s.p_star, bisect_star_pressure(l, r), 1e-9 * (1.0 + s.p_star));
    const double tiny = 1e-9;
    if (s.left_shock) {
      // Locate the shock from the mass flux, then check both sides.
      const Primitive1D post = s.sample(s.u_star - tiny);
      const double speed = (post.rho * post.u - l.rho * l.u) / (post.rho - l.rho);
      EXPECT_LE(rh_residual(l, post), 1e-10);
      EXPECT_GT(l.u - sound(l), speed);
      EXPECT_LT(post.u - sound(post), speed);
      ++shocks;
    } else {
      // Isentropic: p / rho^gamma and u + 2c / (gamma - 1) are constant.
      const Primitive1D star = s.sample(s.u_star - tiny);
      EXPECT_NEAR(star.p / std::pow(star.rho, kGamma), l.p / std::pow(l.rho, kGamma), 1e-10 * l.p);
      EXPECT_NEAR(star.u + 2.0 * sound(star) / (kGamma - 1.0), l.u + 2.0 * sound(l) / (kGamma - 1.0), 1e-9);
    }
    if (s.right_shock) {
      const Primitive1D post = s.sample(s.u_star + tiny);
      const double speed = (post.rho * post.u - r.rho * r.u) / (post.rho - r.rho);
      EXPECT_LE(rh_residual(r, post), 1e-10);
      EXPECT_LT(r.u + sound(r), speed);
      EXPECT_GT(post.u + sound(post), speed);
      ++shocks;
    }
    // Contact: pressure and velocity continuous, self-similar sampling.
    EXPECT_NEAR(s.sample(s.u_star - tiny).p, s.sample(s.u_star + tiny).p, 1e-8);
    EXPECT_NEAR(s.sample(0.3).rho, s.sample(0.6 / 2.0).rho, 0.0);
  }
  EXPECT_GT(shocks, 100);
}

TEST(Riemann, VacuumGenerationThrows) {
  EXPECT_THROW(solve_riemann({1.0, -5.0, 0.4}, {1.0, 5.0, 0.4}), std::domain_error);
}

TEST(Riemann, PointwiseExactMatchesSampler) {
  const RiemannSolution s = solve_riemann({1.0, 0.0, 1.0}, {0.125, 0.0, 0.1});
  const Primitive w = exact_riemann({1.0, {0.0, 0.0}, 1.0}, {0.125, {0.0, 0.0}, 0.1}, 0.6);
  EXPECT_NEAR(w.rho, s.sample(0.6).rho, 1e-14);
  EXPECT_NEAR(w.vel[0], s.sample(0.6).u, 1e-14);
}

TEST(ObliqueShock, CompressionCornerAngle) {
  const ObliqueShock s = oblique_shock(2.0, 10.0);
  EXPECT_NEAR(s.shock_angle_deg, 29.3, 0.05);
  EXPECT_NEAR(s.wave_angle_deg, 39.3, 0.05);
  EXPECT_NEAR(theta_beta_mach(s.wave_angle_deg * kDeg, 2.0), std::tan(10.0 * kDeg), 1e-10);
}

TEST(ObliqueShock, RatiosMatchIndependentNormalShock) {
  // Weak root by bisection between the Mach angle and the maximum-deflection angle.
  const double m1 = 2.0, theta = 10.0 * kDeg;
  const auto tan_theta = [m1](double b) {
    const double ms = m1 * m1 * std::sin(b) * std::sin(b);
    return 2.0 / std::tan(b) * (ms - 1.0) / (m1 * m1 * (kGamma + std::cos(2.0 * b)) + 2.0);
  };
  double lo = std::asin(1.0 / m1), hi = 60.0 * kDeg;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (tan_theta(mid) < std::tan(theta) ? lo : hi) = mid;
  }
  const double beta = 0.5 * (lo + hi);
  const double mn = m1 * std::sin(beta);
  const double rho_ratio = (kGamma + 1.0) * mn * mn / ((kGamma - 1.0) * mn * mn + 2.0);
  const double p_ratio = 1.0 + 2.0 * kGamma / (kGamma + 1.0) * (mn * mn - 1.0);
  const ObliqueShock s = oblique_shock(m1, 10.0);
  EXPECT_NEAR(s.wave_angle_deg * kDeg, beta, 1e-10);
  EXPECT_NEAR(s.rho_ratio, rho_ratio, 1e-9);
  EXPECT_NEAR(s.p_ratio, p_ratio, 1e-9);
  EXPECT_GT(s.mach2, 1.0);
  EXPECT_LT(s.mach2, m1);
}

TEST(ObliqueShock, ZeroDeflectionIsMachWave) {
  const ObliqueShock s = oblique_shock(2.0, 0.0);
  EXPECT_NEAR(s.wave_angle_deg, 30.0, 1e-12);
  EXPECT_EQ(s.rho_ratio, 1.0);
  EXPECT_EQ(s.p_ratio, 1.0);
}

TEST(ObliqueShock, DetachedAndSubsonicThrow) {
  EXPECT_THROW(oblique_shock(2.0, 30.0), std::domain_error);
  EXPECT_THROW(oblique_shock(0.8, 5.0), std::domain_error);
}

TEST(ReflectedShock, RegionStatesAreAdmissibleAndConsistent) {
  const State a = reflected_region_a();
  const State b = reflected_region_b();
  EXPECT_TRUE(is_admissible(a));
  EXPECT_TRUE(is_admissible(b));
  const Primitive wa = primitive_from_conserved(a);
  const Primitive wb = primitive_from_conserved(b);
  EXPECT_NEAR(wa.p, 1.0 / kGamma, 1e-4);
  EXPECT_NEAR(norm(wa.vel) / std::sqrt(kGamma * wa.p / wa.rho), 2.9, 1e-3);
  // Region b is region a turned by the incident shock; region c turns it back.
  const double theta = std::atan2(-wb.vel[1], wb.vel[0]) / kDeg;
  const ObliqueShock inc = oblique_shock(2.9, theta);
  EXPECT_NEAR(inc.rho_ratio * wa.rho, wb.rho, 0.01 * wb.rho);
  EXPECT_NEAR(inc.p_ratio * wa.p, wb.p, 0.01 * wb.p);
  const double mb = norm(wb.vel) / std::sqrt(kGamma * wb.p / wb.rho);
  const ObliqueShock refl = oblique_shock(mb, theta);
  EXPECT_NEAR(refl.rho_ratio * wb.rho, kReflectedRegionCDensity, 0.01 * kReflectedRegionCDensity);
}

TEST(L1Error, ExactFieldsAndOffsets) {
  std::mt19937_64 rng(63);
  const Mesh m = test_util::jittered_mesh(6, 5, 0.3, rng);
  std::vector<double> lin(m.num_nodes());
  for (int i = 0; i < m.num_nodes(); ++i) lin[i] = 2.0 + 3.0 * m.node(i)[0] - m.node(i)[1];
  EXPECT_NEAR(l1_error(m, lin, [](const Vec2& x) { return 2.0 + 3.0 * x[0] - x[1]; }), 0.0, 1e-13);
  EXPECT_NEAR(l1_error(m, lin, [](const Vec2& x) { return 2.5 + 3.0 * x[0] - x[1]; }), 0.5, 1e-13);
}

TEST(L1Error, NormProperties) {
  std::mt19937_64 rng(64);
  const Mesh m = test_util::jittered_mesh(5, 5, 0.3, rng);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto zero = [](const Vec2&) { return 0.0; };
  const auto g = [](const Vec2& x) { return std::sin(3.0 * x[0]) * x[1]; };
  for (int k = 0; k < 50; ++k) {
    std::vector<double> f(m.num_nodes()), h(m.num_nodes()), diff(m.num_nodes()), scaled(m.num_nodes());
    const double a = 3.0 * u(rng);
    for (int i = 0; i < m.num_nodes(); ++i) {
      f[i] = u(rng);
      h[i] = u(rng);
      diff[i] = f[i] - h[i];
      scaled[i] = a * f[i];
    }
    EXPECT_LE(l1_error(m, diff, zero), l1_error(m, f, g) + l1_error(m, h, g) + 1e-14);
    EXPECT_NEAR(l1_error(m, scaled, zero), std::abs(a) * l1_error(m, f, zero), 1e-12);
  }
}

TEST(ConvergenceRate, SlopeAndErrors) {
  EXPECT_NEAR(convergence_rate({0.1, 0.05}, {1.0, 0.5}), 1.0, 1e-14);
  EXPECT_NEAR(convergence_rate({4.0, 1.0, 0.25}, {1.0, 0.5, 0.25}), 2.0, 1e-14);
  EXPECT_THROW(convergence_rate({0.1}, {1.0}), std::invalid_argument);
  EXPECT_THROW(convergence_rate({0.1, 0.0}, {1.0, 0.5}), std::invalid_argument);
  EXPECT_THROW(convergence_rate({0.1, 0.2}, {1.0, -0.5}), std::invalid_argument);
  EXPECT_THROW(convergence_rate({0.1, 0.2, 0.3}, {1.0, 0.5}), std::invalid_argument);
}

TEST(Builtins, InitialConditionsAdmissible) {
  const std::vector<BenchmarkCase> cases = builtin_cases();
  std::vector<std::string> names;
  for (const auto& c : cases) names.push_back(c.name);
  EXPECT_EQ(names, (std::vector<std::string>{"sinusoid", "compression_corner", "reflected_shock", "sod", "scramjet"}));
  for (const auto& c : cases) {
    const Mesh m = c.mesh.build();
    for (int i = 0; i < m.num_nodes(); ++i) ASSERT_TRUE(is_admissible(c.initial(m.node(i)))) << c.name;
    EXPECT_NO_THROW(build_constraints(m, c.boundary(), 0.0));
  }
  EXPECT_THROW(builtin_case("nope"), std::invalid_argument);
}

TEST(Builtins, SinusoidProfileAndFreeStream) {
  const BenchmarkCase c = builtin_case("sinusoid");
  EXPECT_NEAR(c.exact_density({0.5, 0.5}, 0.0), 1.9999, 1e-14);
  EXPECT_NEAR(c.exact_density({0.95, 0.95}, 0.0), 1e-4, 1e-14);
  const Primitive w = primitive_from_conserved(corner_free_stream());
  EXPECT_NEAR(norm(w.vel) / std::sqrt(kGamma * w.p / w.rho), 2.0, 1e-12);
  EXPECT_NEAR(std::atan2(w.vel[1], w.vel[0]) / kDeg, -10.0, 1e-12);
}
