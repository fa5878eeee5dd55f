#include "iono/sim/rollout.hpp"
#include "iono/sim/thrust.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace iono;

namespace {

InertialConfig nominal() { return kAssemblyVariants[1].to_inertial(); }

InertialConfig default_body() {
  InertialConfig c = nominal();
  c.mass = 50e-6;
  return c;
}

void expect_vec_near(const Vec12& a, const Vec12& b, double rel) {
  for (int i = 0; i < 12; ++i) EXPECT_NEAR(a[i], b[i], rel * std::max(1.0, std::abs(b[i]))) << "index " << i;
}

}  // namespace

TEST(Thrust, ZeroCurrentGivesZeroForce) {
  EXPECT_EQ(thrust_from_current(0.0, ThrustParams{}, 1), 0.0);
}

TEST(Thrust, HalfMilliampGivesPointSevenFiveMillinewton) {
  EXPECT_NEAR(thrust_from_current(0.5e-3, ThrustParams{}, 1), 0.75e-3, 1e-15);
}

TEST(Thrust, InversionAtPointOneMillinewton) {
  const double i = current_for_thrust(0.1e-3, ThrustParams{}, 2);
  EXPECT_NEAR(i, 66.6667e-6, 1e-10);
  EXPECT_NEAR(thrust_from_current(i, ThrustParams{}, 2), 0.1e-3, 1e-18);
}

TEST(Thrust, RejectsNegativeCurrentAndBadBeta) {
  EXPECT_THROW(thrust_from_current(-1e-6, ThrustParams{}, 1), DomainError);
  ThrustParams p;
  p.beta[0] = 0.2;
  EXPECT_THROW(p.validate(), DomainError);
}

TEST(Mixer, EquilibriumIsPureLift) {
  const Wrench w = mix_forces(ThrusterCommand::from_millinewtons(0.1, 0.1, 0.1, 0.1), nominal());
  EXPECT_NEAR(w.fz, 0.4e-3, 1e-18);
  EXPECT_EQ(w.torque, Vec3::Zero());
}

TEST(Mixer, RollPlusGivesNegativePitchTorque) {
  const Wrench w = mix_forces(ThrusterCommand::from_millinewtons(0.15, 0.15, 0.05, 0.05), nominal());
  EXPECT_NEAR(w.torque.y(), -2.0e-6, 1e-18);
  EXPECT_NEAR(w.torque.x(), 0.0, 1e-18);
  EXPECT_EQ(w.torque.z(), 0.0);
}

TEST(Mixer, YawTorqueIsAlwaysZero) {
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    ThrusterCommand u;
    for (int i = 0; i < 4; ++i) u.f[i] = rng.uniform(0.0, 0.3e-3);
    EXPECT_EQ(mix_forces(u, nominal()).torque.z(), 0.0);
  }
}

TEST(Kinematics, IdentityAtZero) {
  EXPECT_TRUE(body_to_inertial(0, 0, 0).isApprox(Mat3::Identity(), 1e-15));
}

TEST(Kinematics, RotationIsOrthogonal) {
  Rng rng(11);
  for (int k = 0; k < 1000; ++k) {
    const Mat3 q = body_to_inertial(rng.uniform(-kPi, kPi), rng.uniform(-1.5, 1.5), rng.uniform(-kPi, kPi));
    EXPECT_LT((q.transpose() * q - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(q.determinant(), 1.0, 1e-12);
  }
}

TEST(Kinematics, YawQuarterTurnMapsXToY) {
  const Vec3 y = body_to_inertial(kPi / 2, 0, 0) * Vec3::UnitX();
  EXPECT_NEAR(y.x(), 0.0, 1e-15);
  EXPECT_NEAR(y.y(), 1.0, 1e-15);
  EXPECT_NEAR(y.z(), 0.0, 1e-15);
}

TEST(Kinematics, EulerRatesAtZeroSwapAxes) {
  const Vec3 r = euler_rates(Vec3::Zero(), Vec3(0.3, -0.2, 0.7));
  EXPECT_NEAR(r[0], 0.7, 1e-15);
  EXPECT_NEAR(r[1], -0.2, 1e-15);
  EXPECT_NEAR(r[2], 0.3, 1e-15);
  EXPECT_EQ(euler_rates(Vec3(0.1, 0.2, 0.3), Vec3::Zero()), Vec3::Zero());
}

TEST(Kinematics, RolledBodyPitchRateBecomesYaw) {
  const Vec3 r = euler_rates(Vec3(0, 0, kPi / 2), Vec3(0, 1, 0));
  EXPECT_NEAR(r[0], 1.0, 1e-15);
  EXPECT_NEAR(r[1], 0.0, 1e-15);
  EXPECT_NEAR(r[2], 0.0, 1e-15);
}

TEST(Kinematics, SingularPitchThrows) {
  EXPECT_THROW(inverse_wronskian(kPi / 2, 0.0), SingularityError);
}

TEST(Dynamics, HoverIsEquilibrium) {
  const InertialConfig c = default_body();
  const double f = c.mass * c.gravity / 4.0;
  const Vec12 d = derivative(State12{}, ThrusterCommand(Vec4::Constant(f)), c);
  EXPECT_LT(d.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Dynamics, FreeFall) {
  const Vec12 d = derivative(State12{}, ThrusterCommand{}, default_body());
  EXPECT_NEAR(d[kVz], -9.81, 1e-15);
}

TEST(Dynamics, RollPlusAngularAcceleration) {
  const InertialConfig c = default_body();
  const auto u = ThrusterCommand::from_millinewtons(0.15, 0.15, 0.05, 0.05);
  const Vec12 d = derivative(State12{}, u, c);
  EXPECT_NEAR(d[kWy], -2.0e-6 / c.iyy, 1e-9);
  EXPECT_EQ(d[kWx], 0.0);
  EXPECT_EQ(d[kWz], 0.0);
}

// Frozen from an independent numpy evaluation of the rigid-body equations.
TEST(Dynamics, MatchesIndependentOracleAtGenericState) {
  State12 x;
  x.v << 0.1, -0.2, 0.3, 0.2, -0.1, 0.15, 0.01, -0.02, 0.03, 1.0, -2.0, 0.5;
  Vec12 expected;
  expected << 1.1961225362481100e-02, -2.2327296317843043e-02, 2.7539443112800436e-02,
      1.9649091013221348e-01, -2.0522612221088843e+00, 9.8038364110145637e-01,
      -9.2936581730538426e-01, -1.4336642454161124e+00, -1.4513854557280226e+00,
      -2.5109828629032256e+02, 5.0887544125063037e+01, -5.2576235541551357e-04;
  const Vec12 d = derivative(x, ThrusterCommand::from_millinewtons(0.12, 0.08, 0.1, 0.11), default_body());
  expect_vec_near(d, expected, 1e-12);
}

TEST(Simulator, OneControlPeriodMatchesOracle) {
  SimConfig s;
  s.noise_sigma = 0.0;
  Rng rng(0);
  const auto out = step_control_period(State12{}, ThrusterCommand::from_millinewtons(0.15, 0.15, 0.05, 0.05),
                                       s, default_body(), rng);
  Vec12 expected;
  expected << -1.4751820422391332e-06, 0, -8.1473867946889555e-05, 0, -4.5385779122541596e-02, 0,
      -1.7071019606403766e-03, 0, -1.8061595131836611e-02, 0, -1.0085728693898131e+01, 0;
  expect_vec_near(out.next_state.v, expected, 1e-12);
  EXPECT_FALSE(out.crashed);
  EXPECT_NEAR(out.elapsed, 0.01, 1e-15);
}

TEST(Simulator, HoverStaysPutWithoutNoise) {
  SimConfig s;
  s.noise_sigma = 0.0;
  const InertialConfig c = default_body();
  Rng rng(0);
  const auto out = step_control_period(State12{}, ThrusterCommand(Vec4::Constant(c.mass * c.gravity / 4)), s, c, rng);
  EXPECT_LT(out.next_state.v.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Simulator, CrashAboveStopAngle) {
  SimConfig s;
  State12 x;
  x.v[kPhi] = deg_to_rad(46.0);
  Rng rng(0);
  const auto out = step_control_period(x, ThrusterCommand{}, s, default_body(), rng);
  EXPECT_TRUE(out.crashed);
  EXPECT_EQ(out.elapsed, 0.0);
}

TEST(Simulator, SeededStepIsBitIdentical) {
  SimConfig s;
  s.seed = 42;
  const auto u = ThrusterCommand::from_millinewtons(0.12, 0.1, 0.09, 0.11);
  Environment a(s, default_body()), b(s, default_body());
  for (int k = 0; k < 20; ++k) EXPECT_EQ(a.step(u).next_state, b.step(u).next_state);
}

TEST(Simulator, ConfigValidation) {
  SimConfig s;
  s.control_period = 0.0105;
  EXPECT_THROW(s.validate(), DomainError);
  s = SimConfig{};
  s.stop_angle = kPi / 2;
  EXPECT_THROW(s.validate(), DomainError);
  InertialConfig c = default_body();
  c.ixx = 0.0;
  EXPECT_THROW(c.validate(), DomainError);
}

// Halving h should cut the global error by 2 (Euler) and 16 (RK4).
TEST(Integrator, ObservedOrder) {
  const auto f = [](const Vec12& x) {
    Vec12 d = Vec12::Zero();
    d[0] = x[1];
    d[1] = -x[0];
    return d;
  };
  auto run = [&](auto step, double h) {
    Vec12 x = Vec12::Zero();
    x[0] = 1.0;
    const int n = static_cast<int>(std::lround(1.0 / h));
    for (int k = 0; k < n; ++k) x = step(f, x, h);
    return std::abs(x[0] - std::cos(1.0));
  };
  auto euler = [](const auto& g, const Vec12& x, double h) { return euler_step(g, x, h); };
  auto rk4 = [](const auto& g, const Vec12& x, double h) { return rk4_step(g, x, h); };
  EXPECT_NEAR(std::log2(run(euler, 0.01) / run(euler, 0.005)), 1.0, 0.05);
  EXPECT_NEAR(std::log2(run(rk4, 0.01) / run(rk4, 0.005)), 4.0, 0.1);
}

TEST(Rollout, EquilibriumNeverCrashes) {
  SimConfig s;
  s.noise_sigma = 0.0;
  Environment env(s, default_body());
  const auto u = ThrusterCommand::from_millinewtons(0.1, 0.1, 0.1, 0.1);
  const TrialRecord r = rollout(env, [&](double, const State12&) { return u; }, 1000);
  EXPECT_FALSE(r.summary.crashed);
  EXPECT_EQ(r.summary.steps, 1000);
  EXPECT_EQ(r.log.size(), 1000u);
  EXPECT_NEAR(r.summary.elapsed, 10.0, 1e-12);
}

TEST(Rollout, ClampsOutOfRangeCommands) {
  SimConfig s;
  s.noise_sigma = 0.0;
  Environment env(s, default_body());
  const TrialRecord r = rollout(env, [](double, const State12&) { return ThrusterCommand(Vec4::Constant(1.0)); }, 3);
  EXPECT_EQ(r.clamped_commands, 3);
  for (const auto& st : r.log) EXPECT_TRUE(st.u.within(0.0, s.max_thrust));
}

TEST(Rollout, ZeroStepsIsAnError) {
  Environment env(SimConfig{}, default_body());
  EXPECT_THROW(rollout(env, [](double, const State12&) { return ThrusterCommand{}; }, 0), DomainError);
}

TEST(Rollout, CrashTruncatesLog) {
  SimConfig s;
  s.noise_sigma = 0.0;
  Environment env(s, default_body());
  const auto u = ThrusterCommand::from_millinewtons(0.3, 0.0, 0.0, 0.3);
  const TrialRecord r = rollout(env, [&](double, const State12&) { return u; }, 1000);
  EXPECT_TRUE(r.summary.crashed);
  EXPECT_LT(r.summary.steps, 1000);
  EXPECT_EQ(r.log.size(), static_cast<std::size_t>(r.summary.steps));
}
