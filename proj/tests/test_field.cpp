#include <bubblewave/field.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

namespace bw = bubblewave;

namespace {

constexpr double kPi = std::numbers::pi;

bw::BubbleSpec engineered_bubble(const bw::Vec3& center, double delta) {
  bw::BubbleSpec b;
  b.center = center;
  b.delta = delta;
  b.radius_ref = 1.0;
  b.rho_c_bar = 1.0;
  b.k_c_bar = 4.0 / 3.0 * kPi;
  return b;
}

bw::ClusterModel engineered_single(double delta = 0.01) {
  return bw::build_cluster(bw::Medium{1.0, 1.0},
                           {engineered_bubble({0, 0, 0}, delta)});
}

bw::ClusterModel engineered_dimer(double delta = 0.01, double dist = 0.02) {
  return bw::build_cluster(bw::Medium{1.0, 1.0},
                           {engineered_bubble({0, 0, 0}, delta),
                            engineered_bubble({dist, 0, 0}, delta)});
}

bw::IncidentField engineered_field(const bw::Vec3& source_pos) {
  bw::PointSource src;
  src.position = source_pos;
  src.pulse = bw::Pulse::causal_poly_exp(10, 2.0);
  return bw::IncidentField(bw::Medium{1.0, 1.0}, src);
}

bw::ObservationSet single_point(const bw::Vec3& x,
                                std::vector<double> times) {
  bw::ObservationSet obs;
  obs.points = {x};
  obs.times = std::move(times);
  return obs;
}

} // namespace

TEST(ObservationSet, UniformGrid) {
  const auto obs =
      bw::ObservationSet::uniform({{1, 0, 0}, {0, 2, 0}}, 1.0, 0.25);
  ASSERT_EQ(obs.points.size(), 2u);
  ASSERT_EQ(obs.times.size(), 5u);
  EXPECT_DOUBLE_EQ(obs.times.back(), 1.0);
  EXPECT_DOUBLE_EQ(obs.dt(), 0.25);
  EXPECT_THROW(bw::ObservationSet::uniform({}, 0.0, 0.25),
               bw::NonPositiveParameter);
  EXPECT_THROW(bw::ObservationSet::uniform({}, 1.0, -0.1),
               bw::NonPositiveParameter);
}

TEST(ObservationSet, RejectsPointsTouchingABubble) {
  const auto c = bw::build_cluster(bw::Medium{1.0, 1.0},
                                   {engineered_bubble({0, 0, 0}, 0.25)});
  EXPECT_THROW(
      bw::validate_observations(c, single_point({0.125, 0, 0}, {1.0})),
      bw::PointInsideBubble);
  EXPECT_THROW(bw::validate_observations(c, single_point({0.25, 0, 0}, {1.0})),
               bw::PointInsideBubble);
  EXPECT_NO_THROW(
      bw::validate_observations(c, single_point({0.5, 0, 0}, {1.0})));
}

TEST(ScatteredField, ZeroAmplitudesGiveSilence) {
  const auto c = engineered_dimer();
  const auto sol = bw::solve_delay_system(
      c, [](double) { return Eigen::VectorXd::Zero(2); }, 8.0, 2e-3);
  const auto series = bw::scattered_field(
      c, sol, bw::ObservationSet::uniform({{0, 3, 0}, {1, 1, 1}}, 6.0, 0.05));
  ASSERT_EQ(series.size(), 2u);
  for (const auto& ts : series) {
    for (double v : ts.values) EXPECT_EQ(v, 0.0);
    EXPECT_TRUE(ts.warnings.empty());
  }
}

TEST(ScatteredField, SingleBubblePrefactorAndRetardation) {
  const auto c = engineered_single();
  const auto f = engineered_field({2.0, 0.0, 0.0});
  const auto sol = bw::solve_delay_system(c, f, 10.0, 1e-3);

  const bw::Vec3 x{0.0, 1.5, 0.0};
  const auto series =
      bw::scattered_field(c, sol, single_point(x, {0.5, 2.0, 4.0, 9.5}));
  ASSERT_EQ(series.size(), 1u);
  const auto& ts = series.front();
  EXPECT_EQ(ts.point, 0);

  const double prefactor = c.alpha[0] * c.medium.rho_m / (4.0 * kPi);
  const double kern = 1.0 / 1.5;
  // Retarded times 0.5-1.5 < 0 (skipped) and 0.5, 2.5, 8.0.
  EXPECT_EQ(ts.values[0], 0.0);
  EXPECT_EQ(ts.values[1], prefactor * kern * sol.value(0, 0.5));
  EXPECT_EQ(ts.values[1], 0.0); // pulse has not reached the bubble yet
  EXPECT_DOUBLE_EQ(ts.values[2], prefactor * kern * sol.value(0, 2.5));
  EXPECT_NE(ts.values[2], 0.0);
  EXPECT_DOUBLE_EQ(ts.values[3], prefactor * kern * sol.value(0, 8.0));
  EXPECT_TRUE(ts.warnings.empty());
}

TEST(ScatteredField, InverseDistanceBetweenMatchedRetardedTimes) {
  const auto c = engineered_single();
  const auto f = engineered_field({2.0, 0.0, 0.0});
  const auto sol = bw::solve_delay_system(c, f, 10.0, 1e-3);

  // Dyadic geometry: same retarded time 3.5 at both points, kernel halves.
  const auto near_series =
      bw::scattered_field(c, sol, single_point({0.0, 1.0, 0.0}, {4.5}));
  const auto far_series =
      bw::scattered_field(c, sol, single_point({0.0, 2.0, 0.0}, {5.5}));
  const double u_near = near_series.front().values[0];
  const double u_far = far_series.front().values[0];
  ASSERT_NE(u_near, 0.0);
  EXPECT_DOUBLE_EQ(2.0 * u_far, u_near);
}

TEST(ScatteredField, CorollaryVariantScalesThePrefactor) {
  const auto c = engineered_single();
  const auto f = engineered_field({2.0, 0.0, 0.0});
  const auto sol = bw::solve_delay_system(c, f, 10.0, 1e-3);
  const auto obs = single_point({0.0, 1.5, 0.0}, {5.0, 7.0});

  const auto thm = bw::scattered_field(c, sol, obs, bw::FieldVariant::Theorem);
  const auto cor =
      bw::scattered_field(c, sol, obs, bw::FieldVariant::Corollary);
  EXPECT_EQ(thm.front().variant, bw::FieldVariant::Theorem);
  EXPECT_EQ(cor.front().variant, bw::FieldVariant::Corollary);
  const double switch_factor = c.bubbles[0].rho_c() / c.bubbles[0].k_c();
  for (size_t k = 0; k < 2; ++k) {
    ASSERT_NE(thm.front().values[k], 0.0);
    EXPECT_NEAR(cor.front().values[k],
                switch_factor * thm.front().values[k],
                1e-14 * std::abs(thm.front().values[k]));
  }
}

TEST(ScatteredField, WarnsWhenTheHorizonIsExceeded) {
  const auto c = engineered_single();
  const auto f = engineered_field({2.0, 0.0, 0.0});
  const auto sol = bw::solve_delay_system(c, f, 10.0, 1e-3);

  const bw::Vec3 x{0.0, 1.5, 0.0};
  const auto series = bw::scattered_field(c, sol, single_point(x, {11.75}));
  const auto& ts = series.front();
  ASSERT_FALSE(ts.warnings.empty());
  EXPECT_NE(ts.warnings.front().find("horizon"), std::string::npos);
  const double prefactor = c.alpha[0] * c.medium.rho_m / (4.0 * kPi);
  EXPECT_DOUBLE_EQ(ts.values[0],
                   prefactor * (1.0 / 1.5) * sol.y(0, sol.steps() - 1));
}

TEST(ScatteredField, SuperposesBothBubbles) {
  const auto c = engineered_dimer();
  const auto f = engineered_field({2.0, 0.0, 0.0});
  const auto sol = bw::solve_delay_system(c, f, 10.0, 1e-3);

  const bw::Vec3 x{0.0, 3.0, 0.0};
  const auto series = bw::scattered_field(c, sol, single_point(x, {8.0}));
  double expected = 0.0;
  for (int i = 0; i < 2; ++i) {
    const auto& b = c.bubbles[size_t(i)];
    const double prefactor = c.alpha[size_t(i)] * c.medium.rho_m / (4.0 * kPi);
    const double dist = (x - b.center).norm();
    expected += prefactor * (1.0 / dist) * sol.value(i, 8.0 - dist);
  }
  EXPECT_DOUBLE_EQ(series.front().values[0], expected);
  EXPECT_NE(series.front().values[0], 0.0);
}

TEST(DominantField, ComponentsSumToTheSeries) {
  const auto c = engineered_dimer();
  const auto f = engineered_field({2.0, 0.0, 0.0});
  const auto obs =
      bw::ObservationSet::uniform({{0.0, 3.0, 0.0}}, 12.0, 0.01);
  const auto series = bw::dimer_dominant_field(c, f, obs, 12.0, 0.01);
  ASSERT_EQ(series.size(), 1u);
  const auto& ts = series.front();
  ASSERT_EQ(ts.values.size(), obs.times.size());
  for (size_t k = 0; k < ts.values.size(); ++k)
    EXPECT_DOUBLE_EQ(ts.values[k], ts.u1[k] + ts.u2[k]);
}

TEST(DominantField, PrimaryWaveMatchesTheHandFormula) {
  const auto c = engineered_dimer();
  const auto f = engineered_field({2.0, 0.0, 0.0});
  const bw::Vec3 x{0.0, 3.0, 0.0};
  const double dt = 0.01;
  const auto obs = bw::ObservationSet::uniform({x}, 12.0, dt);
  const auto series = bw::dimer_dominant_field(c, f, obs, 12.0, dt);
  const auto& ts = series.front();

  const auto& b0 = c.bubbles[0];
  const double omega = bw::minnaert_frequency(c.medium, b0);
  const double area_ref = bw::a_surface(b0.radius_ref);
  const double xi = (c.bubbles[0].center - c.bubbles[1].center).norm();
  const double j_factor = 1.0 - 1.0 * b0.delta / (area_ref * xi);
  const double coef = c.medium.rho_m * b0.reference_volume() * b0.delta /
                      (4.0 * M_PI * b0.k_c_bar);
  double kern = 0.0;
  for (int j = 0; j < 2; ++j)
    kern += 1.0 / (x - c.bubbles[size_t(j)].center).norm();
  const bw::Vec3 z1 = c.bubbles[0].center;
  const double lag = (x - z1).norm();

  bw::detail::SineConvolution conv(
      omega / std::sqrt(j_factor), [&](double tau) { return f(z1, tau); }, dt);
  for (size_t k = 0; k < obs.times.size(); ++k) {
    const double t_ret = obs.times[k] - lag;
    if (t_ret <= 0.0) {
      EXPECT_EQ(ts.u1[k], 0.0);
      EXPECT_EQ(ts.u2[k], 0.0);
      continue;
    }
    EXPECT_DOUBLE_EQ(ts.u1[k],
                     coef * kern * omega * omega / j_factor * f(z1, t_ret));
    EXPECT_DOUBLE_EQ(ts.u2[k], -coef * kern * omega * omega * omega /
                                   (j_factor * std::sqrt(j_factor)) *
                                   conv.at(t_ret));
  }
}

TEST(DominantField, RespectsTwoLegCausality) {
  const auto c = engineered_dimer();
  const auto f = engineered_field({2.0, 0.0, 0.0});
  const bw::Vec3 x{0.0, 3.0, 0.0};
  const auto obs = bw::ObservationSet::uniform({x}, 12.0, 0.01);
  const auto series = bw::dimer_dominant_field(c, f, obs, 12.0, 0.01);
  const auto& ts = series.front();
  // Source -> z1 takes 2.0, z1 -> x takes 3.0: silence until t = 5.
  const double arrival = 5.0;
  bool saw_signal = false;
  for (size_t k = 0; k < obs.times.size(); ++k) {
    if (obs.times[k] < arrival - 1e-9) {
      EXPECT_EQ(ts.values[k], 0.0) << "t = " << obs.times[k];
    } else if (obs.times[k] > arrival + 0.5) {
      saw_signal = saw_signal || ts.values[k] != 0.0;
    }
  }
  EXPECT_TRUE(saw_signal);
}

TEST(DominantField, TetramerUsesFourKernelTermsAndStrongerCoupling) {
  const double edge = 0.02;
  const double s = edge / (2.0 * std::sqrt(2.0));
  const auto c = bw::build_cluster(bw::Medium{1.0, 1.0},
                                   {engineered_bubble({s, s, s}, 0.01),
                                    engineered_bubble({s, -s, -s}, 0.01),
                                    engineered_bubble({-s, s, -s}, 0.01),
                                    engineered_bubble({-s, -s, s}, 0.01)});
  const auto f = engineered_field({2.0, 0.0, 0.0});
  const bw::Vec3 x{0.0, 3.0, 0.0};
  const double dt = 0.01;
  const auto obs = bw::ObservationSet::uniform({x}, 10.0, dt);
  const auto series = bw::tetramer_dominant_field(c, f, obs, 10.0, dt);
  const auto& ts = series.front();

  const auto& b0 = c.bubbles[0];
  const double omega = bw::minnaert_frequency(c.medium, b0);
  const double area_ref = bw::a_surface(b0.radius_ref);
  const double xi = (c.bubbles[0].center - c.bubbles[1].center).norm();
  const double j_factor = 1.0 - 3.0 * b0.delta / (area_ref * xi);
  EXPECT_NEAR(j_factor, 0.8209506890216178, 1e-12);
  const double coef = c.medium.rho_m * b0.reference_volume() * b0.delta /
                      (4.0 * M_PI * b0.k_c_bar);
  double kern = 0.0;
  for (int j = 0; j < 4; ++j)
    kern += 1.0 / (x - c.bubbles[size_t(j)].center).norm();
  const bw::Vec3 z1 = c.bubbles[0].center;
  const double lag = (x - z1).norm();

  const size_t k = 800; // t = 8, well inside the signal
  const double t_ret = obs.times[k] - lag;
  ASSERT_GT(t_ret, 2.0);
  EXPECT_DOUBLE_EQ(ts.u1[k],
                   coef * kern * omega * omega / j_factor * f(z1, t_ret));
  EXPECT_NE(ts.u1[k], 0.0);
}

TEST(DominantField, StrongCouplingIsRejected) {
  // Separation below delta / A(1) drives the coupling correction negative.
  const auto c = engineered_dimer(0.01, 1e-3);
  const auto f = engineered_field({2.0, 0.0, 0.0});
  const auto obs = bw::ObservationSet::uniform({{0.0, 3.0, 0.0}}, 6.0, 0.01);
  EXPECT_THROW(bw::dimer_dominant_field(c, f, obs, 6.0, 0.01),
               bw::StrongCouplingRegime);
}

TEST(DominantField, ZeroPulseGivesSilence) {
  const auto c = engineered_dimer();
  bw::PointSource src;
  src.position = {2.0, 0.0, 0.0};
  src.pulse = bw::Pulse::zero();
  const auto f = bw::IncidentField(bw::Medium{1.0, 1.0}, src);
  const auto obs = bw::ObservationSet::uniform({{0.0, 3.0, 0.0}}, 8.0, 0.02);
  const auto series = bw::dimer_dominant_field(c, f, obs, 8.0, 0.02);
  for (double v : series.front().values) EXPECT_EQ(v, 0.0);
}

TEST(CollectionField, SinglePairMatchesTheDimerField) {
  const auto c = engineered_dimer();
  const auto f = engineered_field({2.0, 0.0, 0.0});
  const auto obs = bw::ObservationSet::uniform({{0.0, 3.0, 0.0}}, 10.0, 0.01);
  const auto direct = bw::dimer_dominant_field(c, f, obs, 10.0, 0.01);
  const auto block = bw::dimer_collection_field(c, {{0, 1}}, f, obs, 10.0, 0.01);
  ASSERT_EQ(block.size(), direct.size());
  for (size_t k = 0; k < obs.times.size(); ++k) {
    EXPECT_DOUBLE_EQ(block.front().values[k], direct.front().values[k]);
    EXPECT_DOUBLE_EQ(block.front().u1[k], direct.front().u1[k]);
    EXPECT_DOUBLE_EQ(block.front().u2[k], direct.front().u2[k]);
  }
}

TEST(CollectionField, SuperposesWellSeparatedPairs) {
  const bw::Medium medium{1.0, 1.0};
  const std::vector<bw::BubbleSpec> bubbles{
      engineered_bubble({0, 0, 0}, 0.01),
      engineered_bubble({0.02, 0, 0}, 0.01),
      engineered_bubble({3.0, 0, 0}, 0.01),
      engineered_bubble({3.02, 0, 0}, 0.01)};
  const auto c = bw::build_cluster(medium, bubbles);
  const auto f = engineered_field({0.0, 2.0, 0.0});
  const auto obs = bw::ObservationSet::uniform({{1.5, 3.0, 0.0}}, 12.0, 0.01);

  const auto both =
      bw::dimer_collection_field(c, {{0, 1}, {2, 3}}, f, obs, 12.0, 0.01);
  const auto first = bw::dimer_dominant_field(
      bw::build_cluster(medium, {bubbles[0], bubbles[1]}), f, obs, 12.0, 0.01);
  const auto second = bw::dimer_dominant_field(
      bw::build_cluster(medium, {bubbles[2], bubbles[3]}), f, obs, 12.0, 0.01);
  for (size_t k = 0; k < obs.times.size(); ++k) {
    EXPECT_DOUBLE_EQ(both.front().u1[k],
                     first.front().u1[k] + second.front().u1[k]);
    EXPECT_DOUBLE_EQ(both.front().u2[k],
                     first.front().u2[k] + second.front().u2[k]);
  }
}

TEST(CollectionField, ValidatesThePairing) {
  const auto c = engineered_dimer();
  const auto f = engineered_field({2.0, 0.0, 0.0});
  const auto obs = bw::ObservationSet::uniform({{0.0, 3.0, 0.0}}, 6.0, 0.01);
  EXPECT_THROW(
      bw::dimer_collection_field(c, {{0, 0}}, f, obs, 6.0, 0.01),
      bw::BadPairing);
}
