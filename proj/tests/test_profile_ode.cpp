#include <cmath>
#include <cstdlib>
#include <vector>

#include "doctest.h"

#include "conecert/errors.hpp"
#include "conecert/profile_ode.hpp"
#include "reference_values.hpp"

using namespace conecert;

namespace {

double theta_of(const QModel& m, int k, const ProfileSettings& s = {}) {
  const auto r = solve_profile(m, k, s);
  REQUIRE(r.vanishes());
  return r.vanishing()->theta;
}

}  // namespace

TEST_CASE("vanishing angles agree with the reference integration") {
  CHECK(theta_of(QModel::exp_bound(std::sqrt(10.0)), 12) == doctest::Approx(reference::exp_12_10).epsilon(reference::tol));
  CHECK(theta_of(QModel::exp_bound(std::sqrt(44.0 / 3)), 12) ==
        doctest::Approx(reference::exp_12_44_3).epsilon(reference::tol));
  CHECK(theta_of(QModel::f_bound(std::sqrt(32.0 / 3), 8), 9) ==
        doctest::Approx(reference::f_9_32_3).epsilon(reference::tol));
  CHECK(theta_of(QModel::f_bound(std::sqrt(12.0), 9), 10) == doctest::Approx(reference::f_10_12).epsilon(reference::tol));
  CHECK(theta_of(QModel::f_bound(std::sqrt(40.0 / 3), 10), 11) ==
        doctest::Approx(reference::f_11_40_3).epsilon(reference::tol));
  CHECK(theta_of(QModel::f_bound(std::sqrt(2.0), 4), 5) == doctest::Approx(reference::f_5_2).epsilon(reference::tol));
  for (int k = 7; k <= 11; ++k) {
    CHECK(theta_of(QModel::f_bound(std::sqrt(k - 2.0), k - 1), k) ==
          doctest::Approx(reference::f_k_km2[k - 7]).epsilon(reference::tol));
  }
  CHECK(theta_of(QModel::exact(parse_spectrum("1x2,-1x2,0x1")), 6) ==
        doctest::Approx(reference::g4_1_2_plus).epsilon(reference::tol));
  CHECK(theta_of(QModel::exact(parse_spectrum("1x1,-1x1,0x2")), 5) ==
        doctest::Approx(reference::g4_1_2_minus).epsilon(reference::tol));
}

TEST_CASE("quoted angle bounds") {
  CHECK(theta_of(QModel::exp_bound(std::sqrt(10.0)), 12) < to_radians(9.0));
  CHECK(theta_of(QModel::f_bound(std::sqrt(2.0), 4), 5) < to_radians(27.0));
  CHECK(theta_of(QModel::exact(parse_spectrum("1x2,-1x2,0x1")), 6) < to_radians(25.0));
}

TEST_CASE("halving the tolerances moves the angle by less than 1e-8") {
  const ProfileSettings base;
  const auto halved = base.halved();
  for (const auto& [m, k] : std::vector<std::pair<QModel, int>>{{QModel::exp_bound(std::sqrt(10.0)), 12},
                                                                 {QModel::f_bound(std::sqrt(12.0), 9), 10},
                                                                 {QModel::exact(parse_spectrum("1x1,-1x1,0x2")), 5}}) {
    CHECK(std::abs(theta_of(m, k, base) - theta_of(m, k, halved)) < 1e-8);
  }
}

TEST_CASE("flat models are stagnant") {
  for (int k : {2, 5, 12}) {
    for (const auto& m : {QModel::exp_bound(0.0), QModel::f_bound(0.0, 4), QModel::exact(Spectrum::zeros(3))}) {
      ProfileSettings s;
      s.record_trace = true;
      const auto r = solve_profile(m, k, s);
      REQUIRE(r.failure());
      CHECK(r.failure()->reason == FailureReason::ProfileStagnant);
      for (const auto& p : r.trace) CHECK(p.h == 1.0);
    }
  }
}

TEST_CASE("discriminant failures") {
  const auto at_start = solve_profile(QModel::f_bound(std::sqrt(2.0), 2), 3);
  REQUIRE(at_start.failure());
  CHECK(at_start.failure()->reason == FailureReason::DiscriminantNegative);
  CHECK(at_start.failure()->t == 0.0);

  const auto later = solve_profile(QModel::exp_bound(std::sqrt(6.0)), 7);
  REQUIRE(later.failure());
  CHECK(later.failure()->reason == FailureReason::DiscriminantNegative);
  CHECK(later.failure()->t > 0.3);
  CHECK(later.failure()->t < 1.0 / std::sqrt(6.0));
}

TEST_CASE("trajectory invariants") {
  ProfileSettings s;
  s.record_trace = true;
  for (int ell : {4, 6, 8, 10}) {
    for (double a2 : {0.5, 1.0, 2.0}) {
      const double a = std::sqrt(a2 * (ell - 1));
      const auto f = QModel::f_bound(a, ell);
      const auto r = solve_profile(f, ell + 1, s);
      CHECK(r.max_residual < 1e-8);
      CHECK(r.max_envelope_excess < 1e-9);
      if (const auto* v = r.vanishing()) CHECK(v->t_star <= f.domain_end());
      if (r.vanishes()) REQUIRE(r.trace.size() > 2);
      for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].t > r.trace[i - 1].t);
      const auto e = solve_profile(QModel::exact(equality_spectrum(a, ell)), ell + 1, s);
      CHECK(e.vanishes() == r.vanishes());
      if (e.vanishes() && r.vanishes()) CHECK(std::abs(e.vanishing()->theta - r.vanishing()->theta) < 1e-7);
    }
  }
  CHECK(theta_of(QModel::f_bound(std::sqrt(8.0), 8), 9) == doctest::Approx(reference::f_9_8).epsilon(reference::tol));
  CHECK(theta_of(QModel::f_bound(std::sqrt(10.0), 10), 11) ==
        doctest::Approx(reference::f_11_10).epsilon(reference::tol));
}

TEST_CASE("angle grows with alpha and F beats the exponential bound") {
  for (int k : {8, 10, 12}) {
    double prev = 0.0;
    for (double fr : {0.2, 0.4, 0.6, 0.8, 1.0}) {
      const double a = std::sqrt(fr * k);
      const auto e = solve_profile(QModel::exp_bound(a), k);
      const auto f = solve_profile(QModel::f_bound(a, k - 1), k);
      if (!e.vanishes()) continue;
      CHECK(e.vanishing()->theta > prev);
      prev = e.vanishing()->theta;
      REQUIRE(f.vanishes());
      CHECK(f.vanishing()->theta < e.vanishing()->theta);
    }
  }
}

TEST_CASE("chain bound") {
  const double base = std::tan(reference::exp_12_44_3);
  CHECK(chain_bound(13, 4.0, 12, std::sqrt(44.0 / 3), base) == doctest::Approx(12.0 / 13.0 * base));
  CHECK(chain_bound(13, 4.0, 12, std::sqrt(44.0 / 3), base) < 12.0 / 13.0 * 0.1683);
  CHECK_THROWS_AS(chain_bound(12, 3.0, 12, std::sqrt(44.0 / 3), base), ChainHypothesisError);
  CHECK_THROWS_AS(chain_bound(11, 3.0, 12, std::sqrt(44.0 / 3), base), ChainHypothesisError);
  CHECK_THROWS_AS(chain_bound(13, 5.0, 12, std::sqrt(44.0 / 3), base), ChainHypothesisError);
  // The solved angle is below the chained one.
  const double direct = theta_of(QModel::exp_bound(4.0), 13);
  CHECK(std::tan(direct) < chain_bound(13, 4.0, 12, std::sqrt(44.0 / 3), base));
}

TEST_CASE("theta_upper_bound") {
  const auto b = theta_upper_bound(12, 10.0);
  REQUIRE(b.exists());
  CHECK(*b.theta < to_radians(9.0));
  CHECK(*b.theta == doctest::Approx(*b.raw_theta + kThetaPadding));
  REQUIRE(b.winning_attempt() != nullptr);
  CHECK(b.strategy == Strategy::FBound);

  const auto e = theta_upper_bound(12, 10.0, std::nullopt, ModelChoice::ExpBound);
  CHECK(e.strategy == Strategy::ExpBound);
  CHECK(*e.raw_theta == doctest::Approx(reference::exp_12_10).epsilon(reference::tol));

  CHECK(to_degrees(*theta_upper_bound(10, 12.0).theta) <= 13.51);
  CHECK(to_degrees(*theta_upper_bound(11, 40.0 / 3).theta) <= 11.35);
  CHECK(to_degrees(*theta_upper_bound(9, 32.0 / 3).theta) < 18.0);

  const auto chained = theta_upper_bound(30, 10.0);
  REQUIRE(chained.exists());
  for (const auto& a : chained.attempts) {
    if (a.theta) CHECK(*chained.raw_theta <= *a.theta);
  }

  const auto spectral = theta_upper_bound(6, 4.0, parse_spectrum("1x2,-1x2,0x1"), ModelChoice::Exact);
  CHECK(spectral.strategy == Strategy::Exact);
  CHECK(*spectral.raw_theta == doctest::Approx(reference::g4_1_2_plus).epsilon(reference::tol));

  CHECK_FALSE(theta_upper_bound(7, 0.0).exists());
  CHECK_FALSE(theta_upper_bound(7, 6.0).exists());
}

TEST_CASE("angle table") {
  const std::vector<int> dims{7, 8, 9, 10, 11, 12};
  const std::vector<double> a2{0.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0};
  const auto t = generate_angle_table(dims, a2);
  REQUIRE(t.cells.size() == dims.size() * a2.size());
  for (std::size_t c = 0; c < dims.size(); ++c) CHECK_FALSE(t.at(0, c).degrees.has_value());
  REQUIRE(t.at(6, 5).degrees);
  CHECK(*t.at(6, 5).degrees < 9.0);
  CHECK(t.at(6, 5).strategy == Strategy::ExpBound);
  for (std::size_t c = 0; c + 1 < dims.size(); ++c) {
    const int k = dims[c];
    const auto& cell = t.at(static_cast<std::size_t>(k - 2 - 4), c);
    REQUIRE(cell.degrees);
    CHECK(*cell.degrees < 45.0);
  }

  const auto parallel = generate_angle_table(dims, a2, {}, 4);
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    CHECK(t.cells[i].degrees == parallel.cells[i].degrees);
    CHECK(t.cells[i].strategy == parallel.cells[i].strategy);
  }
}

TEST_CASE("environment tolerance only tightens") {
  ProfileSettings base;
  ::setenv("CONE_CERTIFY_TOL", "1e-12", 1);
  CHECK(settings_from_environment(base).abs_tol == 1e-12);
  ::setenv("CONE_CERTIFY_TOL", "1e-3", 1);
  CHECK(settings_from_environment(base).abs_tol == base.abs_tol);
  ::setenv("CONE_CERTIFY_TOL", "junk", 1);
  CHECK(settings_from_environment(base).abs_tol == base.abs_tol);
  ::unsetenv("CONE_CERTIFY_TOL");
}
