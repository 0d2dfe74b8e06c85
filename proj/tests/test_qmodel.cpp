#include <cmath>

#include "doctest.h"

#include "conecert/errors.hpp"
#include "conecert/qmodel.hpp"

using namespace conecert;

namespace {

Spectrum plus_1_2() { return parse_spectrum("1x2,-1x2,0x1"); }

}  // namespace

TEST_CASE("eval_q on the three models") {
  CHECK(QModel::exp_bound(1.0).eval(1.0) == doctest::Approx(0.0));
  for (double a : {0.5, 1.0, 3.0}) {
    for (int ell : {2, 5, 11}) CHECK(QModel::f_bound(a, ell).eval(0.0) == 1.0);
  }
  const auto q = QModel::exact(plus_1_2());
  CHECK(q.eval(0.5) == doctest::Approx(9.0 / 16.0).epsilon(1e-15));
  for (int i = 0; i <= 50; ++i) {
    const double t = i / 50.0;
    CHECK(q.eval(t) == doctest::Approx((1 + t) * (1 + t) * (1 - t) * (1 - t)).epsilon(1e-14));
  }
}

TEST_CASE("eval_minus_one agrees with eval and keeps small values") {
  const auto models = {QModel::exact(plus_1_2()), QModel::f_bound(2.0, 5), QModel::exp_bound(std::sqrt(10.0))};
  for (const auto& m : models) {
    for (double t : {1e-3, 0.01, 0.1, 0.3}) {
      CHECK(m.eval_minus_one(t) == doctest::Approx(m.eval(t) - 1.0).epsilon(1e-12));
    }
    const double tiny = 1e-9;
    const double lead = m.taylor()[2] * tiny * tiny;
    CHECK(m.eval_minus_one(tiny) == doctest::Approx(lead).epsilon(1e-6));
  }
}

TEST_CASE("domain ends") {
  CHECK(QModel::f_bound(2.0, 5).domain_end() == doctest::Approx(0.5 * std::sqrt(5.0 / 4.0)));
  CHECK(std::isinf(QModel::exp_bound(0.0).domain_end()));
  CHECK(std::isinf(QModel::f_bound(0.0, 4).domain_end()));
  CHECK(QModel::exp_bound(2.0).domain_end() == doctest::Approx(0.5));
  CHECK(QModel::exact(plus_1_2()).domain_end() == doctest::Approx(1.0));
  CHECK(std::isinf(QModel::exact(Spectrum::zeros(3)).domain_end()));
}

TEST_CASE("evaluation past the domain end is an error") {
  const auto q = QModel::exp_bound(2.0);
  CHECK_THROWS_AS(q.eval(0.6), DomainError);
  CHECK_THROWS_AS(q.eval(-0.1), DomainError);
  try {
    (void)q.eval(0.75);
  } catch (const DomainError& e) {
    CHECK(e.t() == 0.75);
    CHECK(e.end() == 0.5);
    CHECK(std::string(e.what()).find("beyond domain end") != std::string::npos);
  }
}

TEST_CASE("alpha_sq of spectra") {
  CHECK(alpha_sq(parse_spectrum("1x5,-1x5,0x4")) == doctest::Approx(10.0));
  CHECK(alpha_sq(Spectrum{}) == 0.0);
  CHECK(Spectrum{}.is_zero());
  CHECK(plus_1_2().dimension() == 5);
  CHECK(plus_1_2().is_trace_free());
}

TEST_CASE("spectrum text round trip") {
  const auto s = parse_spectrum(" 1x2, -1x2 ,0x1");
  CHECK(s.entries().size() == 3);
  CHECK(parse_spectrum(format_spectrum(s)).entries() == s.entries());
  CHECK_THROWS_AS(parse_spectrum("1x"), ParseError);
  CHECK_THROWS_AS(parse_spectrum("1x0"), ParseError);
  CHECK_THROWS_AS(parse_spectrum("abc"), ParseError);
}

TEST_CASE("Taylor coefficients match the determinant expansion") {
  const auto s = parse_spectrum("2x1,-1x3,0.5x2");
  const auto q = QModel::exact(s);
  const auto c = s.det_coefficients(4);
  const auto tq = q.taylor();
  for (int i = 0; i <= 4; ++i) CHECK(tq[i] == doctest::Approx(c[i]).epsilon(1e-13));
  // A trace-free spectrum has q2 = -alpha^2 / 2.
  CHECK(QModel::exact(plus_1_2()).q2() == doctest::Approx(-2.0));
  CHECK(QModel::f_bound(3.0, 6).q2() == doctest::Approx(-4.5));
  CHECK(QModel::exp_bound(3.0).q2() == doctest::Approx(-4.5));
}

TEST_CASE("equality spectrum reproduces F") {
  const auto s = equality_spectrum(1.0, 2);
  REQUIRE(s.dimension() == 2);
  CHECK(s.trace() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(s.max_eigenvalue() == doctest::Approx(1.0 / std::sqrt(2.0)));
  for (int ell : {2, 3, 4, 7, 10}) {
    for (double a : {0.3, 1.0, 2.5}) {
      const auto eq = equality_spectrum(a, ell);
      CHECK(eq.dimension() == ell);
      CHECK(std::abs(eq.trace()) < 1e-12);
      CHECK(eq.alpha_sq() == doctest::Approx(a * a).epsilon(1e-13));
      const auto qe = QModel::exact(eq);
      const auto qf = QModel::f_bound(a, ell);
      const double end = std::min(qe.domain_end(), qf.domain_end());
      CHECK(qe.domain_end() == doctest::Approx(qf.domain_end()).epsilon(1e-14));
      for (int i = 0; i <= 40; ++i) {
        const double t = std::min(end, end * i / 40.0);
        CHECK(std::abs(qe.eval(t) - qf.eval(t)) < 1e-12);
      }
    }
  }
}

TEST_CASE("F dominates the exponential bound and decreases in ell") {
  for (double a : {0.5, 1.0, std::sqrt(10.0)}) {
    for (int i = 1; i < 40; ++i) {
      const double t = i / (40.0 * a);
      double prev = 2.0;
      for (int ell = 2; ell <= 12; ++ell) {
        const auto f = QModel::f_bound(a, ell);
        if (t > f.domain_end()) continue;
        const double v = f.eval(t);
        CHECK(v >= exp_bound_value(a, t) - 1e-15);
        CHECK(v <= prev + 1e-15);
        prev = v;
      }
    }
  }
}

TEST_CASE("F is a lower bound for trace-free spectra of the same norm") {
  const auto s = parse_spectrum("1x2,-1x2,0x1");
  const double a = std::sqrt(s.alpha_sq());
  const auto q = QModel::exact(s);
  const auto f = QModel::f_bound(a, s.dimension());
  for (int i = 0; i <= 30; ++i) {
    const double t = std::min(f.domain_end(), f.domain_end() * i / 30.0);
    if (t > q.domain_end()) break;
    CHECK(q.eval(t) >= f.eval(t) - 1e-14);
  }
}
