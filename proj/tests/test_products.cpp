#include <cmath>
#include <random>

#include "doctest.h"

#include "conecert/errors.hpp"
#include "conecert/products.hpp"

using namespace conecert;

namespace {

std::optional<double> find(const std::vector<NormalRadiusCandidate>& v, RadiusCase c) {
  for (const auto& x : v) {
    if (x.kase == c) return x.omega_sq;
  }
  return std::nullopt;
}

FocalDescriptor g3m2() { return focal_descriptor(3, 2, 2, Side::Plus); }

}  // namespace

TEST_CASE("normal radius candidates") {
  const auto both_half = normal_radius_candidates({0.5, 4}, {0.5, 16});
  REQUIRE(find(both_half, RadiusCase::I));
  CHECK(*find(both_half, RadiusCase::I) == doctest::Approx(3.0));
  CHECK(*find(both_half, RadiusCase::III) == doctest::Approx(16.0 / 9.0));

  const auto equal = normal_radius_candidates({0.5, 4}, {0.5, 4});
  REQUIRE(find(equal, RadiusCase::III));
  CHECK(std::isinf(*find(equal, RadiusCase::III)));

  const auto sphere_right = normal_radius_candidates({0.5, 4}, {std::nullopt, 4});
  CHECK_FALSE(find(sphere_right, RadiusCase::I));
  CHECK_FALSE(find(sphere_right, RadiusCase::IIRight));
  CHECK(find(sphere_right, RadiusCase::IILeft));
  CHECK(find(sphere_right, RadiusCase::III));
}

TEST_CASE("inherited bound") {
  CHECK(inherited_tan_sq(4, 8) == doctest::Approx(7.0 / 9.0));
  for (int S = 8; S <= 40; ++S) CHECK(inherited_tan_sq(4, S) == doctest::Approx(4.0 * (S - 1) / ((S - 2.0) * (S - 2.0))));
}

TEST_CASE("two-factor normal radius") {
  const auto r = product_normal_radius_lb({g3m2(), g3m2()});
  CHECK(r.S == 8);
  CHECK(r.k_min == 4);
  CHECK(r.tan_phi_sq_lb >= 7.0 / 9.0 - 1e-15);
  CHECK(r.dominance_ok);

  const auto with_sphere = product_normal_radius_lb({g3m2(), sphere_factor(4)});
  CHECK(with_sphere.S == 8);
  CHECK(with_sphere.k_min == 4);
  CHECK(with_sphere.tan_phi_sq_lb >= 7.0 / 9.0 - 1e-15);
  CHECK_FALSE(with_sphere.classified_externally);

  const auto spheres = product_normal_radius_lb({sphere_factor(2), sphere_factor(3)});
  CHECK(spheres.classified_externally);

  for (int m1 : {1, 2, 3}) {
    for (int m2 : {2, 4, 8}) {
      const auto a = focal_descriptor(4, m1, m2, Side::Minus);
      const auto b = focal_descriptor(3, m2, m2, Side::Plus);
      const auto lb = product_normal_radius_lb({a, b});
      const int k1 = std::min(a.dim, b.dim);
      CHECK(lb.tan_phi_sq_lb >= inherited_tan_sq(k1, a.dim + b.dim) * (1 - 1e-12));
      CHECK(lb.dominance_ok);
    }
  }
}

TEST_CASE("minimal product") {
  const auto p = minimal_product({g3m2(), g3m2()});
  CHECK(p.S == 8);
  CHECK(p.cone_dim == 9);
  CHECK(p.weights[0] * p.weights[0] == doctest::Approx(0.5));
  CHECK(p.shape_sup_sq == doctest::Approx(8.0));
  CHECK(p.shape_sup_sq <= 4.0 / 3.0 * p.S);

  const auto with_g6 = minimal_product({g3m2(), focal_descriptor(6, 2, 2, Side::Plus), sphere_factor(3)});
  CHECK(with_g6.shape_sup_sq == doctest::Approx(4.0 / 3.0 * with_g6.S));

  CHECK_THROWS_AS(minimal_product({g3m2()}), ProductError);
  CHECK_THROWS_AS(minimal_product({}), ProductError);
}

TEST_CASE("shape_sup_sq is associative") {
  std::mt19937_64 rng(7);
  const std::vector<FocalDescriptor> pool = {g3m2(),
                                             focal_descriptor(3, 1, 1, Side::Minus),
                                             focal_descriptor(4, 1, 2, Side::Plus),
                                             focal_descriptor(4, 2, 2, Side::Minus),
                                             focal_descriptor(6, 1, 1, Side::Plus),
                                             focal_descriptor(6, 2, 2, Side::Minus),
                                             sphere_factor(3)};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = ShapeBlock::of(pool[pick(rng)]);
    const auto b = ShapeBlock::of(pool[pick(rng)]);
    const auto c = ShapeBlock::of(pool[pick(rng)]);
    const auto left = combine(combine(a, b), c);
    const auto right = combine(a, combine(b, c));
    CHECK(left.dim == right.dim);
    CHECK(left.sup_sq == doctest::Approx(right.sup_sq).epsilon(1e-14));
  }
}

TEST_CASE("product shape operator") {
  const auto e = euler_normal_shape(4, 16);
  CHECK(std::abs(e.trace()) < 1e-12);
  CHECK(e.alpha_sq() == doctest::Approx(20.0));

  const auto f1 = g3m2().spectrum;
  const auto f2 = focal_descriptor(4, 1, 2, Side::Minus).spectrum;
  const double sup = combine(ShapeBlock::of(g3m2()), ShapeBlock::of(focal_descriptor(4, 1, 2, Side::Minus))).sup_sq;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  double best = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    double c[3] = {n(rng), n(rng), n(rng)};
    const double norm = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    for (double& x : c) x /= norm;
    const auto a = product_shape_operator(c[0], c[1], c[2], f1, f2);
    CHECK(a.dimension() == 8);
    CHECK(std::abs(a.trace()) < 1e-12);
    CHECK(a.alpha_sq() <= sup * (1 + 1e-12));
    best = std::max(best, a.alpha_sq());
  }
  CHECK(best > 0.9 * sup);
  CHECK(product_shape_operator(1, 0, 0, f1, f2).alpha_sq() == doctest::Approx(8.0));
}

TEST_CASE("pair inequality") {
  CHECK(pair_inequality(1.0, 2.0));
  CHECK_THROWS(pair_inequality(2.0, 2.0));
  CHECK_THROWS(pair_inequality(-1.0, 2.0));
  for (int i = 1; i <= 100; ++i) {
    for (int j = 1; j <= 100; ++j) {
      if (i != j) CHECK(pair_inequality(i / 10.0, j / 10.0));
    }
  }
}

TEST_CASE("integer pair inequality") {
  const auto five_one = pair_inequality_integer(5, 1);
  CHECK(five_one.holds);
  CHECK(five_one.equality);
  CHECK(pair_inequality_integer(1, 5).equality);
  const auto strict = pair_inequality_integer(5, 3);
  CHECK(strict.holds);
  CHECK_FALSE(strict.equality);
  CHECK_THROWS(pair_inequality_integer(4, 4));
  for (long long p = 1; p <= 60; ++p) {
    for (long long q = 1; q <= 60; ++q) {
      if (p == q) continue;
      const auto r = pair_inequality_integer(p, q);
      CHECK(r.holds);
      CHECK(r.equality == (std::min(p, q) == 1));
    }
  }
}

TEST_CASE("describe factor") {
  CHECK_FALSE(describe_factor(g3m2()).empty());
  CHECK(describe_factor(sphere_factor(4)) != describe_factor(g3m2()));
}
