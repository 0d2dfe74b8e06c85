#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "conecert/certifier.hpp"
#include "conecert/parallel.hpp"

namespace conecert {

namespace {

ClaimCheck less_than(std::string label, double computed, double bound, double min_margin = 0.0) {
  const double margin = bound - computed;
  return {std::move(label), computed, bound, margin, margin > min_margin};
}

ClaimCheck at_most(std::string label, double computed, double bound) {
  const double margin = bound - computed;
  return {std::move(label), computed, bound, margin, margin >= 0.0};
}

ClaimCheck flag(std::string label, bool ok, double computed = 0.0, double bound = 0.0) {
  return {std::move(label), computed, bound, bound - computed, ok};
}

double theta_or_nan(const ThetaBound& b) { return b.theta ? *b.theta : std::nan(""); }

ClaimRecord angle_below_9(const ProfileSettings& s) {
  ClaimRecord r{"C01", "theta_c(12, sqrt 10) exists and is below 9 degrees", {}, false, ""};
  const auto b = theta_upper_bound(12, 10.0, std::nullopt, ModelChoice::ExpBound, s);
  r.checks.push_back(flag("vanishing angle exists", b.exists()));
  r.checks.push_back(less_than("theta (rad) < 9 deg", theta_or_nan(b), to_radians(9.0), kSoundnessMargin));
  return r;
}

ClaimRecord f_bound_quotes(const ProfileSettings& s) {
  ClaimRecord r{"C02", "theta_F(9, sqrt(32/3)) < 18; theta_F(10, sqrt 12) <= 13.51; theta_F(11, sqrt(40/3)) <= 11.35 (degrees)",
                {}, false, ""};
  const auto f = [&](int k, double a2) {
    return theta_or_nan(theta_upper_bound(k, a2, std::nullopt, ModelChoice::FBound, s));
  };
  r.checks.push_back(less_than("theta_F(9, 32/3) (deg)", to_degrees(f(9, 32.0 / 3.0)), 18.0));
  r.checks.push_back(at_most("theta_F(10, 12) (deg)", to_degrees(f(10, 12.0)), 13.51));
  r.checks.push_back(at_most("theta_F(11, 40/3) (deg)", to_degrees(f(11, 40.0 / 3.0)), 11.35));
  return r;
}

ClaimRecord tan_below_constant(const ProfileSettings& s) {
  ClaimRecord r{"C03", "tan theta_c(12, sqrt(44/3)) < 0.1683", {}, false, ""};
  const auto b = theta_upper_bound(12, 44.0 / 3.0, std::nullopt, ModelChoice::ExpBound, s);
  r.checks.push_back(less_than("tan theta_c(12, 44/3)", std::tan(theta_or_nan(b)), 0.1683));
  return r;
}

ClaimRecord below_45(const ProfileSettings& s) {
  ClaimRecord r{"C04", "theta_F(k, sqrt(k-2)) exists and is below 45 degrees for k = 7..11", {}, false, ""};
  for (int k = 7; k <= 11; ++k) {
    const auto b = theta_upper_bound(k, k - 2.0, std::nullopt, ModelChoice::FBound, s);
    r.checks.push_back(less_than("theta_F(" + std::to_string(k) + ", " + std::to_string(k - 2) + ") (deg)",
                                 to_degrees(theta_or_nan(b)), 45.0));
  }
  return r;
}

ClaimRecord family_1_2(const ProfileSettings& s) {
  ClaimRecord r{"C05", "family (4,1,2): minus side below 27 degrees, plus side below 25 degrees", {}, false, ""};
  const auto minus = certify_focal_cone(4, 1, 2, Side::Minus, s);
  const auto plus = certify_focal_cone(4, 1, 2, Side::Plus, s);
  r.checks.push_back(flag("minus: (cone_dim, alpha^2) = (5, 2)", minus.cone_dim == 5 && minus.alpha_sq_used == 2.0));
  r.checks.push_back(flag("minus certifies", minus.minimizing()));
  r.checks.push_back(less_than("minus theta0 (deg)", to_degrees(minus.theta0_upper.value_or(NAN)), 27.0));
  const auto fb = theta_upper_bound(5, 2.0, std::nullopt, ModelChoice::FBound, s);
  r.checks.push_back(less_than("minus theta_F(5, sqrt 2) with l=4 (deg)", to_degrees(theta_or_nan(fb)), 27.0));
  r.checks.push_back(flag("plus: (cone_dim, alpha^2) = (6, 4)", plus.cone_dim == 6 && plus.alpha_sq_used == 4.0));
  r.checks.push_back(flag("plus certifies", plus.minimizing()));
  r.checks.push_back(less_than("plus theta0 (deg)", to_degrees(plus.theta0_upper.value_or(NAN)), 25.0));

  const auto q = QModel::exact(focal_descriptor(4, 1, 2, Side::Plus).spectrum);
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    const double ref = (1 + t) * (1 + t) * (1 - t) * (1 - t);
    worst = std::max(worst, std::abs(q.eval(t) - ref));
  }
  r.checks.push_back(less_than("plus q(t) vs (1+t)^2(1-t)^2 max error", worst, 1e-12));
  return r;
}

ClaimRecord g3_g6(const ProfileSettings& s) {
  ClaimRecord r{"C06", "g = 3, 6 focal cones (5,4/3), (9,8/3), (17,16/3), (11,40/3) certify below 30 degrees", {}, false, ""};
  struct Case {
    int g, m, cone;
    double a2;
  };
  for (const Case c : {Case{3, 2, 5, 4.0 / 3}, Case{3, 4, 9, 8.0 / 3}, Case{3, 8, 17, 16.0 / 3}, Case{6, 2, 11, 40.0 / 3}}) {
    for (Side side : {Side::Plus, Side::Minus}) {
      const auto cert = certify_focal_cone(c.g, c.m, c.m, side, s);
      const std::string tag = "g=" + std::to_string(c.g) + " m=" + std::to_string(c.m) + " " + to_string(side);
      r.checks.push_back(flag(tag + " (cone_dim, alpha^2)", cert.cone_dim == c.cone && std::abs(cert.alpha_sq_used - c.a2) < 1e-12));
      r.checks.push_back(less_than(tag + " theta0 (deg)", to_degrees(cert.theta0_upper.value_or(NAN)), 30.0));
      r.checks.push_back(flag(tag + " certifies", cert.minimizing()));
    }
  }
  return r;
}

ClaimRecord union_2_2(const ProfileSettings& s) {
  ClaimRecord r{"C07", "family (4,2,2): both sides below pi/8 and the union certifies", {}, false, ""};
  const auto u = certify_focal_union(4, 2, 2, s);
  for (const auto& side : u.components) {
    r.checks.push_back(less_than("cone_dim " + std::to_string(side.cone_dim) + " theta0 (rad) < pi/8",
                                 side.theta0_upper.value_or(NAN), kPi / 8, kSoundnessMargin));
  }
  r.checks.push_back(flag("both cones of dimension 7", u.components[0].cone_dim == 7 && u.components[1].cone_dim == 7));
  r.checks.push_back(flag("union certifies", u.minimizing()));
  return r;
}

ClaimRecord sweep(const ProfileSettings& s, unsigned jobs) {
  ClaimRecord r{"C08", "every g = 4 family with m1 + m2 <= 20 certifies on both sides except (1,1), which is inconclusive",
                {}, false, ""};
  const auto entries = g4_family_sweep(20, s, jobs);
  int ok = 0;
  double worst = 0.0;
  std::string bad;
  for (const auto& e : entries) {
    const bool one_one = e.family.m1 == 1 && e.family.m2 == 1;
    const bool good = one_one ? (!e.plus.minimizing() && !e.minus.minimizing())
                              : (e.plus.minimizing() && e.minus.minimizing());
    if (good) {
      ++ok;
    } else {
      bad += " (" + std::to_string(e.family.m1) + "," + std::to_string(e.family.m2) + ")";
    }
    if (!one_one) worst = std::max({worst, e.plus.theta0_upper.value_or(kPi), e.minus.theta0_upper.value_or(kPi)});
  }
  r.checks.push_back(flag("families as expected", ok == static_cast<int>(entries.size()), ok, entries.size()));
  r.checks.push_back(less_than("largest theta0 over certified families (deg)", to_degrees(worst), 45.0));
  r.detail = std::to_string(entries.size()) + " families" + (bad.empty() ? "" : "; unexpected:" + bad);
  return r;
}

ClaimRecord polynomial(const ProfileSettings&) {
  ClaimRecord r{"C09", "product polynomial is positive for k1 in {2,3} and 11 <= S <= 1000", {}, false, ""};
  for (int k1 : {2, 3}) {
    int failures = 0;
    for (int S = 11; S <= 1000; ++S) failures += !product_polynomial_positive(S, k1);
    r.checks.push_back(flag("k1=" + std::to_string(k1) + " failures", failures == 0, failures, 0));
  }
  return r;
}

ClaimRecord edge_cases(const ProfileSettings& s) {
  ClaimRecord r{"C10", "S = 9, 10 with k1 = 2: tan^2 phi lower bound exceeds tan^2 of twice 13.51 and 11.35 degrees", {}, false, ""};
  struct Case {
    int S;
    double quoted_deg;
    double alpha_sq;
  };
  for (const Case c : {Case{9, 13.51, 12.0}, Case{10, 11.35, 40.0 / 3}}) {
    const double lb = inherited_tan_sq(2, c.S);
    const double quoted = std::pow(std::tan(to_radians(2 * c.quoted_deg)), 2);
    const std::string tag = "S=" + std::to_string(c.S);
    r.checks.push_back(less_than(tag + " tan^2(2 x quoted) < lower bound", quoted, lb));
    const auto b = theta_upper_bound(c.S + 1, c.alpha_sq, std::nullopt, ModelChoice::FBound, s);
    r.checks.push_back(less_than(tag + " tan^2(2 theta_F) < lower bound", std::pow(std::tan(2 * theta_or_nan(b)), 2), lb));
  }
  return r;
}

ClaimRecord pair_inequalities(const ProfileSettings&) {
  ClaimRecord r{"C11", "pair inequality on the 0.1..10 grid; integer form for p != q <= 200 with equality iff min(p,q) = 1",
                {}, false, ""};
  int grid_fail = 0;
  int grid_total = 0;
  for (int i = 1; i <= 100; ++i) {
    for (int j = 1; j <= 100; ++j) {
      if (i == j) continue;
      ++grid_total;
      grid_fail += !pair_inequality(i / 10.0, j / 10.0);
    }
  }
  r.checks.push_back(flag("real grid failures", grid_fail == 0, grid_fail, 0));
  int int_fail = 0;
  int eq_mismatch = 0;
  for (int p = 1; p <= 200; ++p) {
    for (int q = 1; q <= 200; ++q) {
      if (p == q) continue;
      const auto c = pair_inequality_integer(p, q);
      int_fail += !c.holds;
      eq_mismatch += c.equality != (std::min(p, q) == 1);
    }
  }
  r.checks.push_back(flag("integer form failures", int_fail == 0, int_fail, 0));
  r.checks.push_back(flag("equality cases other than min(p,q) = 1", eq_mismatch == 0, eq_mismatch, 0));
  r.detail = std::to_string(grid_total) + " grid pairs";
  return r;
}

ClaimRecord properties(const ProfileSettings& s) {
  ClaimRecord r{"C12", "property suites: equality spectrum, residual, monotonicity, dimension reduction, associativity, dominance",
                {}, false, ""};

  double pointwise = 0.0;
  double angle_gap = 0.0;
  double residual = 0.0;
  for (int ell : {4, 6, 8, 10}) {
    for (double a2 : {0.5, 1.0, 2.0}) {
      const double alpha = std::sqrt(a2 * (ell - 1));
      const auto eq = QModel::exact(equality_spectrum(alpha, ell));
      const auto fb = QModel::f_bound(alpha, ell);
      const double end = std::min(fb.domain_end(), eq.domain_end());
      for (int i = 0; i <= 20; ++i) {
        const double t = std::min(end, end * i / 20.0);
        pointwise = std::max(pointwise, std::abs(eq.eval(t) - fb.eval(t)));
      }
      const auto se = solve_profile(eq, ell + 1, s);
      const auto sf = solve_profile(fb, ell + 1, s);
      if (se.vanishes() != sf.vanishes()) angle_gap = INFINITY;
      if (se.vanishes() && sf.vanishes()) {
        angle_gap = std::max(angle_gap, std::abs(se.vanishing()->theta - sf.vanishing()->theta));
      }
      residual = std::max({residual, se.max_residual, sf.max_residual});
    }
  }
  r.checks.push_back(less_than("equality spectrum vs F pointwise", pointwise, 1e-12));
  r.checks.push_back(less_than("equality spectrum vs F angle (rad)", angle_gap, 1e-7));
  r.checks.push_back(less_than("equality-case residual", residual, 1e-8));

  // Exponential model on a 5x5 grid of (k, alpha^2 / k).
  const int ks[] = {8, 10, 12, 14, 16};
  const double fracs[] = {0.2, 0.4, 0.6, 0.8, 1.0};
  int mono_fail = 0;
  int reduce_fail = 0;
  int reduce_checked = 0;
  for (int k : ks) {
    double prev = 0.0;
    for (double fr : fracs) {
      const double alpha = std::sqrt(fr * k);
      const auto base = solve_profile(QModel::exp_bound(alpha), k, s);
      if (!base.vanishes()) {
        prev = INFINITY;
        continue;
      }
      const double th = base.vanishing()->theta;
      if (!(th > prev)) ++mono_fail;
      prev = th;
      const int ell = k + 3;
      const double tan_direct = std::tan(theta_or_nan(theta_upper_bound(
          ell, std::pow(ell * alpha / k, 2), std::nullopt, ModelChoice::ExpBound, s)));
      ++reduce_checked;
      if (!(tan_direct <= chain_bound(ell, ell * alpha / k, k, alpha, base.vanishing()->t_star))) ++reduce_fail;
    }
  }
  r.checks.push_back(flag("monotonicity in alpha violations", mono_fail == 0, mono_fail, 0));
  r.checks.push_back(flag("dimension reduction violations", reduce_fail == 0 && reduce_checked > 0, reduce_fail, 0));

  std::mt19937_64 rng(20240611);
  const auto random_factor = [&]() {
    std::uniform_int_distribution<int> pick(0, 6);
    switch (pick(rng)) {
      case 0: return focal_descriptor(3, 2, 2, Side::Plus);
      case 1: return focal_descriptor(3, 4, 4, Side::Plus);
      case 2: return focal_descriptor(6, 2, 2, Side::Plus);
      case 3: return focal_descriptor(4, 1, 2, Side::Minus);
      case 4: return focal_descriptor(4, 2, 2, Side::Plus);
      case 5: return focal_descriptor(3, 1, 1, Side::Plus);
      default: return sphere_factor(std::uniform_int_distribution<int>(1, 6)(rng));
    }
  };
  int assoc_fail = 0;
  int dom_fail = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 5)(rng);
    std::vector<FocalDescriptor> fs;
    for (int i = 0; i < n; ++i) fs.push_back(random_factor());
    ShapeBlock left = ShapeBlock::of(fs[0]);
    for (int i = 1; i < n; ++i) left = combine(left, ShapeBlock::of(fs[i]));
    ShapeBlock right = ShapeBlock::of(fs[n - 1]);
    for (int i = n - 2; i >= 0; --i) right = combine(ShapeBlock::of(fs[i]), right);
    if (left.dim != right.dim || std::abs(left.sup_sq - right.sup_sq) > 1e-12 * left.sup_sq) ++assoc_fail;
    dom_fail += !product_normal_radius_lb(fs).dominance_ok;
  }
  r.checks.push_back(flag("associativity violations", assoc_fail == 0, assoc_fail, 0));
  r.checks.push_back(flag("candidate dominance violations", dom_fail == 0, dom_fail, 0));
  return r;
}

}  // namespace

ClaimReport verify_claims(const ProfileSettings& settings, unsigned jobs) {
  const std::vector<std::function<ClaimRecord()>> tasks = {
      [&] { return angle_below_9(settings); },     [&] { return f_bound_quotes(settings); },
      [&] { return tan_below_constant(settings); }, [&] { return below_45(settings); },
      [&] { return family_1_2(settings); },         [&] { return g3_g6(settings); },
      [&] { return union_2_2(settings); },          [&] { return sweep(settings, 1); },
      [&] { return polynomial(settings); },         [&] { return edge_cases(settings); },
      [&] { return pair_inequalities(settings); },  [&] { return properties(settings); },
  };
  ClaimReport report;
  report.claims.resize(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t i) {
    ClaimRecord rec = tasks[i]();
    rec.passed = !rec.checks.empty() &&
                 std::all_of(rec.checks.begin(), rec.checks.end(), [](const ClaimCheck& c) { return c.passed; });
    report.claims[i] = std::move(rec);
  });
  report.passed = std::all_of(report.claims.begin(), report.claims.end(), [](const ClaimRecord& c) { return c.passed; });
  return report;
}

}  // namespace conecert
