#include "conecert/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "conecert/errors.hpp"
#include "conecert/parallel.hpp"

namespace conecert {

std::string to_string(Verdict v) { return v == Verdict::Minimizing ? "Minimizing" : "Inconclusive"; }

std::string to_string(Condition c) {
  return c == Condition::ThetaBelowThreshold ? "theta<threshold" : "2theta<phi";
}

double focal_threshold(int g) {
  switch (g) {
    case 4: return kPi / 4;
    case 3:
    case 6: return kPi / 6;
    default: throw InvalidFamilyError("no wedge threshold for g=" + std::to_string(g));
  }
}

namespace {

std::string fmt(double v, int precision = 6) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(precision);
  os << v;
  return os.str();
}

std::string failure_note(const ThetaBound& bound) {
  std::string s = "no vanishing angle:";
  for (const auto& a : bound.attempts) s += " [" + to_string(a.strategy) + ": " + a.detail + "]";
  return s;
}

void decide(Certificate& c) {
  c.verdict = (c.theta0_upper && c.margin >= kSoundnessMargin) ? Verdict::Minimizing : Verdict::Inconclusive;
}

double phi_from_tan_sq(double tan_sq) { return std::isinf(tan_sq) ? kPi / 2 : std::atan(std::sqrt(tan_sq)); }

}  // namespace

Certificate certify_focal_cone(int g, int m1, int m2, Side side, const ProfileSettings& settings) {
  const FocalDescriptor d = focal_descriptor(g, m1, m2, side);
  Certificate c;
  c.subject = d;
  c.cone_dim = d.cone_dim;
  c.alpha_sq_used = d.alpha_sq;
  c.q_model_used = "exact";
  c.condition = Condition::ThetaBelowThreshold;
  if (!d.admissible) c.notes.push_back("parameters do not occur in the classification");

  if (g == 2) {
    // Great spheres: the cone is a linear subspace, and no wedge threshold applies.
    c.threshold = kPi / 2;
    c.notes.push_back("totally geodesic: the cone is a plane, outside the scope of the angle criterion");
    decide(c);
    return c;
  }

  c.threshold = focal_threshold(g);
  const auto bound = theta_upper_bound(d.cone_dim, d.alpha_sq, d.spectrum, ModelChoice::Exact, settings);
  if (bound.theta) {
    c.theta0_upper = bound.theta;
    c.margin = c.threshold - *bound.theta;
  } else {
    c.notes.push_back(failure_note(bound));
  }
  decide(c);
  return c;
}

Certificate certify_focal_union(int g, int m1, int m2, const ProfileSettings& settings) {
  if (g != 4) throw InvalidFamilyError("unions are certified for g = 4 only");
  Certificate c;
  c.subject = UnionSubject{g, m1, m2};
  c.q_model_used = "exact";
  c.condition = Condition::ThetaBelowThreshold;
  c.threshold = kPi / 8;
  c.components.push_back(certify_focal_cone(g, m1, m2, Side::Plus, settings));
  c.components.push_back(certify_focal_cone(g, m1, m2, Side::Minus, settings));

  const Certificate* worst = nullptr;
  bool all = true;
  for (const auto& side : c.components) {
    if (!side.theta0_upper) {
      all = false;
      continue;
    }
    if (!worst || *side.theta0_upper > *worst->theta0_upper) worst = &side;
  }
  if (worst) {
    c.cone_dim = worst->cone_dim;
    c.alpha_sq_used = worst->alpha_sq_used;
  } else {
    c.cone_dim = c.components.front().cone_dim;
    c.alpha_sq_used = c.components.front().alpha_sq_used;
  }
  if (all && worst) {
    c.theta0_upper = worst->theta0_upper;
    c.margin = c.threshold - *c.theta0_upper;
  } else {
    c.notes.push_back("a side has no vanishing angle");
  }
  decide(c);
  return c;
}

Certificate certify_product(const std::vector<FocalDescriptor>& factors, const ProfileSettings& settings) {
  const ProductSpec spec = minimal_product(factors);
  Certificate c;
  c.cone_dim = spec.cone_dim;
  c.alpha_sq_used = spec.shape_sup_sq;
  c.condition = Condition::TwoThetaBelowPhi;
  c.tan_phi_sq_lb = spec.tan_phi_sq_lb;
  c.threshold = phi_from_tan_sq(spec.tan_phi_sq_lb);

  const auto bound = theta_upper_bound(spec.cone_dim, spec.shape_sup_sq, std::nullopt, ModelChoice::Auto, settings);
  if (bound.theta) {
    c.q_model_used = to_string(*bound.strategy);
    c.theta0_upper = bound.theta;
    c.margin = c.threshold - 2.0 * *bound.theta;
  } else {
    c.q_model_used = "none";
    c.notes.push_back(failure_note(bound));
  }
  if (spec.radius.classified_externally) c.notes.push_back("classified externally: every factor is a sphere");
  if (!spec.radius.dominance_ok) c.notes.push_back("warning: candidate minimum fell below the closed-form bound");

  const bool closed_form_applies = !spec.radius.classified_externally && spec.radius.k_min >= 1;
  const auto cf = closed_form_applies ? closed_form_checks(spec.S, spec.radius.k_min) : ClosedFormChecks{};
  std::string which;
  if (cf.chain_holds) which = "closed form with k_min >= 4 holds";
  if (cf.poly_holds && spec.S >= 11) which += std::string(which.empty() ? "" : "; ") + "polynomial condition holds";
  c.notes.push_back(which.empty() ? "numeric certificate only" : which);

  c.subject = spec;
  decide(c);
  return c;
}

bool recheck_fields(const Certificate& cert, std::string* why) {
  const auto fail = [&](const std::string& w) {
    if (why) *why = w;
    return false;
  };
  double expected_margin = 0.0;
  if (cert.theta0_upper) {
    if (!(*cert.theta0_upper > 0.0 && *cert.theta0_upper < kPi / 2)) return fail("theta0 outside (0, pi/2)");
    if (cert.condition == Condition::ThetaBelowThreshold) {
      expected_margin = cert.threshold - *cert.theta0_upper;
    } else {
      if (!cert.tan_phi_sq_lb) return fail("product certificate without a normal-radius bound");
      const double phi = phi_from_tan_sq(*cert.tan_phi_sq_lb);
      if (std::abs(phi - cert.threshold) > 1e-12) return fail("threshold does not match tan^2 phi");
      expected_margin = phi - 2.0 * *cert.theta0_upper;
    }
    if (std::abs(expected_margin - cert.margin) > 1e-12) return fail("margin does not match its inputs");
  }
  const bool should = cert.theta0_upper && expected_margin >= kSoundnessMargin;
  if (should != cert.minimizing()) return fail("verdict does not follow from the margin");
  for (const auto& comp : cert.components) {
    if (!recheck_fields(comp, why)) return false;
  }
  return true;
}

bool recheck(const Certificate& cert, const ProfileSettings& settings, std::string* why) {
  if (!recheck_fields(cert, why)) return false;
  Certificate fresh;
  if (const auto* f = std::get_if<FocalDescriptor>(&cert.subject)) {
    fresh = certify_focal_cone(f->g, f->m1, f->m2, f->side, settings);
  } else if (const auto* u = std::get_if<UnionSubject>(&cert.subject)) {
    fresh = certify_focal_union(u->g, u->m1, u->m2, settings);
  } else {
    fresh = certify_product(std::get<ProductSpec>(cert.subject).factors, settings);
  }
  const auto fail = [&](const std::string& w) {
    if (why) *why = w;
    return false;
  };
  if (fresh.verdict != cert.verdict) return fail("re-derived verdict differs");
  if (fresh.cone_dim != cert.cone_dim) return fail("re-derived cone dimension differs");
  if (std::abs(fresh.alpha_sq_used - cert.alpha_sq_used) > 1e-12 * std::max(1.0, cert.alpha_sq_used)) {
    return fail("re-derived alpha^2 differs");
  }
  if (fresh.theta0_upper.has_value() != cert.theta0_upper.has_value()) return fail("re-derived angle existence differs");
  if (cert.theta0_upper && std::abs(*fresh.theta0_upper - *cert.theta0_upper) > 1e-8) {
    return fail("re-derived angle differs by " + fmt(std::abs(*fresh.theta0_upper - *cert.theta0_upper), 12));
  }
  if (std::abs(fresh.threshold - cert.threshold) > 1e-12) return fail("re-derived threshold differs");
  return true;
}

bool product_polynomial_positive(long long S, long long k1) {
  if (S < 1 || k1 < 1) throw std::invalid_argument("S and k1 must be positive");
  // With c = 1683/10000, multiply through by 4 * 10^16 to stay in integers:
  //   (4 k1 S - k1^2) [ (S+1)^2 10^8 - 20196^2 ]^2  vs  (2S - k1)^2 (24 * 1683 (S+1))^2 10^8
  if (S <= 1000) {
    __extension__ typedef __int128 i128;
    const i128 s1 = S + 1;
    const i128 inner = s1 * s1 * 100000000 - static_cast<i128>(20196) * 20196;
    const i128 lhs = (4 * static_cast<i128>(k1) * S - static_cast<i128>(k1) * k1) * inner * inner;
    const i128 r = static_cast<i128>(24 * 1683) * s1;
    const i128 rhs = (2 * static_cast<i128>(S) - k1) * (2 * static_cast<i128>(S) - k1) * r * r * 100000000;
    return lhs > rhs;
  }
  const long double c = 0.1683L;
  const long double s = S, k = k1;
  const long double a = (s + 1) * (s + 1) - (12 * c) * (12 * c);
  const long double b = 24 * (s + 1) * c;
  return (k * s - k * k / 4) * a * a - (s - k / 2) * (s - k / 2) * b * b > 0;
}

ClosedFormChecks closed_form_checks(int S, int k1) {
  if (k1 < 1 || S < k1) throw std::invalid_argument("closed_form_checks needs S >= k1 >= 1");
  ClosedFormChecks out;
  if (k1 >= 4 && S >= 8) {
    __extension__ typedef __int128 i128;
    const i128 s = S, k = k1;
    // (1/(1 - k1/2S))^2 - 1 = k1 (4S - k1) / (2S - k1)^2  >=  4(S-1)/(S-2)^2
    const bool first = k * (4 * s - k) * (s - 2) * (s - 2) >= 4 * (s - 1) * (2 * s - k) * (2 * s - k);
    // 4(S-1)/(S-2)^2 > 3(S-1)/(S-7/4)^2
    const bool second = (4 * s - 7) * (4 * s - 7) > 12 * (s - 2) * (s - 2);
    out.chain_holds = first && second;
  }
  out.poly_holds = product_polynomial_positive(S, k1);
  return out;
}

std::vector<SweepEntry> g4_family_sweep(int max_sum, const ProfileSettings& settings, unsigned jobs) {
  const auto families = enumerate_g4_families(max_sum);
  std::vector<SweepEntry> out(families.size());
  parallel_for(families.size(), jobs, [&](std::size_t i) {
    const auto& f = families[i];
    out[i] = {f, certify_focal_cone(4, f.m1, f.m2, Side::Plus, settings),
              certify_focal_cone(4, f.m1, f.m2, Side::Minus, settings)};
  });
  return out;
}

}  // namespace conecert
