#include "conecert/products.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "conecert/errors.hpp"

namespace conecert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tan_sq_from_cos(double c) { return c > 0.0 ? 1.0 / (c * c) - 1.0 : kInf; }

bool is_sphere(const FocalDescriptor& f) { return f.g == 2; }

void check_factor(const FocalDescriptor& f) {
  if (f.g != 2 && f.g != 3 && f.g != 4 && f.g != 6) {
    throw ProductError("unsupported factor g=" + std::to_string(f.g));
  }
  if (f.dim < 1) throw ProductError("factor dimension must be >= 1");
}

}  // namespace

std::string to_string(RadiusCase c) {
  switch (c) {
    case RadiusCase::I: return "I";
    case RadiusCase::IILeft: return "II-left";
    case RadiusCase::IIRight: return "II-right";
    case RadiusCase::III: return "III";
  }
  return "unknown";
}

std::vector<NormalRadiusCandidate> normal_radius_candidates(const BlockBound& left, const BlockBound& right) {
  if (left.dim < 1 || right.dim < 1) throw ProductError("block dimensions must be >= 1");
  const double S = left.dim + right.dim;
  const double l2 = left.dim / S;
  const double m2 = right.dim / S;
  std::vector<NormalRadiusCandidate> out;
  if (left.cos_bound && right.cos_bound) {
    out.push_back({RadiusCase::I, tan_sq_from_cos(l2 * *left.cos_bound + m2 * *right.cos_bound)});
  }
  if (left.cos_bound) out.push_back({RadiusCase::IILeft, tan_sq_from_cos(l2 * *left.cos_bound + m2)});
  if (right.cos_bound) out.push_back({RadiusCase::IIRight, tan_sq_from_cos(l2 + m2 * *right.cos_bound)});
  const double diff = static_cast<double>(left.dim) - right.dim;
  out.push_back({RadiusCase::III, diff == 0.0 ? kInf : 4.0 * left.dim * right.dim / (diff * diff)});
  return out;
}

double inherited_tan_sq(int k_min, int S) {
  return tan_sq_from_cos(1.0 - static_cast<double>(k_min) / (2.0 * S));
}

std::string describe_factor(const FocalDescriptor& f) {
  std::ostringstream os;
  if (f.g == 2) {
    os << "sphere S^" << f.dim;
  } else if (f.g == 4) {
    os << "g=4 (" << f.m1 << "," << f.m2 << ") " << to_string(f.side);
  } else {
    os << "g=" << f.g << " m=" << f.m1;
  }
  return os.str();
}

NormalRadiusBound product_normal_radius_lb(const std::vector<FocalDescriptor>& factors) {
  if (factors.size() < 2) throw ProductError("a minimal product needs at least 2 factors");
  std::vector<int> focal;
  std::vector<int> spheres;
  for (const auto& f : factors) {
    check_factor(f);
    (is_sphere(f) ? spheres : focal).push_back(f.dim);
  }
  std::sort(focal.begin(), focal.end());
  std::sort(spheres.begin(), spheres.end());

  NormalRadiusBound out;
  const auto finish_stage = [&](FoldStage& st) {
    st.candidate_min = kInf;
    for (const auto& c : st.candidates) st.candidate_min = std::min(st.candidate_min, c.omega_sq);
    st.closed_form = inherited_tan_sq(st.k_min, st.S);
    // Equality occurs exactly in some integer cases, so compare with a relative guard.
    st.dominance_ok = st.candidate_min >= st.closed_form * (1.0 - 1e-12);
    out.dominance_ok = out.dominance_ok && st.dominance_ok;
  };

  const int L = std::accumulate(spheres.begin(), spheres.end(), 0);
  if (focal.empty()) {
    // Products of spheres only: the normal radius is known in closed form.
    const int l1 = spheres.front();
    out.classified_externally = true;
    out.S = L;
    out.k_min = 4 * l1;
    out.tan_phi_sq_lb = tan_sq_from_cos(1.0 - 2.0 * l1 / L);
    FoldStage st;
    st.added = "sphere block";
    st.S = L;
    st.k_min = out.k_min;
    st.cos_bound = 1.0 - 2.0 * l1 / L;
    st.candidate_min = st.closed_form = out.tan_phi_sq_lb;
    out.ledger.push_back(st);
    return out;
  }

  // Any focal factor has |cos(2 pi j / g)| <= 1/2 = 1 - k / (2 k).
  int S = focal.front();
  int k_min = focal.front();
  for (std::size_t i = 1; i < focal.size(); ++i) {
    FoldStage st;
    st.added = "focal k=" + std::to_string(focal[i]);
    const BlockBound acc{1.0 - static_cast<double>(k_min) / (2.0 * S), S};
    st.candidates = normal_radius_candidates(acc, {0.5, focal[i]});
    S += focal[i];
    st.S = S;
    st.k_min = k_min;
    st.cos_bound = 1.0 - static_cast<double>(k_min) / (2.0 * S);
    finish_stage(st);
    out.ledger.push_back(st);
  }

  if (!spheres.empty()) {
    FoldStage st;
    const BlockBound acc{1.0 - static_cast<double>(k_min) / (2.0 * S), S};
    const int l1 = spheres.front();
    if (spheres.size() == 1) {
      st.added = "sphere S^" + std::to_string(l1);
      st.candidates = normal_radius_candidates(acc, {std::nullopt, l1});
      k_min = std::min(k_min, 2 * (l1 + 1));
    } else {
      st.added = "sphere block L=" + std::to_string(L);
      st.candidates = normal_radius_candidates(acc, {1.0 - 2.0 * l1 / L, L});
      k_min = std::min(k_min, 4 * l1);
    }
    S += L;
    st.S = S;
    st.k_min = k_min;
    st.cos_bound = 1.0 - static_cast<double>(k_min) / (2.0 * S);
    finish_stage(st);
    out.ledger.push_back(st);
  }

  out.S = S;
  out.k_min = k_min;
  out.tan_phi_sq_lb = inherited_tan_sq(k_min, S);
  return out;
}

ShapeBlock ShapeBlock::of(const FocalDescriptor& f) { return {f.dim, f.alpha_sq}; }

ShapeBlock combine(const ShapeBlock& a, const ShapeBlock& b) {
  const int dim = a.dim + b.dim;
  const double ratio = std::max({1.0, a.sup_sq / a.dim, b.sup_sq / b.dim});
  return {dim, dim * ratio};
}

ProductSpec minimal_product(const std::vector<FocalDescriptor>& factors) {
  if (factors.size() < 2) throw ProductError("a minimal product needs at least 2 factors");
  ProductSpec spec;
  spec.factors = factors;
  ShapeBlock block = ShapeBlock::of(factors.front());
  for (std::size_t i = 1; i < factors.size(); ++i) block = combine(block, ShapeBlock::of(factors[i]));
  spec.radius = product_normal_radius_lb(factors);
  spec.S = block.dim;
  spec.shape_sup_sq = block.sup_sq;
  for (const auto& f : factors) spec.weights.push_back(std::sqrt(static_cast<double>(f.dim) / spec.S));
  spec.tan_phi_sq_lb = spec.radius.tan_phi_sq_lb;
  spec.cone_dim = spec.S + 1;
  return spec;
}

Spectrum euler_normal_shape(int k1, int k2) {
  if (k1 < 1 || k2 < 1) throw ProductError("factor dimensions must be >= 1");
  const double ratio = std::sqrt(static_cast<double>(k2) / k1);  // mu / lambda
  return Spectrum({{-ratio, k1}, {1.0 / ratio, k2}});
}

Spectrum product_shape_operator(double c0, double c1, double c2, const Spectrum& f1, const Spectrum& f2) {
  const int k1 = f1.dimension();
  const int k2 = f2.dimension();
  if (k1 < 1 || k2 < 1) throw ProductError("factor dimensions must be >= 1");
  const double S = k1 + k2;
  const double lambda = std::sqrt(k1 / S);
  const double mu = std::sqrt(k2 / S);
  std::vector<SpectrumEntry> entries;
  for (const auto& e : f1.entries()) entries.push_back({-c0 * mu / lambda + c1 * e.eigenvalue / lambda, e.multiplicity});
  for (const auto& e : f2.entries()) entries.push_back({c0 * lambda / mu + c2 * e.eigenvalue / mu, e.multiplicity});
  return Spectrum(std::move(entries));
}

bool pair_inequality(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("pair inequality needs a, b > 0");
  if (a == b) throw std::invalid_argument("pair inequality is undefined for a == b");
  const double lhs = 4.0 * a * b / ((a - b) * (a - b));
  const double s = a + b;
  const double rhs = std::min(s * s / (b * b) - 1.0, s * s / (a * a) - 1.0);
  return lhs > rhs;
}

StrengthenedCheck pair_inequality_integer(long long p, long long q) {
  if (p < 1 || q < 1) throw std::invalid_argument("strengthened inequality needs p, q >= 1");
  if (p == q) throw std::invalid_argument("strengthened inequality is undefined for p == q");
  __extension__ typedef __int128 i128;
  const i128 big = std::max(p, q);
  const i128 d = p - q;
  const i128 s = p + q;
  // 4pq (big-1)^2  vs  (s^2 - (big-1)^2) (p-q)^2
  const i128 lhs = 4 * static_cast<i128>(p) * q * (big - 1) * (big - 1);
  const i128 rhs = (s * s - (big - 1) * (big - 1)) * d * d;
  return {lhs >= rhs, lhs == rhs};
}

}  // namespace conecert
