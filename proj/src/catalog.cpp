#include "conecert/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <utility>

#include "conecert/errors.hpp"

namespace conecert {

std::string to_string(Side side) { return side == Side::Plus ? "plus" : "minus"; }

Side parse_side(const std::string& text) {
  if (text == "plus" || text == "+") return Side::Plus;
  if (text == "minus" || text == "-") return Side::Minus;
  throw InvalidFamilyError("side must be plus or minus, got '" + text + "'");
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidFamilyError(what);
}

}  // namespace

FocalDescriptor focal_descriptor(int g, int m1, int m2, Side side) {
  if (g == 1) throw InvalidFamilyError("g = 1 has point focal sets; no focal cone");
  require(g == 2 || g == 3 || g == 4 || g == 6, "g must be in {2,3,4,6}");
  require(m1 >= 1 && m2 >= 1, "multiplicities must be >= 1");
  if (g == 3 || g == 6) require(m1 == m2, "g = 3 and g = 6 need m1 = m2");

  FocalDescriptor d;
  d.g = g;
  d.m1 = m1;
  d.m2 = m2;
  d.side = side;

  const double r3 = std::sqrt(3.0);
  switch (g) {
    case 2:
      d.dim = side == Side::Plus ? m1 : m2;
      d.spectrum = Spectrum::zeros(d.dim);
      break;
    case 3:
      d.dim = 2 * m1;
      d.spectrum = Spectrum({{1.0 / r3, m1}, {-1.0 / r3, m1}});
      break;
    case 4: {
      // M_+ has the kernel of dimension m1 and curvatures +-1 of multiplicity m2.
      const int kernel = side == Side::Plus ? m1 : m2;
      const int pm = side == Side::Plus ? m2 : m1;
      d.dim = kernel + 2 * pm;
      d.spectrum = Spectrum({{1.0, pm}, {-1.0, pm}, {0.0, kernel}});
      break;
    }
    case 6:
      d.dim = 5 * m1;
      d.spectrum = Spectrum({{r3, m1}, {-r3, m1}, {1.0 / r3, m1}, {-1.0 / r3, m1}, {0.0, m1}});
      break;
  }
  d.alpha_sq = d.spectrum.alpha_sq();
  d.cone_dim = d.dim + 1;
  d.admissible = is_admissible(g, m1, m2);
  return d;
}

FocalDescriptor sphere_factor(int l) {
  require(l >= 1, "sphere dimension must be >= 1");
  return focal_descriptor(2, l, l, Side::Plus);
}

long long clifford_delta(int m) {
  if (m < 1) throw std::invalid_argument("clifford_delta needs m >= 1");
  static constexpr long long base[8] = {1, 2, 4, 4, 8, 8, 8, 8};
  long long scale = 1;
  while (m > 8) {
    m -= 8;
    scale *= 16;
  }
  return scale * base[m - 1];
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::OtFkm: return "OT-FKM";
    case Provenance::HomogeneousExceptional: return "homogeneous-exceptional";
    case Provenance::LowG: return "g<=3-or-6";
  }
  return "unknown";
}

std::vector<FamilyRecord> enumerate_g4_families(int max_sum) {
  if (max_sum < 2) throw std::invalid_argument("max_sum must be >= 2");
  std::set<std::pair<int, int>> otfkm;
  for (int m = 1; m < max_sum; ++m) {
    const long long delta = clifford_delta(m);
    for (long long k = 1;; ++k) {
      const long long m2 = k * delta - m - 1;
      if (m + m2 > max_sum) break;
      if (m2 >= 1) otfkm.emplace(m, static_cast<int>(m2));
    }
  }
  std::vector<FamilyRecord> out;
  for (const auto& [a, b] : otfkm) out.push_back({4, a, b, Provenance::OtFkm});
  for (const auto& [a, b] : {std::pair{2, 2}, std::pair{4, 5}}) {
    if (a + b <= max_sum && !otfkm.count({a, b})) out.push_back({4, a, b, Provenance::HomogeneousExceptional});
  }
  std::sort(out.begin(), out.end(), [](const FamilyRecord& x, const FamilyRecord& y) {
    return std::tie(x.m1, x.m2) < std::tie(y.m1, y.m2);
  });
  return out;
}

std::vector<FamilyRecord> enumerate_low_g_families(int max_sum) {
  std::vector<FamilyRecord> out;
  for (int m : {1, 2, 4, 8}) {
    if (2 * m <= max_sum) out.push_back({3, m, m, Provenance::LowG});
  }
  for (int m : {1, 2}) {
    if (2 * m <= max_sum) out.push_back({6, m, m, Provenance::LowG});
  }
  for (int a = 1; a < max_sum; ++a) {
    for (int b = a; a + b <= max_sum; ++b) out.push_back({2, a, b, Provenance::LowG});
  }
  return out;
}

bool is_admissible(int g, int m1, int m2) {
  if (m1 < 1 || m2 < 1) return false;
  switch (g) {
    case 1: return m1 == m2;
    case 2: return true;
    case 3: return m1 == m2 && (m1 == 1 || m1 == 2 || m1 == 4 || m1 == 8);
    case 6: return m1 == m2 && (m1 == 1 || m1 == 2);
    case 4: {
      const auto fams = enumerate_g4_families(std::max(2, m1 + m2));
      return std::any_of(fams.begin(), fams.end(),
                         [&](const FamilyRecord& f) { return f.m1 == m1 && f.m2 == m2; });
    }
    default: return false;
  }
}

int ambient_dimension(int g, int m1, int m2) {
  const int twice = g * (m1 + m2);
  if (twice % 2 != 0) throw InvalidFamilyError("g (m1 + m2) must be even");
  return twice / 2 + 2;
}

WangVerdict wang_minimizing(int g, int m1, int m2, int n) {
  if (g == 1) {
    throw InvalidFamilyError("g = 1 is refused: hyperplanes minimize in every dimension");
  }
  require(g == 2 || g == 3 || g == 4 || g == 6, "g must be in {2,3,4,6}");
  const auto is = [&](int gg, int a, int b) {
    return g == gg && ((m1 == a && m2 == b) || (m1 == b && m2 == a));
  };
  const bool ok = n >= 4 * g && !is(2, 1, 5) && !is(4, 1, 6);
  return {ok, ok};
}

}  // namespace conecert
