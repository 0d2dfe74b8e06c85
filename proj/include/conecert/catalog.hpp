#pragma once

#include <string>
#include <vector>

#include "conecert/qmodel.hpp"

namespace conecert {

enum class Side { Plus, Minus };

std::string to_string(Side side);
Side parse_side(const std::string& text);

/// Dimensional and spectral data of one focal submanifold.
///
/// For g = 2 the focal submanifolds are great spheres S^m1 (plus) and S^m2 (minus).
struct FocalDescriptor {
  int g = 4;
  int m1 = 1;
  int m2 = 1;
  Side side = Side::Plus;
  int dim = 0;
  Spectrum spectrum;
  double alpha_sq = 0.0;
  int cone_dim = 1;
  bool admissible = false;  // parameters occur in the classification
};

/// Throws InvalidFamilyError for g outside {2,3,4,6}, m < 1, or m1 != m2 when g is 3 or 6.
FocalDescriptor focal_descriptor(int g, int m1, int m2, Side side);

/// The great sphere S^l viewed as a g = 2 focal submanifold.
FocalDescriptor sphere_factor(int l);

/// Radon-Hurwitz numbers: delta(1..8) = 1,2,4,4,8,8,8,8 and delta(m+8) = 16 delta(m).
long long clifford_delta(int m);

enum class Provenance { OtFkm, HomogeneousExceptional, LowG };

std::string to_string(Provenance p);

struct FamilyRecord {
  int g = 4;
  int m1 = 1;
  int m2 = 1;
  Provenance provenance = Provenance::OtFkm;
};

/// All g = 4 multiplicity pairs with m1 + m2 <= max_sum, sorted and deduplicated. A pair that
/// is both OT-FKM and one of (2,2), (4,5) keeps the OT-FKM tag.
std::vector<FamilyRecord> enumerate_g4_families(int max_sum);

/// Families with g in {3,6} (m1 = m2) and g = 2 pairs up to the given sum.
std::vector<FamilyRecord> enumerate_low_g_families(int max_sum);

bool is_admissible(int g, int m1, int m2);

/// Ambient n for the isoparametric hypersurface in S^{n-1}.
int ambient_dimension(int g, int m1, int m2);

struct WangVerdict {
  bool minimizing = false;
  bool strictly_minimizing = false;
};

/// Hypercone over a minimal isoparametric hypersurface: minimizing iff n >= 4g and
/// (g, m1, m2) is not (2,1,5) or (4,1,6) up to swapping m1, m2. g = 1 is refused.
WangVerdict wang_minimizing(int g, int m1, int m2, int n);

}  // namespace conecert
