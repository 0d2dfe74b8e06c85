#pragma once

#include <optional>
#include <string>
#include <vector>

#include "conecert/catalog.hpp"
#include "conecert/qmodel.hpp"

namespace conecert {

/// One side of a two-block product: a uniform bound on |cos phi| along normal geodesics, and
/// the block dimension. A single great sphere has no such bound (its normal geodesics return
/// only at antipodal points), which is encoded as nullopt.
struct BlockBound {
  std::optional<double> cos_bound;
  int dim = 1;
};

enum class RadiusCase { I, IILeft, IIRight, III };

std::string to_string(RadiusCase c);

struct NormalRadiusCandidate {
  RadiusCase kase = RadiusCase::I;
  double omega_sq = 0.0;  // may be +inf
};

/// Candidate values of tan^2 of the normal radius for the product of two blocks.
/// Cases needing a cos bound from a side that has none are omitted.
std::vector<NormalRadiusCandidate> normal_radius_candidates(const BlockBound& left, const BlockBound& right);

/// (1 / (1 - k_min / (2 S)))^2 - 1
double inherited_tan_sq(int k_min, int S);

struct FoldStage {
  std::string added;  // label of the block folded in
  int S = 0;          // accumulated dimension after this stage
  int k_min = 0;
  double cos_bound = 0.0;  // inherited bound 1 - k_min / (2 S) after this stage
  std::vector<NormalRadiusCandidate> candidates;
  double candidate_min = 0.0;
  double closed_form = 0.0;
  bool dominance_ok = true;
};

struct NormalRadiusBound {
  double tan_phi_sq_lb = 0.0;  // may be +inf for an all-sphere product with two equal smallest spheres
  int k_min = 0;
  int S = 0;
  std::vector<FoldStage> ledger;
  bool dominance_ok = true;
  bool classified_externally = false;  // all factors are spheres
};

/// Left fold over the factors: focal blocks (g in {3,4,6}) in increasing dimension, then the
/// sphere factors as one block.
NormalRadiusBound product_normal_radius_lb(const std::vector<FocalDescriptor>& factors);

struct ProductSpec {
  std::vector<FocalDescriptor> factors;
  int S = 0;
  std::vector<double> weights;  // lambda_i = sqrt(k_i / S)
  double shape_sup_sq = 0.0;
  double tan_phi_sq_lb = 0.0;
  int cone_dim = 0;
  NormalRadiusBound radius;
};

/// Throws ProductError for fewer than two factors or an unsupported g.
ProductSpec minimal_product(const std::vector<FocalDescriptor>& factors);

std::string describe_factor(const FocalDescriptor& f);

/// Dimension and sup of |A|^2 over unit normals; combine() is the two-factor product.
struct ShapeBlock {
  int dim = 0;
  double sup_sq = 0.0;

  static ShapeBlock of(const FocalDescriptor& f);
  friend ShapeBlock combine(const ShapeBlock& a, const ShapeBlock& b);
};

/// Shape operator of the product in the direction eta_0 = (mu x, -lambda y).
Spectrum euler_normal_shape(int k1, int k2);

/// Shape operator of the two-factor product in the unit normal
/// c0 eta_0 + c1 (xi_1, 0) + c2 (0, xi_2), where xi_i have the factor spectra.
Spectrum product_shape_operator(double c0, double c1, double c2, const Spectrum& f1, const Spectrum& f2);

/// 4ab/(a-b)^2 > min{((a+b)/b)^2 - 1, ((a+b)/a)^2 - 1}. Throws for a == b or non-positive input.
bool pair_inequality(double a, double b);

struct StrengthenedCheck {
  bool holds = false;
  bool equality = false;
};

/// For integers p != q >= 1: 4pq/(p-q)^2 >= ((p+q)/(max(p,q)-1))^2 - 1, in exact arithmetic.
StrengthenedCheck pair_inequality_integer(long long p, long long q);

}  // namespace conecert
