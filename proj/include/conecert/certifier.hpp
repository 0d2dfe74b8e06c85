#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "conecert/catalog.hpp"
#include "conecert/products.hpp"
#include "conecert/profile_ode.hpp"

namespace conecert {

inline constexpr double kSoundnessMargin = 1e-6;  // radians

enum class Verdict { Minimizing, Inconclusive };
enum class Condition { ThetaBelowThreshold, TwoThetaBelowPhi };

std::string to_string(Verdict v);
std::string to_string(Condition c);

struct UnionSubject {
  int g = 4;
  int m1 = 1;
  int m2 = 1;
};

struct Certificate {
  std::variant<FocalDescriptor, UnionSubject, ProductSpec> subject;
  int cone_dim = 0;
  double alpha_sq_used = 0.0;
  std::string q_model_used;
  std::optional<double> theta0_upper;  // radians
  double threshold = 0.0;              // radians; the normal-radius lower bound for products
  Condition condition = Condition::ThetaBelowThreshold;
  Verdict verdict = Verdict::Inconclusive;
  double margin = 0.0;  // radians; threshold - theta0 or phi - 2 theta0
  std::optional<double> tan_phi_sq_lb;
  std::vector<std::string> notes;
  std::vector<Certificate> components;  // the two sides of a union

  bool minimizing() const { return verdict == Verdict::Minimizing; }
};

/// pi/4 for g = 4, pi/6 for g in {3, 6}.
double focal_threshold(int g);

Certificate certify_focal_cone(int g, int m1, int m2, Side side, const ProfileSettings& settings = {});
Certificate certify_focal_union(int g, int m1, int m2, const ProfileSettings& settings = {});
Certificate certify_product(const std::vector<FocalDescriptor>& factors, const ProfileSettings& settings = {});

/// Recomputes margin and verdict from the certificate's own numbers.
bool recheck_fields(const Certificate& cert, std::string* why = nullptr);

/// Re-derives the certificate from its subject and compares it with the stored one.
bool recheck(const Certificate& cert, const ProfileSettings& settings = {}, std::string* why = nullptr);

struct ClosedFormChecks {
  bool chain_holds = false;
  bool poly_holds = false;
};

/// Sign of (k1 S - k1^2/4)[(S+1)^2 - (12 c)^2]^2 - (S - k1/2)^2 [24 (S+1) c]^2 with c = 0.1683,
/// evaluated exactly.
bool product_polynomial_positive(long long S, long long k1);

/// chain_holds needs k1 >= 4 and S >= 8.
ClosedFormChecks closed_form_checks(int S, int k1);

struct SweepEntry {
  FamilyRecord family;
  Certificate plus;
  Certificate minus;
};

/// Certifies both sides of every g = 4 family with m1 + m2 <= max_sum.
std::vector<SweepEntry> g4_family_sweep(int max_sum, const ProfileSettings& settings = {}, unsigned jobs = 1);

struct ClaimCheck {
  std::string label;
  double computed = 0.0;
  double bound = 0.0;
  double margin = 0.0;
  bool passed = false;
};

struct ClaimRecord {
  std::string id;
  std::string statement;
  std::vector<ClaimCheck> checks;
  bool passed = false;
  std::string detail;
};

struct ClaimReport {
  std::vector<ClaimRecord> claims;
  bool passed = false;
};

ClaimReport verify_claims(const ProfileSettings& settings = {}, unsigned jobs = 1);

}  // namespace conecert
