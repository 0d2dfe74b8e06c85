#pragma once

#include <array>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace conecert {

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double to_degrees(double rad) { return rad * 180.0 / kPi; }
inline constexpr double to_radians(double deg) { return deg * kPi / 180.0; }

struct SpectrumEntry {
  double eigenvalue = 0.0;
  int multiplicity = 1;

  friend bool operator==(const SpectrumEntry&, const SpectrumEntry&) = default;
};

/// Principal curvatures of a shape operator, stored as an eigenvalue multiset.
///
/// For focal submanifolds of isoparametric foliations the multiset is the same for
/// every unit normal, so it fully determines inf_nu det(I - t A_nu).
class Spectrum {
 public:
  Spectrum() = default;
  explicit Spectrum(std::vector<SpectrumEntry> entries);

  static Spectrum zeros(int dimension);

  const std::vector<SpectrumEntry>& entries() const noexcept { return entries_; }
  int dimension() const noexcept;
  double trace() const noexcept;
  /// Sum of multiplicity * eigenvalue^2, i.e. the squared Hilbert-Schmidt norm.
  double alpha_sq() const noexcept;
  bool is_zero() const noexcept;
  bool is_trace_free(double tol = 1e-9) const noexcept;
  double max_eigenvalue() const noexcept;

  /// prod (1 - lambda t)^m
  double determinant(double t) const;
  /// det(I - tA) - 1, accurate for small t.
  double determinant_minus_one(double t) const;
  /// Coefficients c_0..c_order of det(I - tA) as a polynomial in t.
  std::vector<double> det_coefficients(int order) const;

 private:
  std::vector<SpectrumEntry> entries_;
};

double alpha_sq(const Spectrum& spectrum);

/// Parses "1x2,-1x2,0x1" (eigenvalue x multiplicity, comma separated).
Spectrum parse_spectrum(std::string_view text);
std::string format_spectrum(const Spectrum& spectrum);

struct ExactSpectrumModel {
  Spectrum spectrum;
};
struct FBoundModel {
  double alpha = 0.0;
  int ell = 2;
};
struct ExpBoundModel {
  double alpha = 0.0;
};

/// A lower bound q(t) for inf_nu det(I - t h^nu).
class QModel {
 public:
  using Variant = std::variant<ExactSpectrumModel, FBoundModel, ExpBoundModel>;

  static QModel exact(Spectrum spectrum);
  static QModel f_bound(double alpha, int ell);
  static QModel exp_bound(double alpha);

  const Variant& variant() const noexcept { return model_; }
  std::string tag() const;
  double alpha() const;
  bool is_flat() const;

  double domain_end() const;
  double eval(double t) const;
  /// q(t) - 1 without cancellation near t = 0. Same domain rules as eval().
  double eval_minus_one(double t) const;

  /// Taylor coefficients q_0..q_4 at t = 0.
  std::array<double, 5> taylor() const;
  /// Second-order coefficient; diagnostic only.
  double q2() const { return taylor()[2]; }

 private:
  explicit QModel(Variant model) : model_(std::move(model)) {}
  void check_domain(double t) const;

  Variant model_;
};

double f_bound_value(double alpha, double t, int ell);
double exp_bound_value(double alpha, double t);

double eval_q(const QModel& model, double t);
double q_domain_end(const QModel& model);

/// Spectrum whose determinant reproduces F(alpha, t, ell) exactly.
Spectrum equality_spectrum(double alpha, int ell);

}  // namespace conecert
