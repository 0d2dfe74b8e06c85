#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "conecert/qmodel.hpp"

namespace conecert {

/// Integrator tolerances for the projection-profile equation.
struct ProfileSettings {
  double abs_tol = 1e-10;    // local error per accepted step, in h
  double max_step = 1e-3;    // in t = tan(theta)
  double start_t = 1e-4;     // where the series start hands over to Runge-Kutta
  double event_tol = 1e-12;  // bracket width for the discriminant event
  double zero_tol = 1e-10;   // |h| accepted as a zero of the profile
  double t_cap = 1e6;        // hard stop for models with an unbounded domain
  bool record_trace = false;
  std::size_t max_steps = 5'000'000;

  ProfileSettings halved() const;
};

/// Default settings, tightened by CONE_CERTIFY_TOL when that is smaller than abs_tol.
ProfileSettings settings_from_environment(ProfileSettings base = {});

struct Vanishes {
  double theta = 0.0;  // radians
  double t_star = 0.0;
  double h_at_star = 0.0;
};

enum class FailureReason { DiscriminantNegative, DomainEndReached, ProfileStagnant };

struct NoVanishing {
  FailureReason reason = FailureReason::ProfileStagnant;
  double t = 0.0;  // t_fail or t_end; 0 for a stagnant profile
};

struct ProfileSample {
  double t = 0.0;
  double h = 0.0;
};

struct VanishingAngleResult {
  std::variant<Vanishes, NoVanishing> outcome;
  std::vector<ProfileSample> trace;
  double max_residual = 0.0;         // |(h - t h'/k)^2 + (h'/k)^2 - q^2| over accepted steps
  double max_envelope_excess = 0.0;  // max of h - sqrt(1+t^2) q over accepted steps
  std::size_t accepted_steps = 0;

  bool vanishes() const { return std::holds_alternative<Vanishes>(outcome); }
  const Vanishes* vanishing() const { return std::get_if<Vanishes>(&outcome); }
  const NoVanishing* failure() const { return std::get_if<NoVanishing>(&outcome); }
};

std::string to_string(FailureReason reason);

/// Integrates the fastest-vanishing profile for a cone of dimension k and reports where it
/// first reaches zero.
///
/// The equality case of the projection inequality is solved for h' on its lower branch,
///   h' = k (t h - sqrt(D)) / (1 + t^2),   D = (1 + t^2) q^2 - h^2,
/// starting from h(0) = 1. t = 0 is a singular point (D = 0 there); the trajectory leaves it
/// along the unique series solution with the most negative curvature, so the first few
/// Taylor coefficients of q are needed. A negative D means no solution of the inequality can
/// reach zero.
VanishingAngleResult solve_profile(const QModel& model, int k, const ProfileSettings& settings = {});

/// Upper bound for tan(theta_c(ell, alpha_ell)) from a known tan(theta_c(base_k, base_alpha)).
double chain_bound(int ell, double alpha_ell, int base_k, double base_alpha, double base_tan);

inline constexpr int kChainBaseDim = 12;
inline constexpr double kChainBaseAlphaSq = 44.0 / 3.0;
inline constexpr double kThetaPadding = 1e-7;

enum class Strategy { Exact, FBound, ExpBound, Chain };
enum class ModelChoice { Auto, Exact, FBound, ExpBound };

std::string to_string(Strategy strategy);

struct StrategyAttempt {
  Strategy strategy = Strategy::Exact;
  std::optional<double> theta;  // radians, unpadded
  std::string detail;
  std::optional<VanishingAngleResult> solve;  // absent for the chain strategy
};

struct ThetaBound {
  std::optional<double> theta;      // radians, padded by kThetaPadding
  std::optional<double> raw_theta;  // best unpadded angle
  std::optional<Strategy> strategy;
  std::vector<StrategyAttempt> attempts;

  bool exists() const { return theta.has_value(); }
  const StrategyAttempt* winning_attempt() const;
};

/// Certified upper bound for the vanishing angle of a k-dimensional cone whose shape operators
/// have norm^2 at most alpha_sq. With ModelChoice::Auto every applicable strategy is run and
/// the smallest bound wins.
ThetaBound theta_upper_bound(int k, double alpha_sq,
                             const std::optional<Spectrum>& spectrum = std::nullopt,
                             ModelChoice choice = ModelChoice::Auto,
                             const ProfileSettings& settings = {});

struct AngleCell {
  std::optional<double> degrees;
  std::optional<Strategy> strategy;
};

/// Rows are alpha^2 values, columns are cone dimensions.
struct AngleTable {
  std::vector<int> dims;
  std::vector<double> alpha_sqs;
  std::vector<AngleCell> cells;  // row-major

  const AngleCell& at(std::size_t row, std::size_t col) const { return cells.at(row * dims.size() + col); }
};

/// The dimension-12 column always uses the exponential bound; other columns use Auto.
AngleTable generate_angle_table(std::span<const int> dims, std::span<const double> alpha_sqs,
                                const ProfileSettings& settings = {}, unsigned jobs = 1);

}  // namespace conecert
