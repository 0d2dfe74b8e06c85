#include "conecert/profile_ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "conecert/errors.hpp"
#include "conecert/parallel.hpp"

namespace conecert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// The state variable is u = h - 1, which keeps D free of cancellation near t = 0:
//   D = t^2 + v (1 + t^2) - u (2 + u),  v = q^2 - 1.
struct ProfileRhs {
  const QModel& model;
  double k;
  double t_end;

  double discriminant(double t, double u) const {
    // Stage points of the final step can overshoot the domain end by an ulp.
    const double w = model.eval_minus_one(std::min(t, t_end));
    const double v = w * (2.0 + w);
    return t * t + v * (1.0 + t * t) - u * (2.0 + u);
  }

  double derivative(double t, double u, double disc) const {
    const double root = disc > 0.0 ? std::sqrt(disc) : 0.0;
    return k * (t * (1.0 + u) - root) / (1.0 + t * t);
  }

  double operator()(double t, double u) const { return derivative(t, u, discriminant(t, u)); }
};

struct StepResult {
  double u;
  double err;
};

// Dormand-Prince 5(4); the 5th-order solution is propagated.
StepResult dopri_step(const ProfileRhs& f, double t, double u, double dt) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double k1 = f(t, u);
  const double k2 = f(t + c2 * dt, u + dt * (a21 * k1));
  const double k3 = f(t + c3 * dt, u + dt * (a31 * k1 + a32 * k2));
  const double k4 = f(t + c4 * dt, u + dt * (a41 * k1 + a42 * k2 + a43 * k3));
  const double k5 = f(t + c5 * dt, u + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const double k6 = f(t + dt, u + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  const double u5 = u + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const double k7 = f(t + dt, u5);
  const double err = dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  return {u5, std::abs(err)};
}

// Taylor start h = 1 + a t^2 + b t^3 + c t^4 on the fastest-vanishing branch.
struct SeriesStart {
  double a, b, c;
  double eval(double t) const { return t * t * (a + t * (b + t * c)); }
};

std::optional<SeriesStart> series_start(const QModel& model, double k) {
  const auto q = model.taylor();
  const double q2 = q[2], q3 = q[3], q4 = q[4];
  double disc = (k - 2.0) * (k - 2.0) + 8.0 * q2;
  if (disc < 0.0) {
    if (disc < -1e-12 * std::max(1.0, (k - 2.0) * (k - 2.0))) return std::nullopt;
    disc = 0.0;
  }
  const double r = std::sqrt(disc);
  SeriesStart s{};
  s.a = -k * (k - 2.0 + r) / 4.0;
  s.b = -2.0 * k * q3 / (k + 3.0 * r);
  const double rhs = 2.0 * q4 + q2 * q2 - s.a * s.a * (k - 2.0) * (k - 2.0) / (k * k) - 9.0 * s.b * s.b / (k * k);
  s.c = rhs * k * k / (-2.0 * k * (k + 2.0 * r));
  return s;
}

}  // namespace

ProfileSettings ProfileSettings::halved() const {
  ProfileSettings s = *this;
  s.abs_tol /= 2;
  s.max_step /= 2;
  s.start_t /= 2;
  s.event_tol /= 2;
  s.zero_tol /= 2;
  return s;
}

ProfileSettings settings_from_environment(ProfileSettings base) {
  if (const char* env = std::getenv("CONE_CERTIFY_TOL")) {
    char* stop = nullptr;
    const double tol = std::strtod(env, &stop);
    if (stop != env && std::isfinite(tol) && tol > 0.0 && tol < base.abs_tol) base.abs_tol = tol;
  }
  return base;
}

std::string to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::DiscriminantNegative: return "DiscriminantNegative";
    case FailureReason::DomainEndReached: return "DomainEndReached";
    case FailureReason::ProfileStagnant: return "ProfileStagnant";
  }
  return "unknown";
}

std::string to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::Exact: return "exact";
    case Strategy::FBound: return "F";
    case Strategy::ExpBound: return "exp";
    case Strategy::Chain: return "chain";
  }
  return "unknown";
}

VanishingAngleResult solve_profile(const QModel& model, int k, const ProfileSettings& settings) {
  if (k < 2) throw std::invalid_argument("cone dimension k must be >= 2");

  VanishingAngleResult result;
  if (settings.record_trace) result.trace.push_back({0.0, 1.0});

  if (model.is_flat()) {
    // q == 1: the lower branch keeps h' == 0, so the profile never leaves 1.
    result.outcome = NoVanishing{FailureReason::ProfileStagnant, 0.0};
    return result;
  }

  const auto series = series_start(model, k);
  if (!series) {
    result.outcome = NoVanishing{FailureReason::DiscriminantNegative, 0.0};
    return result;
  }

  const double t_end = std::min(model.domain_end(), settings.t_cap);
  const ProfileRhs rhs{model, static_cast<double>(k), t_end};
  double t = std::min(settings.start_t, 0.01 * t_end);
  double u = series->eval(t);

  const auto record = [&](double tt, double uu) {
    const double w = model.eval_minus_one(std::min(tt, t_end));
    const double q = 1.0 + w;
    const double h = 1.0 + uu;
    const double hp = rhs(tt, uu);
    const double lhs_a = h - tt * hp / k;
    const double lhs_b = hp / k;
    const double residual = std::abs(lhs_a * lhs_a + lhs_b * lhs_b - q * q);
    result.max_residual = std::max(result.max_residual, residual);
    result.max_envelope_excess =
        std::max(result.max_envelope_excess, h - std::sqrt(1.0 + tt * tt) * q);
    if (settings.record_trace) result.trace.push_back({tt, h});
  };

  if (rhs.discriminant(t, u) < 0.0) {
    result.outcome = NoVanishing{FailureReason::DiscriminantNegative, t};
    return result;
  }
  result.max_envelope_excess = -kInf;
  record(t, u);

  // Single step of size tau from the current accepted state.
  const auto advance = [&](double tau) { return dopri_step(rhs, t, u, tau).u; };

  const auto locate_zero = [&](double hi) -> Vanishes {
    double lo = 0.0;
    double best_tau = hi;
    double best_h = 1.0 + advance(hi);
    for (int it = 0; it < 200 && std::abs(best_h) > settings.zero_tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double h_mid = 1.0 + advance(mid);
      best_tau = mid;
      best_h = h_mid;
      if (h_mid > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (hi - lo <= std::numeric_limits<double>::epsilon() * std::max(1.0, t)) break;
    }
    const double t_star = t + best_tau;
    return Vanishes{std::atan(t_star), t_star, best_h};
  };

  const auto locate_discriminant = [&](double hi) {
    double lo = 0.0;
    while (hi - lo > settings.event_tol) {
      const double mid = 0.5 * (lo + hi);
      if (rhs.discriminant(t + mid, advance(mid)) >= 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  };

  double dt = std::min(settings.max_step, t);
  for (std::size_t steps = 0;; ++steps) {
    if (steps >= settings.max_steps) throw IntegrationError("step budget exhausted", t);
    const double remaining = t_end - t;
    if (remaining <= 0.0) {
      result.outcome = NoVanishing{FailureReason::DomainEndReached, t_end};
      return result;
    }
    dt = std::min({dt, settings.max_step, remaining});

    const StepResult step = dopri_step(rhs, t, u, dt);
    if (!std::isfinite(step.u) || !std::isfinite(step.err)) {
      if (dt < 1e-15) throw IntegrationError("non-finite profile state", t);
      dt *= 0.25;
      continue;
    }
    // Near the singular start u is O(t^2), so the error budget scales with |u|.
    const double tol = settings.abs_tol * std::clamp(std::abs(u), 1e-6, 1.0);
    if (step.err > tol) {
      dt *= std::max(0.1, 0.9 * std::pow(tol / step.err, 0.2));
      if (dt < 1e-15 * std::max(1.0, t)) {
        // The step size collapses only against the sqrt singularity at D = 0.
        result.outcome = NoVanishing{FailureReason::DiscriminantNegative, t};
        return result;
      }
      continue;
    }

    const double t_new = std::min(t + dt, t_end);
    const double h_new = 1.0 + step.u;
    const double disc_new = rhs.discriminant(t_new, step.u);

    if (h_new <= settings.zero_tol) {
      const Vanishes hit = locate_zero(dt);
      if (rhs.discriminant(hit.t_star, hit.h_at_star - 1.0) >= 0.0) {
        result.outcome = hit;
        if (settings.record_trace) result.trace.push_back({hit.t_star, hit.h_at_star});
        return result;
      }
      result.outcome = NoVanishing{FailureReason::DiscriminantNegative, t + locate_discriminant(dt)};
      return result;
    }
    if (disc_new < 0.0) {
      result.outcome = NoVanishing{FailureReason::DiscriminantNegative, t + locate_discriminant(dt)};
      return result;
    }

    t = t_new;
    u = step.u;
    ++result.accepted_steps;
    record(t, u);

    const double grow = step.err > 0.0 ? 0.9 * std::pow(tol / step.err, 0.2) : 5.0;
    dt *= std::clamp(grow, 1.0, 5.0);
  }
}

double chain_bound(int ell, double alpha_ell, int base_k, double base_alpha, double base_tan) {
  if (ell <= base_k) throw ChainHypothesisError("scaling hypothesis fails: need ell > base_k");
  const double scaled = static_cast<double>(ell) / base_k * base_alpha;
  if (alpha_ell > scaled * (1.0 + 1e-12)) {
    throw ChainHypothesisError("scaling hypothesis fails: alpha exceeds (ell/k) * base_alpha");
  }
  if (!(base_tan > 0.0)) throw ChainHypothesisError("scaling hypothesis fails: base tangent must be positive");
  return static_cast<double>(base_k) / ell * base_tan;
}

const StrategyAttempt* ThetaBound::winning_attempt() const {
  if (!strategy) return nullptr;
  for (const auto& a : attempts) {
    if (a.strategy == *strategy && a.theta && raw_theta && *a.theta == *raw_theta) return &a;
  }
  return nullptr;
}

namespace {

std::string describe(const VanishingAngleResult& r) {
  std::ostringstream os;
  os.precision(10);
  if (const auto* v = r.vanishing()) {
    os << "vanishes at t=" << v->t_star;
  } else {
    const auto* f = r.failure();
    os << to_string(f->reason) << " at t=" << f->t;
  }
  return os.str();
}

}  // namespace

ThetaBound theta_upper_bound(int k, double alpha_sq, const std::optional<Spectrum>& spectrum,
                             ModelChoice choice, const ProfileSettings& settings) {
  if (k < 2) throw std::invalid_argument("cone dimension k must be >= 2");
  if (!(alpha_sq >= 0.0) || !std::isfinite(alpha_sq)) throw std::invalid_argument("alpha^2 must be finite and >= 0");
  if (spectrum && std::abs(spectrum->alpha_sq() - alpha_sq) > 1e-9 * std::max(1.0, alpha_sq)) {
    throw std::invalid_argument("alpha^2 does not match the supplied spectrum");
  }
  if (choice == ModelChoice::Exact && !spectrum) {
    throw std::invalid_argument("the exact model needs a spectrum");
  }

  const double alpha = std::sqrt(alpha_sq);
  ThetaBound bound;
  const auto run = [&](Strategy strategy, const QModel& model) {
    auto solved = solve_profile(model, k, settings);
    StrategyAttempt attempt{strategy, std::nullopt, describe(solved), std::nullopt};
    if (const auto* v = solved.vanishing()) attempt.theta = v->theta;
    attempt.solve = std::move(solved);
    bound.attempts.push_back(std::move(attempt));
  };

  const bool any = choice == ModelChoice::Auto;
  if (spectrum && (any || choice == ModelChoice::Exact)) run(Strategy::Exact, QModel::exact(*spectrum));
  if ((any || choice == ModelChoice::FBound) && k >= 3) run(Strategy::FBound, QModel::f_bound(alpha, k - 1));
  if (any || choice == ModelChoice::ExpBound) {
    run(Strategy::ExpBound, QModel::exp_bound(alpha));

    const double base_alpha = std::sqrt(kChainBaseAlphaSq);
    if (k > kChainBaseDim && alpha > 0.0 &&
        alpha <= static_cast<double>(k) / kChainBaseDim * base_alpha) {
      const auto base = solve_profile(QModel::exp_bound(base_alpha), kChainBaseDim, settings);
      StrategyAttempt attempt{Strategy::Chain, std::nullopt, {}, std::nullopt};
      if (const auto* v = base.vanishing()) {
        const double tan_bound = chain_bound(k, alpha, kChainBaseDim, base_alpha, v->t_star);
        attempt.theta = std::atan(tan_bound);
        std::ostringstream os;
        os.precision(10);
        os << "tan <= (12/" << k << ") * " << v->t_star;
        attempt.detail = os.str();
      } else {
        attempt.detail = "base case did not vanish";
      }
      bound.attempts.push_back(std::move(attempt));
    }
  }

  for (const auto& a : bound.attempts) {
    if (a.theta && (!bound.raw_theta || *a.theta < *bound.raw_theta)) {
      bound.raw_theta = a.theta;
      bound.strategy = a.strategy;
    }
  }
  if (bound.raw_theta) bound.theta = *bound.raw_theta + kThetaPadding;
  return bound;
}

AngleTable generate_angle_table(std::span<const int> dims, std::span<const double> alpha_sqs,
                                const ProfileSettings& settings, unsigned jobs) {
  if (dims.empty() || alpha_sqs.empty()) throw std::invalid_argument("angle table needs dimensions and alpha^2 values");
  AngleTable table;
  table.dims.assign(dims.begin(), dims.end());
  table.alpha_sqs.assign(alpha_sqs.begin(), alpha_sqs.end());
  table.cells.resize(dims.size() * alpha_sqs.size());

  parallel_for(table.cells.size(), jobs, [&](std::size_t i) {
    const std::size_t row = i / dims.size();
    const std::size_t col = i % dims.size();
    const int k = dims[col];
    const ModelChoice choice = k == kChainBaseDim ? ModelChoice::ExpBound : ModelChoice::Auto;
    const auto bound = theta_upper_bound(k, alpha_sqs[row], std::nullopt, choice, settings);
    if (bound.theta) table.cells[i] = {to_degrees(*bound.theta), bound.strategy};
  });
  return table;
}

}  // namespace conecert
