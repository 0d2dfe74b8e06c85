#include "conecert/qmodel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "conecert/errors.hpp"

namespace conecert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe_domain(double t, double end) {
  std::ostringstream os;
  os.precision(17);
  os << "beyond domain end: t=" << t << " > " << end;
  return os.str();
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

DomainError::DomainError(double t, double end)
    : std::domain_error(describe_domain(t, end)), t_(t), end_(end) {}

// ---------------------------------------------------------------------------
// Spectrum

Spectrum::Spectrum(std::vector<SpectrumEntry> entries) : entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.multiplicity <= 0) throw std::invalid_argument("spectrum multiplicity must be positive");
    if (!std::isfinite(e.eigenvalue)) throw std::invalid_argument("spectrum eigenvalue must be finite");
  }
}

Spectrum Spectrum::zeros(int dimension) {
  if (dimension < 0) throw std::invalid_argument("negative dimension");
  if (dimension == 0) return Spectrum{};
  return Spectrum({{0.0, dimension}});
}

int Spectrum::dimension() const noexcept {
  int d = 0;
  for (const auto& e : entries_) d += e.multiplicity;
  return d;
}

double Spectrum::trace() const noexcept {
  double s = 0.0;
  for (const auto& e : entries_) s += e.multiplicity * e.eigenvalue;
  return s;
}

double Spectrum::alpha_sq() const noexcept {
  double s = 0.0;
  for (const auto& e : entries_) s += e.multiplicity * e.eigenvalue * e.eigenvalue;
  return s;
}

bool Spectrum::is_zero() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](const SpectrumEntry& e) { return e.eigenvalue == 0.0; });
}

bool Spectrum::is_trace_free(double tol) const noexcept {
  double scale = 1.0;
  for (const auto& e : entries_) scale += e.multiplicity * std::abs(e.eigenvalue);
  return std::abs(trace()) <= tol * scale;
}

double Spectrum::max_eigenvalue() const noexcept {
  double m = entries_.empty() ? 0.0 : -kInf;
  for (const auto& e : entries_) m = std::max(m, e.eigenvalue);
  return m;
}

double Spectrum::determinant(double t) const {
  double d = 1.0;
  for (const auto& e : entries_) d *= std::pow(1.0 - e.eigenvalue * t, e.multiplicity);
  return d;
}

double Spectrum::determinant_minus_one(double t) const {
  double log_sum = 0.0;
  for (const auto& e : entries_) {
    const double x = -e.eigenvalue * t;
    if (x <= -1.0) return determinant(t) - 1.0;
    log_sum += e.multiplicity * std::log1p(x);
  }
  return std::expm1(log_sum);
}

std::vector<double> Spectrum::det_coefficients(int order) const {
  // Newton's identities: elementary symmetric polynomials from power sums.
  std::vector<double> power(order + 1, 0.0);
  for (int j = 1; j <= order; ++j) {
    for (const auto& e : entries_) power[j] += e.multiplicity * std::pow(e.eigenvalue, j);
  }
  std::vector<double> elem(order + 1, 0.0);
  elem[0] = 1.0;
  for (int n = 1; n <= order; ++n) {
    double s = 0.0;
    for (int i = 1; i <= n; ++i) s += ((i % 2 == 1) ? 1.0 : -1.0) * elem[n - i] * power[i];
    elem[n] = s / n;
  }
  std::vector<double> coeff(order + 1);
  for (int n = 0; n <= order; ++n) coeff[n] = (n % 2 == 0 ? 1.0 : -1.0) * elem[n];
  return coeff;
}

double alpha_sq(const Spectrum& spectrum) { return spectrum.alpha_sq(); }

Spectrum parse_spectrum(std::string_view text) {
  std::vector<SpectrumEntry> entries;
  std::size_t pos = 0;
  const auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  if (pos == text.size()) return Spectrum{};
  while (true) {
    skip_ws();
    const std::size_t start = pos;
    const std::size_t end = std::min(text.find(',', pos), text.size());
    std::string item(text.substr(start, end - start));
    const auto sep = item.find_first_of("xX*");
    if (sep == std::string::npos) throw ParseError("expected <eigenvalue>x<multiplicity>", start);

    const std::string value_text = item.substr(0, sep);
    const std::string mult_text = item.substr(sep + 1);
    char* stop = nullptr;
    const double value = std::strtod(value_text.c_str(), &stop);
    if (value_text.empty() || stop == value_text.c_str() ||
        std::string_view(stop).find_first_not_of(" \t") != std::string_view::npos) {
      throw ParseError("invalid eigenvalue '" + value_text + "'", start);
    }
    const long mult = std::strtol(mult_text.c_str(), &stop, 10);
    if (mult_text.empty() || stop == mult_text.c_str() ||
        std::string_view(stop).find_first_not_of(" \t") != std::string_view::npos || mult <= 0) {
      throw ParseError("invalid multiplicity '" + mult_text + "'", start + sep + 1);
    }
    entries.push_back({value, static_cast<int>(mult)});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return Spectrum(std::move(entries));
}

std::string format_spectrum(const Spectrum& spectrum) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& e : spectrum.entries()) {
    if (!first) os << ',';
    os << e.eigenvalue << 'x' << e.multiplicity;
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// QModel

QModel QModel::exact(Spectrum spectrum) {
  if (!spectrum.is_trace_free()) {
    throw std::invalid_argument("spectrum is not trace-free (trace " +
                                std::to_string(spectrum.trace()) + ")");
  }
  return QModel(ExactSpectrumModel{std::move(spectrum)});
}

QModel QModel::f_bound(double alpha, int ell) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite and >= 0");
  if (ell < 2) throw std::invalid_argument("F-bound requires ell >= 2");
  return QModel(FBoundModel{alpha, ell});
}

QModel QModel::exp_bound(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite and >= 0");
  return QModel(ExpBoundModel{alpha});
}

std::string QModel::tag() const {
  struct V {
    std::string operator()(const ExactSpectrumModel&) const { return "exact"; }
    std::string operator()(const FBoundModel&) const { return "F"; }
    std::string operator()(const ExpBoundModel&) const { return "exp"; }
  };
  return std::visit(V{}, model_);
}

double QModel::alpha() const {
  struct V {
    double operator()(const ExactSpectrumModel& m) const { return std::sqrt(m.spectrum.alpha_sq()); }
    double operator()(const FBoundModel& m) const { return m.alpha; }
    double operator()(const ExpBoundModel& m) const { return m.alpha; }
  };
  return std::visit(V{}, model_);
}

bool QModel::is_flat() const {
  if (const auto* m = std::get_if<ExactSpectrumModel>(&model_)) return m->spectrum.is_zero();
  return alpha() == 0.0;
}

double QModel::domain_end() const {
  struct V {
    double operator()(const ExactSpectrumModel& m) const {
      const double top = m.spectrum.max_eigenvalue();
      return top > 0.0 ? 1.0 / top : kInf;
    }
    double operator()(const FBoundModel& m) const {
      if (m.alpha == 0.0) return kInf;
      return std::sqrt(static_cast<double>(m.ell) / (m.ell - 1)) / m.alpha;
    }
    double operator()(const ExpBoundModel& m) const { return m.alpha == 0.0 ? kInf : 1.0 / m.alpha; }
  };
  return std::visit(V{}, model_);
}

void QModel::check_domain(double t) const {
  const double end = domain_end();
  if (!(t >= 0.0) || t > end) throw DomainError(t, end);
}

double QModel::eval(double t) const {
  check_domain(t);
  if (t == 0.0) return 1.0;
  struct V {
    double t;
    double operator()(const ExactSpectrumModel& m) const { return m.spectrum.determinant(t); }
    double operator()(const FBoundModel& m) const { return f_bound_value(m.alpha, t, m.ell); }
    double operator()(const ExpBoundModel& m) const { return exp_bound_value(m.alpha, t); }
  };
  return std::visit(V{t}, model_);
}

double QModel::eval_minus_one(double t) const {
  check_domain(t);
  if (t == 0.0) return 0.0;
  struct V {
    double t;
    double operator()(const ExactSpectrumModel& m) const { return m.spectrum.determinant_minus_one(t); }
    double operator()(const FBoundModel& m) const {
      const double l = m.ell;
      const double x1 = m.alpha * t * std::sqrt((l - 1.0) / l);
      const double x2 = m.alpha * t / std::sqrt(l * (l - 1.0));
      if (x1 >= 1.0) return f_bound_value(m.alpha, t, m.ell) - 1.0;
      return std::expm1(std::log1p(-x1) + (l - 1.0) * std::log1p(x2));
    }
    double operator()(const ExpBoundModel& m) const {
      const double x = m.alpha * t;
      if (x >= 1.0) return exp_bound_value(m.alpha, t) - 1.0;
      return std::expm1(std::log1p(-x) + x);
    }
  };
  return std::visit(V{t}, model_);
}

std::array<double, 5> QModel::taylor() const {
  std::array<double, 5> c{};
  struct V {
    std::array<double, 5>& c;
    void from(const Spectrum& s) const {
      const auto d = s.det_coefficients(4);
      for (int i = 0; i <= 4; ++i) c[i] = d[i];
    }
    void operator()(const ExactSpectrumModel& m) const { from(m.spectrum); }
    void operator()(const FBoundModel& m) const {
      if (m.alpha == 0.0) {
        c = {1.0, 0.0, 0.0, 0.0, 0.0};
        return;
      }
      from(equality_spectrum(m.alpha, m.ell));
    }
    void operator()(const ExpBoundModel& m) const {
      // (1 - x) e^x = sum (1 - n) x^n / n!
      for (int n = 0; n <= 4; ++n) c[n] = (1.0 - n) * std::pow(m.alpha, n) / factorial(n);
    }
  };
  std::visit(V{c}, model_);
  return c;
}

double f_bound_value(double alpha, double t, int ell) {
  const double l = ell;
  const double first = 1.0 - alpha * t * std::sqrt((l - 1.0) / l);
  const double second = 1.0 + alpha * t / std::sqrt(l * (l - 1.0));
  return first * std::pow(second, ell - 1);
}

double exp_bound_value(double alpha, double t) {
  const double x = alpha * t;
  return (1.0 - x) * std::exp(x);
}

double eval_q(const QModel& model, double t) { return model.eval(t); }

double q_domain_end(const QModel& model) { return model.domain_end(); }

Spectrum equality_spectrum(double alpha, int ell) {
  if (!(alpha > 0.0)) throw std::invalid_argument("equality_spectrum requires alpha > 0");
  if (ell < 2) throw std::invalid_argument("equality_spectrum requires ell >= 2");
  const double l = ell;
  // One large positive curvature balanced by ell-1 equal negative ones.
  return Spectrum({{alpha * std::sqrt((l - 1.0) / l), 1},
                   {-alpha / std::sqrt(l * (l - 1.0)), ell - 1}});
}

}  // namespace conecert
