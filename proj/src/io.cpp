#include "conecert/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "conecert/errors.hpp"

namespace conecert {

std::string fixed(double v, int decimals) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// JSON has no infinity; +inf is written as the string "inf".
Json num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

double num_from(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

Json opt(const std::optional<double>& v) { return v ? num(*v) : Json(nullptr); }

std::optional<double> opt_from(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return num_from(j);
}

Condition condition_from(const std::string& s) {
  if (s == "theta<threshold") return Condition::ThetaBelowThreshold;
  if (s == "2theta<phi") return Condition::TwoThetaBelowPhi;
  throw std::invalid_argument("unknown condition '" + s + "'");
}

Verdict verdict_from(const std::string& s) {
  if (s == "Minimizing") return Verdict::Minimizing;
  if (s == "Inconclusive") return Verdict::Inconclusive;
  throw std::invalid_argument("unknown verdict '" + s + "'");
}

std::string cell_text(const AngleCell& c) { return c.degrees ? fixed(*c.degrees, 2) : "***"; }

std::string alpha_label(double a2) {
  std::ostringstream os;
  os << a2;
  return os.str();
}

std::string pad(const std::string& s, std::size_t w, bool left = false) {
  if (s.size() >= w) return s;
  return left ? s + std::string(w - s.size(), ' ') : std::string(w - s.size(), ' ') + s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Json spectrum_to_json(const Spectrum& s) {
  Json arr = Json::array();
  for (const auto& e : s.entries()) arr.push_back(Json::array({e.eigenvalue, e.multiplicity}));
  return arr;
}

Spectrum spectrum_from_json(const Json& j) {
  std::vector<SpectrumEntry> entries;
  for (const auto& e : j) entries.push_back({e.at(0).get<double>(), e.at(1).get<int>()});
  return Spectrum(std::move(entries));
}

Json descriptor_to_json(const FocalDescriptor& d) {
  Json j;
  j["g"] = d.g;
  if (d.g == 2) {
    j["sphere"] = d.dim;
  } else {
    j["m1"] = d.m1;
    j["m2"] = d.m2;
    j["side"] = to_string(d.side);
  }
  j["dim"] = d.dim;
  j["cone_dim"] = d.cone_dim;
  j["alpha_sq"] = d.alpha_sq;
  j["spectrum"] = spectrum_to_json(d.spectrum);
  j["admissible"] = d.admissible;
  return j;
}

FocalDescriptor descriptor_from_json(const Json& j) {
  const int g = j.at("g").get<int>();
  if (g == 2 && j.contains("sphere")) return sphere_factor(j.at("sphere").get<int>());
  const Side side = j.contains("side") ? parse_side(j.at("side").get<std::string>()) : Side::Plus;
  const int m1 = j.contains("m1") ? j.at("m1").get<int>() : j.at("m").get<int>();
  const int m2 = j.contains("m2") ? j.at("m2").get<int>() : m1;
  return focal_descriptor(g, m1, m2, side);
}

Json product_to_json(const ProductSpec& p) {
  Json j;
  Json fs = Json::array();
  for (const auto& f : p.factors) fs.push_back(descriptor_to_json(f));
  j["factors"] = fs;
  j["S"] = p.S;
  j["weights"] = p.weights;
  j["shape_sup_sq"] = p.shape_sup_sq;
  j["tan_phi_sq_lb"] = num(p.tan_phi_sq_lb);
  j["cone_dim"] = p.cone_dim;
  j["k_min"] = p.radius.k_min;
  j["classified_externally"] = p.radius.classified_externally;
  j["dominance_ok"] = p.radius.dominance_ok;
  Json ledger = Json::array();
  for (const auto& st : p.radius.ledger) {
    Json s;
    s["added"] = st.added;
    s["S"] = st.S;
    s["k_min"] = st.k_min;
    s["cos_bound"] = st.cos_bound;
    Json cands = Json::array();
    for (const auto& c : st.candidates) cands.push_back({{"case", to_string(c.kase)}, {"omega_sq", num(c.omega_sq)}});
    s["candidates"] = cands;
    s["candidate_min"] = num(st.candidate_min);
    s["closed_form"] = num(st.closed_form);
    s["dominance_ok"] = st.dominance_ok;
    ledger.push_back(s);
  }
  j["ledger"] = ledger;
  return j;
}

Json theta_bound_to_json(const ThetaBound& b, int k, double alpha_sq) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["k"] = k;
  j["alpha_sq"] = alpha_sq;
  j["exists"] = b.exists();
  j["theta_rad"] = opt(b.theta);
  j["theta_raw_rad"] = opt(b.raw_theta);
  j["strategy"] = b.strategy ? Json(to_string(*b.strategy)) : Json(nullptr);
  Json attempts = Json::array();
  for (const auto& a : b.attempts) {
    Json x;
    x["strategy"] = to_string(a.strategy);
    x["theta_rad"] = opt(a.theta);
    x["detail"] = a.detail;
    if (a.solve) {
      x["max_residual"] = a.solve->max_residual;
      x["accepted_steps"] = a.solve->accepted_steps;
      if (const auto* f = a.solve->failure()) {
        x["failure"] = to_string(f->reason);
        x["t_fail"] = num(f->t);
      } else {
        x["t_star"] = a.solve->vanishing()->t_star;
      }
    }
    attempts.push_back(x);
  }
  j["attempts"] = attempts;
  return j;
}

Json certificate_to_json(const Certificate& c) {
  Json j;
  if (const auto* f = std::get_if<FocalDescriptor>(&c.subject)) {
    j["kind"] = "focal";
    j["subject"] = descriptor_to_json(*f);
  } else if (const auto* u = std::get_if<UnionSubject>(&c.subject)) {
    j["kind"] = "union";
    j["subject"] = {{"g", u->g}, {"m1", u->m1}, {"m2", u->m2}};
  } else {
    j["kind"] = "product";
    j["subject"] = product_to_json(std::get<ProductSpec>(c.subject));
  }
  j["cone_dim"] = c.cone_dim;
  j["alpha_sq_used"] = c.alpha_sq_used;
  j["q_model_used"] = c.q_model_used;
  j["theta0_upper_rad"] = opt(c.theta0_upper);
  j["threshold_rad"] = c.threshold;
  j["condition"] = to_string(c.condition);
  j["verdict"] = to_string(c.verdict);
  j["margin_rad"] = c.margin;
  j["tan_phi_sq_lb"] = opt(c.tan_phi_sq_lb);
  j["notes"] = c.notes;
  if (!c.components.empty()) {
    Json comps = Json::array();
    for (const auto& x : c.components) comps.push_back(certificate_to_json(x));
    j["components"] = comps;
  }
  return j;
}

Certificate certificate_from_json(const Json& j) {
  Certificate c;
  const auto kind = j.at("kind").get<std::string>();
  const Json& subj = j.at("subject");
  if (kind == "focal") {
    c.subject = descriptor_from_json(subj);
  } else if (kind == "union") {
    c.subject = UnionSubject{subj.at("g").get<int>(), subj.at("m1").get<int>(), subj.at("m2").get<int>()};
  } else if (kind == "product") {
    std::vector<FocalDescriptor> fs;
    for (const auto& f : subj.at("factors")) fs.push_back(descriptor_from_json(f));
    c.subject = minimal_product(fs);
  } else {
    throw std::invalid_argument("unknown certificate kind '" + kind + "'");
  }
  c.cone_dim = j.at("cone_dim").get<int>();
  c.alpha_sq_used = j.at("alpha_sq_used").get<double>();
  c.q_model_used = j.at("q_model_used").get<std::string>();
  c.theta0_upper = opt_from(j.at("theta0_upper_rad"));
  c.threshold = j.at("threshold_rad").get<double>();
  c.condition = condition_from(j.at("condition").get<std::string>());
  c.verdict = verdict_from(j.at("verdict").get<std::string>());
  c.margin = j.at("margin_rad").get<double>();
  c.tan_phi_sq_lb = opt_from(j.at("tan_phi_sq_lb"));
  c.notes = j.at("notes").get<std::vector<std::string>>();
  if (j.contains("components")) {
    for (const auto& x : j.at("components")) c.components.push_back(certificate_from_json(x));
  }
  return c;
}

Json certificates_document(const std::vector<Certificate>& certs) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  Json arr = Json::array();
  for (const auto& c : certs) arr.push_back(certificate_to_json(c));
  j["certificates"] = arr;
  return j;
}

std::vector<Certificate> certificates_from_document(const Json& j) {
  std::vector<Certificate> out;
  if (j.is_array()) {
    for (const auto& x : j) out.push_back(certificate_from_json(x));
  } else if (j.contains("certificates")) {
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion) {
      throw std::invalid_argument("unsupported schema_version");
    }
    for (const auto& x : j.at("certificates")) out.push_back(certificate_from_json(x));
  } else {
    out.push_back(certificate_from_json(j));
  }
  return out;
}

Json report_to_json(const ClaimReport& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["passed"] = r.passed;
  Json claims = Json::array();
  for (const auto& c : r.claims) {
    Json x;
    x["id"] = c.id;
    x["statement"] = c.statement;
    x["passed"] = c.passed;
    if (!c.detail.empty()) x["detail"] = c.detail;
    Json checks = Json::array();
    for (const auto& k : c.checks) {
      checks.push_back({{"label", k.label}, {"computed", num(k.computed)}, {"bound", num(k.bound)},
                        {"margin", num(k.margin)}, {"passed", k.passed}});
    }
    x["checks"] = checks;
    claims.push_back(x);
  }
  j["claims"] = claims;
  return j;
}

Json table_to_json(const AngleTable& t) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["dims"] = t.dims;
  j["alpha_sqs"] = t.alpha_sqs;
  Json rows = Json::array();
  for (std::size_t r = 0; r < t.alpha_sqs.size(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < t.dims.size(); ++c) {
      const auto& cell = t.at(r, c);
      row.push_back({{"degrees", cell.degrees ? Json(*cell.degrees) : Json(nullptr)},
                     {"strategy", cell.strategy ? Json(to_string(*cell.strategy)) : Json(nullptr)}});
    }
    rows.push_back(row);
  }
  j["cells"] = rows;
  return j;
}

Json catalog_to_json(int max_sum) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  Json fams = Json::array();
  auto add = [&](const FamilyRecord& f) {
    Json x;
    x["g"] = f.g;
    x["m1"] = f.m1;
    x["m2"] = f.m2;
    x["provenance"] = to_string(f.provenance);
    x["plus"] = descriptor_to_json(focal_descriptor(f.g, f.m1, f.m2, Side::Plus));
    x["minus"] = descriptor_to_json(focal_descriptor(f.g, f.m1, f.m2, Side::Minus));
    const int n = ambient_dimension(f.g, f.m1, f.m2);
    const auto w = wang_minimizing(f.g, f.m1, f.m2, n);
    x["hypercone"] = {{"n", n}, {"minimizing", w.minimizing}, {"strictly_minimizing", w.strictly_minimizing}};
    fams.push_back(x);
  };
  for (const auto& f : enumerate_low_g_families(max_sum)) add(f);
  for (const auto& f : enumerate_g4_families(max_sum)) add(f);
  j["families"] = fams;
  return j;
}

std::string table_to_csv(const AngleTable& t) {
  std::ostringstream os;
  os << "alpha_sq";
  for (int k : t.dims) os << ',' << k;
  os << '\n';
  for (std::size_t r = 0; r < t.alpha_sqs.size(); ++r) {
    os << alpha_label(t.alpha_sqs[r]);
    for (std::size_t c = 0; c < t.dims.size(); ++c) os << ',' << cell_text(t.at(r, c));
    os << '\n';
  }
  return os.str();
}

std::string table_to_text(const AngleTable& t) {
  std::ostringstream os;
  const std::size_t w = 8;
  os << pad("a^2 \\ k", 10, true);
  for (int k : t.dims) os << pad(std::to_string(k), w);
  os << '\n';
  for (std::size_t r = 0; r < t.alpha_sqs.size(); ++r) {
    os << pad(alpha_label(t.alpha_sqs[r]), 10, true);
    for (std::size_t c = 0; c < t.dims.size(); ++c) os << pad(cell_text(t.at(r, c)), w);
    os << '\n';
  }
  return os.str();
}

std::string certificate_to_text(const Certificate& c) {
  std::ostringstream os;
  if (const auto* f = std::get_if<FocalDescriptor>(&c.subject)) {
    os << "focal cone " << describe_factor(*f);
  } else if (const auto* u = std::get_if<UnionSubject>(&c.subject)) {
    os << "union of focal cones g=" << u->g << " (" << u->m1 << "," << u->m2 << ")";
  } else {
    const auto& p = std::get<ProductSpec>(c.subject);
    os << "product";
    for (std::size_t i = 0; i < p.factors.size(); ++i) os << (i ? " x " : " ") << describe_factor(p.factors[i]);
  }
  os << '\n';
  os << "  verdict      " << to_string(c.verdict) << '\n';
  os << "  cone_dim     " << c.cone_dim << '\n';
  os << "  alpha^2      " << fixed(c.alpha_sq_used, 6) << '\n';
  os << "  q model      " << c.q_model_used << '\n';
  os << "  theta0 <=    " << (c.theta0_upper ? fixed(to_degrees(*c.theta0_upper), 4) + " deg" : std::string("none")) << '\n';
  if (c.condition == Condition::TwoThetaBelowPhi) {
    os << "  tan^2 phi >= " << fixed(c.tan_phi_sq_lb.value_or(NAN), 6) << '\n';
    os << "  condition    2 theta0 < phi, phi >= " << fixed(to_degrees(c.threshold), 4) << " deg\n";
  } else {
    os << "  condition    theta0 < " << fixed(to_degrees(c.threshold), 4) << " deg\n";
  }
  if (c.theta0_upper) os << "  margin       " << fixed(to_degrees(c.margin), 4) << " deg\n";
  for (const auto& n : c.notes) os << "  note         " << n << '\n';
  for (const auto& comp : c.components) {
    std::istringstream lines(certificate_to_text(comp));
    for (std::string line; std::getline(lines, line);) os << "    " << line << '\n';
  }
  return os.str();
}

std::string certificates_to_csv(const std::vector<Certificate>& certs) {
  std::ostringstream os;
  os << "subject,cone_dim,alpha_sq,q_model,theta0_deg,threshold_deg,condition,verdict,margin_deg\n";
  for (const auto& c : certs) {
    std::string subject;
    if (const auto* f = std::get_if<FocalDescriptor>(&c.subject)) {
      subject = describe_factor(*f);
    } else if (const auto* u = std::get_if<UnionSubject>(&c.subject)) {
      subject = "union g=" + std::to_string(u->g) + " (" + std::to_string(u->m1) + "," + std::to_string(u->m2) + ")";
    } else {
      for (const auto& f : std::get<ProductSpec>(c.subject).factors) {
        subject += (subject.empty() ? "" : " x ") + describe_factor(f);
      }
    }
    os << csv_field(subject) << ',' << c.cone_dim << ',' << fixed(c.alpha_sq_used, 6) << ',' << c.q_model_used << ','
       << (c.theta0_upper ? fixed(to_degrees(*c.theta0_upper), 4) : "") << ',' << fixed(to_degrees(c.threshold), 4)
       << ',' << to_string(c.condition) << ',' << to_string(c.verdict) << ','
       << (c.theta0_upper ? fixed(to_degrees(c.margin), 4) : "") << '\n';
  }
  return os.str();
}

std::string report_to_text(const ClaimReport& r) {
  std::ostringstream os;
  std::size_t w = 0;
  for (const auto& c : r.claims) {
    for (const auto& k : c.checks) w = std::max(w, k.label.size());
  }
  for (const auto& c : r.claims) {
    os << (c.passed ? "PASS " : "FAIL ") << c.id << "  " << c.statement << '\n';
    for (const auto& k : c.checks) {
      os << "       " << (k.passed ? "ok   " : "FAIL ") << pad(k.label, w, true) << "  computed "
         << pad(fixed(k.computed, 6), 14) << "  bound " << pad(fixed(k.bound, 6), 12) << '\n';
    }
    if (!c.detail.empty()) os << "       " << c.detail << '\n';
  }
  os << (r.passed ? "ALL CLAIMS PASS" : "SOME CLAIMS FAIL") << '\n';
  return os.str();
}

std::string report_to_csv(const ClaimReport& r) {
  std::ostringstream os;
  os << "id,check,computed,bound,margin,passed\n";
  for (const auto& c : r.claims) {
    for (const auto& k : c.checks) {
      os << c.id << ',' << csv_field(k.label) << ',' << exact(k.computed) << ',' << exact(k.bound) << ','
         << exact(k.margin) << ',' << (k.passed ? "true" : "false") << '\n';
    }
  }
  return os.str();
}

std::string theta_bound_to_text(const ThetaBound& b, int k, double alpha_sq) {
  std::ostringstream os;
  os << "k = " << k << ", alpha^2 = " << alpha_sq << '\n';
  for (const auto& a : b.attempts) {
    os << "  " << pad(to_string(a.strategy), 6, true) << ' '
       << (a.theta ? fixed(to_degrees(*a.theta), 4) + " deg" : std::string("--")) << "  (" << a.detail << ")\n";
  }
  if (b.theta) {
    os << "theta0 <= " << fixed(to_degrees(*b.theta), 4) << " deg via " << to_string(*b.strategy) << '\n';
  } else {
    os << "no vanishing angle\n";
  }
  return os.str();
}

}  // namespace conecert
