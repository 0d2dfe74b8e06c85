#include "conecert/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "conecert/certifier.hpp"
#include "conecert/errors.hpp"
#include "conecert/io.hpp"

namespace conecert::cli {

namespace {

enum class Format { Text, Json, Csv };

struct Common {
  std::string format = "text";
  std::string out_path;
  unsigned jobs = 0;

  Format fmt() const {
    if (format == "json") return Format::Json;
    if (format == "csv") return Format::Csv;
    return Format::Text;
  }
  unsigned workers() const { return jobs ? jobs : std::max(1u, std::thread::hardware_concurrency()); }
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    const int v = std::stoi(item, &used);
    if (item.find_first_not_of(" \t", used) != std::string::npos) throw UsageError("bad integer '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto slash = item.find('/');
    std::size_t used = 0;
    if (slash != std::string::npos) {
      out.push_back(std::stod(item.substr(0, slash)) / std::stod(item.substr(slash + 1)));
    } else {
      out.push_back(std::stod(item, &used));
    }
  }
  if (out.empty()) throw UsageError("empty list");
  return out;
}

ModelChoice parse_model(const std::string& m) {
  if (m == "auto") return ModelChoice::Auto;
  if (m == "exact") return ModelChoice::Exact;
  if (m == "F") return ModelChoice::FBound;
  if (m == "exp") return ModelChoice::ExpBound;
  throw UsageError("--model must be exact|F|exp|auto");
}

int exit_for(const std::vector<Certificate>& certs) {
  for (const auto& c : certs) {
    if (!c.minimizing()) return 1;
  }
  return 0;
}

std::string render(const std::vector<Certificate>& certs, Format f) {
  if (f == Format::Json) return certificates_document(certs).dump(2) + "\n";
  if (f == Format::Csv) return certificates_to_csv(certs);
  std::string s;
  for (const auto& c : certs) s += certificate_to_text(c);
  return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature-criterion certificates for cones over focal submanifolds and their products", "cone_certify"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--format", common.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--out", common.out_path, "Write output to this file");
  app.add_option("--jobs", common.jobs, "Worker threads (0 = hardware)");

  // angle
  auto* angle = app.add_subcommand("angle", "Vanishing-angle upper bound for (dim, alpha^2)");
  int a_dim = 0;
  std::optional<double> a_alpha2;
  std::string a_model = "auto";
  std::string a_spectrum;
  bool a_trace = false;
  angle->add_option("--dim", a_dim, "Cone dimension k")->required();
  angle->add_option("--alpha2", a_alpha2, "Squared shape-operator norm bound");
  angle->add_option("--model", a_model, "exact|F|exp|auto");
  angle->add_option("--spectrum", a_spectrum, "Eigenvalue multiset, e.g. 1x2,-1x2,0x1");
  angle->add_flag("--trace", a_trace, "Emit the winning profile as t,h CSV");

  // table
  auto* table = app.add_subcommand("table", "Table of vanishing-angle bounds");
  std::string t_dims = "7,8,9,10,11,12";
  std::string t_alphas = "0,2,4,5,6,8,10,12,40/3";
  table->add_option("--dims", t_dims, "Comma-separated cone dimensions");
  table->add_option("--alpha2s", t_alphas, "Comma-separated alpha^2 values (a/b allowed)");

  // certify
  auto* certify = app.add_subcommand("certify", "Certify focal cones, unions and products");
  certify->require_subcommand(1);
  int c_g = 4;
  int c_m1 = 0;
  int c_m2 = 0;
  std::string c_side;
  std::string c_factors;
  int c_max_sum = 20;
  auto* focal = certify->add_subcommand("focal", "Single focal cone (both sides unless --side)");
  focal->add_option("--g", c_g)->required();
  focal->add_option("--m1", c_m1)->required();
  focal->add_option("--m2", c_m2);
  focal->add_option("--side", c_side)->check(CLI::IsMember({"plus", "minus"}));
  auto* uni = certify->add_subcommand("union", "Union of both focal cones of a g=4 family");
  uni->add_option("--g", c_g);
  uni->add_option("--m1", c_m1)->required();
  uni->add_option("--m2", c_m2)->required();
  auto* product = certify->add_subcommand("product", "Cone over a minimal product");
  product->add_option("--factors", c_factors, "g=4,m1=1,m2=2,side=plus; g=3,m=2; sphere=4")->required();
  auto* sweep = certify->add_subcommand("sweep", "Both sides of every g=4 family up to --max-sum");
  sweep->add_option("--max-sum", c_max_sum, "Bound on m1+m2");

  // classify
  auto* classify = app.add_subcommand("classify", "Hypercone minimality for isoparametric hypersurfaces");
  int k_g = 0;
  int k_m1 = 0;
  int k_m2 = 0;
  std::optional<int> k_n;
  bool k_catalog = false;
  int k_max_sum = 20;
  classify->add_option("--g", k_g);
  classify->add_option("--m1", k_m1);
  classify->add_option("--m2", k_m2);
  classify->add_option("--n", k_n, "Ambient dimension (default g(m1+m2)/2 + 2)");
  classify->add_flag("--catalog", k_catalog, "Dump the family catalog as JSON");
  classify->add_option("--max-sum", k_max_sum, "Catalog bound on m1+m2");

  // verify
  auto* verify = app.add_subcommand("verify", "Check every quoted bound, or re-validate certificates");
  bool v_all = false;
  std::string v_recheck;
  verify->add_flag("--all", v_all, "Run the full claim list");
  verify->add_option("--recheck", v_recheck, "Certificate JSON file to re-validate");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  const ProfileSettings settings = settings_from_environment();
  const Format fmt = common.fmt();
  std::ostringstream buf;
  int code = 0;

  try {
    if (angle->parsed()) {
      std::optional<Spectrum> spectrum;
      if (!a_spectrum.empty()) spectrum = parse_spectrum(a_spectrum);
      double alpha2 = 0.0;
      if (a_alpha2) {
        alpha2 = *a_alpha2;
      } else if (spectrum) {
        alpha2 = spectrum->alpha_sq();
      } else {
        throw UsageError("angle needs --alpha2 or --spectrum");
      }
      ProfileSettings s = settings;
      s.record_trace = a_trace;
      const auto bound = theta_upper_bound(a_dim, alpha2, spectrum, parse_model(a_model), s);
      if (a_trace) {
        buf << "t,h\n";
        const StrategyAttempt* w = bound.winning_attempt();
        if (w && w->solve) {
          for (const auto& p : w->solve->trace) buf << exact(p.t) << ',' << exact(p.h) << '\n';
        }
      } else if (fmt == Format::Json) {
        buf << theta_bound_to_json(bound, a_dim, alpha2).dump(2) << '\n';
      } else if (fmt == Format::Csv) {
        buf << "k,alpha_sq,theta_deg,strategy\n"
            << a_dim << ',' << exact(alpha2) << ',' << (bound.theta ? fixed(to_degrees(*bound.theta), 4) : "***")
            << ',' << (bound.strategy ? to_string(*bound.strategy) : "") << '\n';
      } else {
        buf << theta_bound_to_text(bound, a_dim, alpha2);
      }
      code = bound.exists() ? 0 : 1;
    } else if (table->parsed()) {
      const auto dims = parse_int_list(t_dims);
      const auto alphas = parse_double_list(t_alphas);
      const auto t = generate_angle_table(dims, alphas, settings, common.workers());
      if (fmt == Format::Json) {
        buf << table_to_json(t).dump(2) << '\n';
      } else if (fmt == Format::Csv) {
        buf << table_to_csv(t);
      } else {
        buf << table_to_text(t);
      }
    } else if (certify->parsed()) {
      std::vector<Certificate> certs;
      if (focal->parsed()) {
        if (c_m2 == 0) c_m2 = (c_g == 3 || c_g == 6) ? c_m1 : 0;
        if (c_m2 == 0) throw UsageError("--m2 is required for g=" + std::to_string(c_g));
        if (c_side.empty() || c_side == "plus") certs.push_back(certify_focal_cone(c_g, c_m1, c_m2, Side::Plus, settings));
        if (c_side.empty() || c_side == "minus") certs.push_back(certify_focal_cone(c_g, c_m1, c_m2, Side::Minus, settings));
      } else if (uni->parsed()) {
        certs.push_back(certify_focal_union(c_g, c_m1, c_m2, settings));
      } else if (product->parsed()) {
        certs.push_back(certify_product(parse_factor_list(c_factors), settings));
      } else if (sweep->parsed()) {
        if (c_max_sum < 2) throw UsageError("--max-sum must be >= 2");
        for (auto& e : g4_family_sweep(c_max_sum, settings, common.workers())) {
          certs.push_back(std::move(e.plus));
          certs.push_back(std::move(e.minus));
        }
      }
      buf << render(certs, fmt);
      if (sweep->parsed()) {
        // (1,1) is expected to stay inconclusive; anything else inconclusive is a failure.
        code = 0;
        for (const auto& c : certs) {
          const auto& d = std::get<FocalDescriptor>(c.subject);
          if (!c.minimizing() && !(d.m1 == 1 && d.m2 == 1)) code = 1;
        }
      } else {
        code = exit_for(certs);
      }
    } else if (classify->parsed()) {
      if (k_catalog) {
        if (k_max_sum < 2) throw UsageError("--max-sum must be >= 2");
        buf << catalog_to_json(k_max_sum).dump(2) << '\n';
      } else {
        if (k_g == 0 || k_m1 == 0) throw UsageError("classify needs --g and --m1 (and --m2), or --catalog");
        if (k_m2 == 0) k_m2 = k_m1;
        const int n = k_n ? *k_n : ambient_dimension(k_g, k_m1, k_m2);
        const auto w = wang_minimizing(k_g, k_m1, k_m2, n);
        const bool adm = is_admissible(k_g, k_m1, k_m2);
        if (fmt == Format::Json) {
          Json j;
          j["schema_version"] = kSchemaVersion;
          j["g"] = k_g;
          j["m1"] = k_m1;
          j["m2"] = k_m2;
          j["n"] = n;
          j["admissible"] = adm;
          j["minimizing"] = w.minimizing;
          j["strictly_minimizing"] = w.strictly_minimizing;
          buf << j.dump(2) << '\n';
        } else if (fmt == Format::Csv) {
          buf << "g,m1,m2,n,admissible,minimizing,strictly_minimizing\n"
              << k_g << ',' << k_m1 << ',' << k_m2 << ',' << n << ',' << adm << ',' << w.minimizing << ','
              << w.strictly_minimizing << '\n';
        } else {
          buf << "hypercone g=" << k_g << " (" << k_m1 << "," << k_m2 << ") in R^" << n << ": "
              << (w.minimizing ? "minimizing (strictly)" : "not minimizing") << '\n';
          if (!adm) buf << "note: parameters do not occur in the classification\n";
        }
        code = w.minimizing ? 0 : 1;
      }
    } else if (verify->parsed()) {
      if (v_all == !v_recheck.empty()) throw UsageError("verify needs exactly one of --all or --recheck <file>");
      if (v_all) {
        const auto report = verify_claims(settings, common.workers());
        if (fmt == Format::Json) {
          buf << report_to_json(report).dump(2) << '\n';
        } else if (fmt == Format::Csv) {
          buf << report_to_csv(report);
        } else {
          buf << report_to_text(report);
        }
        code = report.passed ? 0 : 1;
      } else {
        std::ifstream in(v_recheck);
        if (!in) throw UsageError("cannot read '" + v_recheck + "'");
        Json doc;
        try {
          doc = Json::parse(in);
        } catch (const Json::parse_error& e) {
          throw UsageError(std::string("invalid certificate JSON: ") + e.what());
        }
        std::vector<Certificate> certs;
        try {
          certs = certificates_from_document(doc);
        } catch (const Json::exception& e) {
          throw UsageError(std::string("malformed certificate: ") + e.what());
        }
        for (std::size_t i = 0; i < certs.size(); ++i) {
          std::string why;
          const bool ok = recheck(certs[i], settings, &why);
          buf << (ok ? "ok   " : "FAIL ") << "certificate " << i << ' ' << to_string(certs[i].verdict)
              << (ok ? "" : ": " + why) << '\n';
          if (!ok) code = 1;
        }
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  if (!common.out_path.empty()) {
    std::ofstream f(common.out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write '" << common.out_path << "'\n";
      return 2;
    }
    f << buf.str();
  } else {
    out << buf.str();
  }
  return code;
}

}  // namespace conecert::cli
