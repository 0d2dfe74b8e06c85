#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "conecert/catalog.hpp"
#include "conecert/certifier.hpp"
#include "conecert/products.hpp"
#include "conecert/profile_ode.hpp"

namespace conecert {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::ordered_json;

Json spectrum_to_json(const Spectrum& s);
Spectrum spectrum_from_json(const Json& j);

Json descriptor_to_json(const FocalDescriptor& d);
FocalDescriptor descriptor_from_json(const Json& j);

Json product_to_json(const ProductSpec& p);
Json theta_bound_to_json(const ThetaBound& b, int k, double alpha_sq);

Json certificate_to_json(const Certificate& c);
/// Inverse of certificate_to_json; the product subject is rebuilt from its factor list.
Certificate certificate_from_json(const Json& j);

/// {"schema_version": 1, "certificates": [...]}
Json certificates_document(const std::vector<Certificate>& certs);
/// Accepts a certificates document, a single certificate, or a bare array of certificates.
std::vector<Certificate> certificates_from_document(const Json& j);

Json report_to_json(const ClaimReport& r);
Json table_to_json(const AngleTable& t);
Json catalog_to_json(int max_sum);

/// Degrees with 2 decimals per cell, "***" where no angle exists.
std::string table_to_csv(const AngleTable& t);
std::string table_to_text(const AngleTable& t);

std::string certificate_to_text(const Certificate& c);
std::string certificates_to_csv(const std::vector<Certificate>& certs);
std::string report_to_text(const ClaimReport& r);
std::string report_to_csv(const ClaimReport& r);
std::string theta_bound_to_text(const ThetaBound& b, int k, double alpha_sq);

/// Fixed-point rendering with the given number of decimals.
std::string fixed(double v, int decimals);
/// Shortest round-tripping rendering.
std::string exact(double v);

}  // namespace conecert
