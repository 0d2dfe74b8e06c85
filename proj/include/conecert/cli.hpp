#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "conecert/catalog.hpp"

namespace conecert::cli {

/// Parses `g=4,m1=1,m2=2,side=plus; g=3,m=2; sphere=4`, or a JSON array of factor objects
/// when the text starts with '['. Throws ParseError with a byte offset into text.
std::vector<FocalDescriptor> parse_factor_list(std::string_view text);

/// Exit codes: 0 all certified / all claims pass, 1 something inconclusive or failing, 2 bad input.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace conecert::cli
