#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "conecert/cli.hpp"
#include "conecert/errors.hpp"
#include "conecert/io.hpp"

using namespace conecert;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "cone_certify");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t error_offset(const std::string& text) {
  try {
    cli::parse_factor_list(text);
  } catch (const ParseError& e) {
    return e.offset();
  }
  FAIL("expected a parse error for: " << text);
  return 0;
}

std::string error_message(const std::string& text) {
  try {
    cli::parse_factor_list(text);
  } catch (const ParseError& e) {
    return e.message();
  }
  return "";
}

std::string temp_path(const std::string& name) { return "cone_certify_test_" + name; }

}  // namespace

TEST_CASE("factor list grammar") {
  const auto one = cli::parse_factor_list("g=4,m1=1,m2=2,side=minus");
  REQUIRE(one.size() == 1);
  CHECK(one[0].dim == 4);
  CHECK(one[0].side == Side::Minus);

  const auto three = cli::parse_factor_list(" g=4, m1=1, m2=2, side=plus ; g=3,m=2; sphere=4 ;");
  REQUIRE(three.size() == 3);
  CHECK(three[0].dim == 5);
  CHECK(three[1].g == 3);
  CHECK(three[2].g == 2);
  CHECK(three[2].dim == 4);

  const auto json = cli::parse_factor_list(R"([{"g":3,"m":2},{"sphere":4},{"g":4,"m1":1,"m2":2,"side":"minus"}])");
  REQUIRE(json.size() == 3);
  CHECK(json[0].dim == 4);
  CHECK(json[1].dim == 4);
  CHECK(json[2].side == Side::Minus);
}

TEST_CASE("factor list errors carry byte offsets") {
  CHECK(error_message("") == "empty factor list");
  CHECK(error_message("   ") == "empty factor list");
  CHECK(error_message("g=5,m=1") == "g must be in {2,3,4,6}");
  CHECK(error_offset("g=5,m=1") == 2);
  CHECK(error_offset("g=3,m=2; g=4,m1=1,q=2") == 18);
  CHECK(error_message("g=3,m=2; g=4,m1=1,q=2") == "unknown key 'q'");
  CHECK(error_offset("g=3,m=2;; g=3,m=2") == 8);
  CHECK(error_message("g=3,m=2;; g=3,m=2") == "empty factor");
  CHECK(error_message("g=4,m1=1") == "missing key 'm2'");
  CHECK(error_message("g=4,m1=x,m2=1") == "value of 'm1' must be an integer");
  CHECK(error_offset("g=4,m1=x,m2=1") == 7);
  CHECK(error_message("g=3,m=2,g=3") == "duplicate key 'g'");
  CHECK(error_message("sphere=2,g=3") == "'sphere' cannot be combined with other keys");
  CHECK(error_message("g=3,m1=1,m2=2").rfind("invalid family", 0) == 0);
  CHECK(error_message("[1, 2").rfind("invalid JSON", 0) == 0);
  CHECK(error_message("[]") == "empty factor list");
}

TEST_CASE("exit codes") {
  const auto angle = run({"angle", "--dim", "12", "--alpha2", "10", "--model", "exp"});
  CHECK(angle.code == 0);
  CHECK(angle.out.find("theta0 <= 8.7") != std::string::npos);

  CHECK(run({"angle", "--dim", "7", "--alpha2", "6"}).code == 1);
  CHECK(run({"certify", "focal", "--g", "4", "--m1", "1", "--m2", "1", "--side", "plus"}).code == 1);
  CHECK(run({"certify", "focal", "--g", "4", "--m1", "1", "--m2", "2", "--side", "minus"}).code == 0);
  CHECK(run({"certify", "union", "--g", "4", "--m1", "2", "--m2", "2"}).code == 0);
  CHECK(run({"certify", "product", "--factors", "g=3,m=2; sphere=4"}).code == 0);

  const auto bad = run({"certify", "product", "--factors", "g=5,m=1"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("g must be in {2,3,4,6}") != std::string::npos);
  CHECK(run({"certify", "focal", "--g", "5", "--m1", "1", "--m2", "1"}).code == 2);
  CHECK(run({"angle", "--dim", "12"}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"angle", "--dim", "12", "--alpha2", "10", "--format", "xml"}).code == 2);
}

TEST_CASE("sweep exits 0 when only the open family is inconclusive") {
  const auto r = run({"certify", "sweep", "--max-sum", "6", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("Inconclusive") != std::string::npos);
}

TEST_CASE("certificates round trip through JSON and recheck") {
  const std::string path = temp_path("certs.json");
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"certify", "focal", "--g", "3", "--m1", "4", "--m2", "4", "--side", "minus"},
           {"certify", "union", "--g", "4", "--m1", "2", "--m2", "2"},
           {"certify", "product", "--factors", "g=3,m=1; g=3,m=2; g=4,m1=1,m2=2,side=minus"},
           {"certify", "sweep", "--max-sum", "5"}}) {
    auto with_out = args;
    with_out.insert(with_out.end(), {"--format", "json", "--out", path});
    const auto made = run(with_out);
    CHECK(made.code <= 1);
    const auto checked = run({"verify", "--recheck", path});
    CHECK(checked.code == 0);
    CHECK(checked.out.find("FAIL") == std::string::npos);

    std::ifstream in(path);
    const auto doc = Json::parse(in);
    CHECK(doc.at("schema_version") == kSchemaVersion);
    const auto certs = certificates_from_document(doc);
    REQUIRE_FALSE(certs.empty());
    CHECK(certificates_document(certs).dump() == doc.dump());
  }

  std::ifstream in(path);
  auto doc = Json::parse(in);
  in.close();
  doc["certificates"][2]["margin_rad"] = 0.5;
  std::ofstream(path) << doc.dump(2);
  CHECK(run({"verify", "--recheck", path}).code == 1);
  std::remove(path.c_str());
  CHECK(run({"verify", "--recheck", path}).code == 2);
}

TEST_CASE("output is identical across parallel widths") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"certify", "sweep", "--max-sum", "12", "--format", "json"},
           {"table", "--format", "csv"},
           {"verify", "--all", "--format", "json"}}) {
    auto one = args;
    one.insert(one.end(), {"--jobs", "1"});
    auto four = args;
    four.insert(four.end(), {"--jobs", "4"});
    const auto a = run(one);
    const auto b = run(four);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK(run(one).out == a.out);
  }
}

TEST_CASE("formats") {
  const auto json = run({"angle", "--dim", "12", "--alpha2", "10", "--format", "json"});
  const auto j = Json::parse(json.out);
  CHECK(j.at("exists") == true);
  CHECK(j.at("theta_rad").get<double>() < 0.15708);

  const auto trace = run({"angle", "--dim", "6", "--spectrum", "1x2,-1x2,0x1", "--model", "exact", "--trace",
                          "--format", "csv"});
  CHECK(trace.code == 0);
  CHECK(trace.out.rfind("t,h", 0) == 0);

  const auto table = run({"table", "--dims", "7,12", "--alpha2s", "0,10"});
  CHECK(table.out.find("***") != std::string::npos);

  const auto classify = run({"classify", "--g", "2", "--m1", "1", "--m2", "5", "--n", "8"});
  CHECK(classify.code == 1);
  const auto catalog = run({"classify", "--catalog", "--max-sum", "9", "--format", "json"});
  CHECK(catalog.code == 0);
  CHECK(catalog.out.find("\"m1\": 4") != std::string::npos);

  const auto report = run({"verify", "--all"});
  CHECK(report.code == 0);
  CHECK(report.out.find("ALL CLAIMS PASS") != std::string::npos);
}
