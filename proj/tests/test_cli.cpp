#include "cayley/cli.hpp"
#include "cayley/group.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "cayley");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cayley::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("cayley_cli_test_" + name);
}

}  // namespace

TEST_CASE("growth table as CSV") {
  const Outcome o = run({"growth", "--group", "z:2", "--radius", "5", "--format", "csv"});
  CHECK(o.code == 0);
  const auto rows = lines(o.out);
  REQUIRE(rows.size() == 7);
  CHECK(rows[0] == "r,b_r,s_r,length_sum_r,avg_len_num,avg_len_den");
  CHECK(rows[6].rfind("5,61,", 0) == 0);
}

TEST_CASE("Folner value for Z") {
  const Outcome o = run({"folner", "--group", "z:1", "--n", "2", "--cap", "8", "--format", "csv"});
  CHECK(o.code == 0);
  CHECK(o.out == "n,value_or_bound,kind,witness_size,family_upper\n2,4,exact,4,4\n");
  const Outcome j = run({"folner", "--group", "z:1", "--n", "2", "--cap", "8"});
  const auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed["value"] == 4);
  CHECK(parsed["kind"] == "exact");
  const Outcome fam = run({"folner", "--group", "z:2", "--n", "2", "--family", "--format", "csv"});
  CHECK(fam.out == "n,family_upper,boundary_size\n2,49,24\n");
  const Outcome range = run({"folner", "--group", "dinf", "--n", "3", "--cap", "8", "--range", "--format", "csv"});
  CHECK(lines(range.out).size() == 4);
}

TEST_CASE("inequality check on an interval") {
  const Outcome o = run({"check", "--group", "z:1", "--form", "pete-correia", "--omega", "0..9"});
  CHECK(o.code == 0);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["holds"] == true);
  CHECK(j["lhs"]["num"] == 1);
  CHECK(j["lhs"]["den"] == 5);
  CHECK(j["rhs"]["num"] == 1);
  CHECK(j["rhs"]["den"] == 20);
  const Outcome csv = run({"check", "--group", "z:1", "--form", "epsilon", "--epsilon", "1/4", "--omega", "-3..3",
                           "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(lines(csv.out)[1].rfind("epsilon,2/7,", 0) == 0);
}

TEST_CASE("falsified certificate exits with 2 and names the witness") {
  const Outcome o = run({"certify", "--group", "z:1", "--c", "3", "--alpha", "0"});
  CHECK(o.code == 2);
  CHECK(o.err.find("falsified") != std::string::npos);
  CHECK(o.err.find("{0}") != std::string::npos);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(j["holds"] == false);

  const Outcome pass = run({"certify", "--group", "dinf", "--c", "3/4", "--alpha", "3", "--scope", "connected:9"});
  CHECK(pass.code == 0);
  CHECK(nlohmann::json::parse(pass.out)["scope"] == "connected-containing-e:9");
}

TEST_CASE("small subcommands") {
  const Outcome p = run({"phi", "--group", "z:1", "--v", "5", "--format", "csv"});
  CHECK(p.out == "v,phi\n5/1,3\n");
  const Outcome a = run({"avg-length", "--group", "z:1", "--radius", "2"});
  CHECK(nlohmann::json::parse(a.out)["avg_length"] == "6/5");
  const Outcome c = run({"convert", "--direction", "folner-to-csc", "--c", "1", "--rho", "0", "--s-size", "2",
                         "--format", "csv"});
  CHECK(c.code == 0);
  CHECK(lines(c.out)[1] == "csc,1/1,1/1,0/1,2,2/1");
  const Outcome t = run({"transport", "--group", "z:1", "--omega", "0..1", "--radius", "1", "--lemma", "counting"});
  CHECK(t.code == 0);
  const auto tj = nlohmann::json::parse(t.out);
  CHECK(tj["sum_rays"] == 2);
  CHECK(tj["sum_omega_g"] == 2);
  const Outcome all = run({"transport", "--group", "z:1", "--omega", "0..2", "--radius", "3", "--alpha", "1",
                           "--format", "csv"});
  CHECK(all.code == 0);
  CHECK(lines(all.out).size() == 8);
}

TEST_CASE("boundary from a key file") {
  const cayley::Group g = cayley::parse_group("z:2");
  const auto path = temp_file("omega.txt");
  {
    std::ofstream f(path);
    f << "# a plus shape\n";
    for (const auto& e : {cayley::Element(cayley::ZVector{{0, 0}}), cayley::Element(cayley::ZVector{{1, 0}}),
                          cayley::Element(cayley::ZVector{{-1, 0}}), cayley::Element(cayley::ZVector{{0, 1}}),
                          cayley::Element(cayley::ZVector{{0, -1}})}) {
      f << cayley::to_hex(g.key(e)) << '\n';
    }
  }
  const Outcome o = run({"boundary", "--group", "z:2", "--omega-file", path.string(), "--format", "csv"});
  CHECK(o.code == 0);
  CHECK(o.out == "size,boundary_size,ratio\n5,4,4/5\n");
  std::filesystem::remove(path);
}

TEST_CASE("usage and resource errors exit with 1") {
  CHECK(run({}).code == 1);
  const Outcome unknown = run({"frobnicate"});
  CHECK(unknown.code == 1);
  CHECK_FALSE(unknown.err.empty());
  CHECK(run({"growth", "--group", "z:1", "--radius", "2", "--bogus"}).code == 1);
  CHECK(run({"growth", "--radius", "2"}).code == 1);
  CHECK(run({"growth", "--group", "q:1", "--radius", "2"}).code == 1);
  CHECK(run({"growth", "--group", "z:1", "--radius", "2", "--threads", "0"}).code == 1);
  CHECK(run({"check", "--group", "heis", "--form", "epsilon", "--omega", "0..3"}).code == 1);
  CHECK(run({"check", "--group", "z:1", "--form", "nope", "--omega", "0..3"}).code == 1);
  CHECK(run({"check", "--group", "z:1", "--form", "epsilon", "--epsilon", "1", "--omega", "0..3"}).code == 1);
  const Outcome q = run({"quotient", "--group", "z:1", "--horizon", "4"});
  CHECK(q.code == 1);
  CHECK(q.err.find("NotApplicable") != std::string::npos);
  CHECK(q.out.empty());
  CHECK(run({"folner", "--group", "heis", "--n", "2", "--family"}).code == 1);
  CHECK(run({"growth", "--help"}).code == 0);
}

TEST_CASE("memory budget from the environment") {
  ::setenv("CAYLEY_MAX_ELEMENTS", "100", 1);
  const Outcome o = run({"growth", "--group", "free:2", "--radius", "6"});
  ::unsetenv("CAYLEY_MAX_ELEMENTS");
  CHECK(o.code == 1);
  CHECK(o.err.find("MemoryBudgetExceeded") != std::string::npos);
  CHECK(o.err.find("last completed radius: 3") != std::string::npos);
  CHECK(run({"growth", "--group", "free:2", "--radius", "6", "--max-elements", "100"}).code == 1);
}

TEST_CASE("output file and thread independence") {
  const auto path = temp_file("growth.json");
  const Outcome o = run({"growth", "--group", "heis", "--radius", "3", "--output", path.string()});
  CHECK(o.code == 0);
  CHECK(o.out.empty());
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  CHECK(nlohmann::json::parse(body.str())["rows"].size() == 4);
  std::filesystem::remove(path);

  for (const auto& args : std::vector<std::vector<std::string>>{
           {"folner", "--group", "lamplighter", "--n", "3", "--cap", "6", "--range"},
           {"certify", "--group", "heis", "--c", "3/4", "--alpha", "3", "--scope", "connected:7"},
           {"quotient", "--group", "lamplighter", "--horizon", "4", "--cap", "5"}}) {
    auto one = args;
    one.insert(one.end(), {"--threads", "1"});
    auto eight = args;
    eight.insert(eight.end(), {"--threads", "8"});
    const Outcome a = run(one);
    const Outcome b = run(eight);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}
