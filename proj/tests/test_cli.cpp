#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fbc/homology.hpp"
#include "fbc/serialize.hpp"
#include "runner.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace fbc;

namespace {
  fs::path const data_dir   = FBC_TEST_DATA_DIR;
  fs::path const golden_dir = FBC_TEST_GOLDEN_DIR;

  std::string slurp(fs::path const& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path scratch(std::string const& name) {
    auto p = fs::temp_directory_path() / ("fbc_cli_test_" + name);
    fs::remove_all(p);
    return p;
  }

  int run_cli(std::string const& args) {
    std::string cmd = std::string(FBC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int         status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::vector<std::string> csv_column(std::string const& csv, std::size_t col) {
    std::istringstream       in(csv);
    std::string              line;
    std::vector<std::string> out;
    std::getline(in, line);  // provenance
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      std::istringstream fields(line);
      std::string        f;
      for (std::size_t k = 0; k <= col; ++k) {
        std::getline(fields, f, ',');
      }
      out.push_back(f);
    }
    return out;
  }

  cli::ExperimentConfig gradient_config(std::string const& monodromy,
                                        std::size_t        levels) {
    cli::ExperimentConfig c;
    c.command   = cli::Command::gradient;
    c.monodromy = (data_dir / monodromy).string();
    c.levels    = levels;
    return c;
  }
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("identity monodromy gives trivial torsion") {
    auto a = cli::build_artifacts(gradient_config("identity2.json", 3));
    for (auto const& t : csv_column(a.at("gradient.csv"), 2)) {
      CHECK(t == "1");
    }
  }

  TEST_CASE("linear monodromy torsion column matches the oracle") {
    auto a    = cli::build_artifacts(gradient_config("linear.json", 4));
    auto tors = csv_column(a.at("gradient.csv"), 2);
    auto idx  = csv_column(a.at("gradient.csv"), 1);
    CHECK(tors == std::vector<std::string>{"1", "2", "6", "24"});
    auto phi = test::make_triangular(2, {{}, {1}}).automorphism();
    for (std::size_t k = 0; k < idx.size(); ++k) {
      CHECK(tors[k] == mapping_torus_h1(phi, std::stoul(idx[k])).torsion_order.get_str());
    }
  }

  TEST_CASE("image-form monodromy is accepted when triangular") {
    auto a = cli::build_artifacts(gradient_config("linear.json", 3));
    auto b = cli::build_artifacts(gradient_config("linear_images.json", 3));
    CHECK(csv_column(a.at("gradient.csv"), 2) == csv_column(b.at("gradient.csv"), 2));
  }

  TEST_CASE("every artifact carries provenance") {
    auto c = gradient_config("chain3.json", 3);
    auto a = cli::build_artifacts(c);
    CHECK(a.size() == 6);
    auto hash = cli::config_hash(c);
    for (auto const& [name, content] : a) {
      CAPTURE(name);
      CHECK(content.find(hash) != std::string::npos);
      CHECK(content.find(cli::tool_version) != std::string::npos);
      if (name.ends_with(".csv")) {
        CHECK(content.starts_with(std::string("# ") + cli::tool_version));
      } else {
        auto j = io::json::parse(content);
        CHECK(j["provenance"]["config_hash"] == hash);
      }
      CHECK(content.find('\r') == std::string::npos);
    }
  }

  TEST_CASE("golden artifacts") {
    struct Case {
      std::string dir, args;
      std::vector<std::string> files;
    };
    std::vector<Case> cases{
        {"chain3_cyclic3", "gradient --monodromy chain3.json --levels 3",
         {"gradient.csv", "farber.csv", "hierarchy.json", "degrees.json",
          "homology.json"}},
        {"linear_cyclic4", "gradient --monodromy linear.json --levels 4",
         {"gradient.csv"}},
        {"linear_oracle6", "oracle --monodromy linear.json --levels 6",
         {"oracle.csv"}},
        {"linear_modp", "chain --monodromy linear.json --chain modp --primes 2,3,5 --ball 2",
         {"farber.csv"}},
    };
    for (auto const& c : cases) {
      CAPTURE(c.dir);
      auto out  = scratch(c.dir);
      auto args = c.args;
      auto pos  = args.find("--monodromy ") + 12;
      args.insert(pos, (data_dir.string() + "/"));
      REQUIRE(run_cli(args + " --out " + out.string()) == 0);
      for (auto const& f : c.files) {
        CAPTURE(f);
        CHECK(slurp(out / f) == slurp(golden_dir / c.dir / f));
      }
      fs::remove_all(out);
    }
  }

  TEST_CASE("exit codes") {
    auto m = [](char const* f) { return (data_dir / f).string(); };
    auto out = scratch("codes");

    CHECK(run_cli("gradient --monodromy " + m("malformed.json") + " --out " + out.string())
          == cli::exit_config);
    CHECK_FALSE(fs::exists(out));
    CHECK(run_cli("gradient --monodromy " + m("missing.json") + " --out " + out.string())
          == cli::exit_config);
    CHECK(run_cli("gradient --monodromy " + m("linear.json") + " --chain bogus --out "
                  + out.string())
          == cli::exit_config);
    CHECK(run_cli("gradient --monodromy " + m("linear.json") + " --levels 0 --out "
                  + out.string())
          == cli::exit_config);
    CHECK(run_cli("gradient --monodromy " + m("linear.json") + " --chain modp --primes 2,4 --out "
                  + out.string())
          == cli::exit_config);
    CHECK(run_cli("gradient --bogus") == cli::exit_config);
    CHECK(run_cli("") == cli::exit_config);
    CHECK_FALSE(fs::exists(out));

    CHECK(run_cli("analyze --monodromy " + m("nontriangular.json") + " --out " + out.string())
          == cli::exit_validation);
    CHECK_FALSE(fs::exists(out));

    CHECK(run_cli("chain --monodromy " + m("linear.json") + " --levels 11 --out "
                  + out.string())
          == cli::exit_resource);
    CHECK_FALSE(fs::exists(out));

    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("snf --matrix " + m("m2x2.json") + " --out " + out.string()) == 0);
    auto snf = io::json::parse(slurp(out / "snf.json"));
    CHECK(snf["divisors"] == io::json::parse(R"(["2","4"])"));
    fs::remove_all(out);
  }

  TEST_CASE("runner never leaves partial output") {
    auto out = scratch("partial");
    fs::create_directories(out);
    auto c = gradient_config("linear.json", 3);
    c.out  = (out / "sub").string();
    // A file where a directory is needed makes the write fail.
    std::ofstream(out / "sub") << "x";
    std::ostringstream log;
    CHECK(cli::run(c, log) != 0);
    CHECK(fs::is_regular_file(out / "sub"));
    fs::remove_all(out);
  }

  TEST_CASE("reruns are byte identical") {
    auto a = scratch("det_a"), b = scratch("det_b");
    auto args = "gradient --monodromy " + (data_dir / "chain3.json").string()
                + " --chain lowindex --max-index 3 --ball 3 --seed 0";
    REQUIRE(run_cli(args + " --out " + a.string()) == 0);
    REQUIRE(run_cli(args + " --out " + b.string()) == 0);
    std::size_t n = 0;
    for (auto const& e : fs::directory_iterator(a)) {
      CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
      ++n;
    }
    CHECK(n == 6);
    fs::remove_all(a);
    fs::remove_all(b);
  }
}
