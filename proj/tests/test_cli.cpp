#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "vsuq/dvine.hpp"
#include "vsuq/io.hpp"
#include "vsuq/numerics.hpp"

using namespace vsuq;
namespace fs = std::filesystem;

namespace {

const std::string kCli = VSUQ_CLI_PATH;
const std::string kSource = VSUQ_SOURCE_DIR;

int run_cli(const std::string& args) {
  const std::string cmd = "\"" + kCli + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vsuq_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string beam() { return kSource + "/configs/beam.json"; }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors") {
    const fs::path dir = scratch("usage");
    io::write_file((dir / "empty.csv").string(), "");
    CHECK(run_cli("select " + (dir / "empty.csv").string() + " --out " + (dir / "o").string()) == 2);
    CHECK(run_cli("sample --config " + beam() + " --samples 0 --out " + (dir / "o").string()) == 2);
    CHECK(run_cli("") == 2);
    CHECK(run_cli("frobnicate") == 2);
    CHECK(run_cli("sample --config " + beam() + " --threads 0") == 2);
    CHECK(run_cli("select " + (dir / "missing.csv").string()) == 3);
    fs::remove_all(dir);
  }

  TEST_CASE("missing surrogate is a dependency error") {
    const fs::path dir = scratch("nosur");
    CHECK(run_cli("mcs --config " + beam() + " --evaluator surrogate --out " + dir.string()) == 3);
    fs::remove_all(dir);
  }

  TEST_CASE("select names the generating model") {
    const fs::path dir = scratch("select");
    DVineSpec spec(2);
    spec.set_pair(1, 0, BivariateCopula::from_tau(CopulaFamily::Frank, 0.5));
    const SampleMatrix u = sample(spec, 300, 71);
    PairedSample d;
    for (std::size_t r = 0; r < u.rows; ++r) {
      d.x1.push_back(num::normal_quantile(u(r, 0)));
      d.x2.push_back(num::normal_quantile(u(r, 1)));
    }
    io::write_file((dir / "data.csv").string(), io::paired_csv(d));
    REQUIRE(run_cli("select " + (dir / "data.csv").string() + " --allow-equal-marginals --out " + (dir / "o").string()) ==
            0);
    const auto j = nlohmann::json::parse(io::read_file((dir / "o" / "selection.json").string()));
    CHECK(j.at("best").get<std::string>() == "Gauss-Frank-Gauss");
    CHECK(j.at("pool_size").get<int>() == 45);
    double total = 0.0;
    for (const auto& c : j.at("candidates")) total += c.at("weight").get<double>();
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(run_cli("verify " + (dir / "o").string()) == 0);
    fs::remove_all(dir);
  }

  TEST_CASE("solve is reproducible") {
    const fs::path dir = scratch("solve");
    REQUIRE(run_cli("solve --config " + beam() + " --deviation 0.1,-0.2,0.05,0.3 --out " + (dir / "a").string()) == 0);
    REQUIRE(run_cli("solve --config " + beam() + " --deviation 0.1,-0.2,0.05,0.3 --out " + (dir / "b").string()) == 0);
    CHECK(io::read_file((dir / "a" / "displacement.csv").string()) ==
          io::read_file((dir / "b" / "displacement.csv").string()));
    CHECK(run_cli("solve --config " + beam() + " --deviation 0.1,0.2 --out " + (dir / "c").string()) == 2);
    fs::remove_all(dir);
  }

  TEST_CASE("mcs, compare and verify") {
    const fs::path dir = scratch("mcs");
    const fs::path cfg = dir / "beam_small.json";
    auto j = nlohmann::json::parse(io::read_file(beam()));
    j["mcs"]["samples"] = 200;
    io::write_file(cfg.string(), j.dump(2));
    const std::string out = (dir / "o").string();
    REQUIRE(run_cli("mcs --config " + cfg.string() + " --out " + out) == 0);
    const auto summary = nlohmann::json::parse(io::read_file(out + "/summary.json"));
    CHECK(summary.dump().find("\"X\"") != std::string::npos);
    CHECK(summary.dump().find("\"Y\"") != std::string::npos);
    const std::string csv = io::read_file(out + "/summary.csv");
    CHECK(csv.rfind("Response,Mean,Variance,Bandwidth\n", 0) == 0);

    // A tiny untrained-looking network is enough for timing.
    j["surrogate"]["hidden"] = 4;
    j["surrogate"]["epochs"] = 5;
    j["surrogate"]["train_samples"] = 200;
    io::write_file(cfg.string(), j.dump(2));
    REQUIRE(run_cli("train --config " + cfg.string() + " --out " + out) == 0);
    REQUIRE(run_cli("compare --config " + cfg.string() + " --iterations 3 --out " + out) == 0);
    const std::string eff = io::read_file(out + "/efficiency.csv");
    int lines = 0;
    for (char ch : eff) lines += ch == '\n';
    CHECK(lines == 4);

    // The manifest now describes the train outputs.
    CHECK(run_cli("verify " + out) == 0);
    io::write_file(out + "/training.csv", io::read_file(out + "/training.csv") + "tampered\n");
    CHECK(run_cli("verify " + out) == 1);
    fs::remove_all(dir);
  }
}
