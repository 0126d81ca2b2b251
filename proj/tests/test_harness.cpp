#include <doctest.h>

#include "nle/experiment.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace nle;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// trimmed-down configs so every experiment stays in the seconds range
ExperimentConfig tiny(const std::string& name) {
  ExperimentConfig c = default_config(name);
  c.n = 128;
  c.seeds = {1};
  if (!c.sigmas.empty()) c.sigmas = {0.7, 1.4};
  if (!c.alphas.empty()) c.alphas = {0.5};
  if (!c.lambdas.empty()) c.lambdas = {1.0};
  if (!c.betas.empty()) c.betas = {0.8, 2.0};
  if (!c.epsilons.empty()) c.epsilons = {0.1};
  return c;
}

}  // namespace

TEST_CASE("experiment names are stable and defaults resolve") {
  const auto names = experiment_names();
  CHECK(names.size() == 7);
  for (const auto& n : names) {
    ExperimentConfig c = default_config(n);
    CHECK(c.experiment == n);
  }
  CHECK_THROWS_AS(default_config("no_such_experiment"), std::invalid_argument);
  ExperimentConfig bogus;
  bogus.experiment = "no_such";
  CHECK_THROWS_AS(run_experiment(bogus), std::invalid_argument);
}

TEST_CASE("experiment kernels resolve, invalid combinations refused") {
  KernelSpec k;
  CHECK(experiment_kernel("fraclap1d", 0.8, 0.0, k));
  CHECK(k.dim == 1);
  CHECK(experiment_kernel("fraclap2d", 1.3, 0.0, k));
  CHECK(k.dim == 2);
  CHECK(experiment_kernel("xdep", 0.8, 0.3, k));
  CHECK(experiment_kernel("nonsym1d", 0.7, 0.0, k));
  // odd part violates the sigma = 1 surface cancellation
  CHECK_FALSE(experiment_kernel("nonsym1d", 1.0, 0.0, k));
  CHECK_THROWS_AS(experiment_kernel("bogus", 0.7, 0.0, k),
                  std::invalid_argument);
}

TEST_CASE("every experiment runs clean on a tiny config") {
  for (const auto& name : experiment_names()) {
    CAPTURE(name);
    ExperimentResult r = run_experiment(tiny(name));
    CHECK(r.experiment == name);
    CHECK(r.rows.size() > 0);
    CHECK(r.errors == 0);
    CHECK(r.failures == 0);
    CHECK(r.ok());
    CHECK(r.passes == r.rows.size());
    for (const auto& row : r.rows)
      for (const auto& col : r.columns) {
        const bool have = row.text.count(col) || row.num.count(col);
        CHECK(have);
      }
  }
}

TEST_CASE("rows and csv output are identical across jobs counts") {
  ExperimentConfig c = tiny("max_principle");
  c.seeds = {1, 2};
  ExperimentConfig c2 = c;
  c2.jobs = 2;
  ExperimentResult serial = run_experiment(c);
  ExperimentResult threaded = run_experiment(c2);
  REQUIRE(serial.rows.size() == threaded.rows.size());
  write_csv(serial, "/tmp/nle_serial.csv");
  write_csv(threaded, "/tmp/nle_threaded.csv");
  write_csv(serial, "/tmp/nle_serial_again.csv");
  const std::string a = slurp("/tmp/nle_serial.csv");
  CHECK(a == slurp("/tmp/nle_threaded.csv"));
  CHECK(a == slurp("/tmp/nle_serial_again.csv"));
  CHECK(a.rfind("# experiment=max_principle", 0) == 0);
  std::remove("/tmp/nle_serial.csv");
  std::remove("/tmp/nle_threaded.csv");
  std::remove("/tmp/nle_serial_again.csv");
}

TEST_CASE("summary json matches the result counters") {
  ExperimentResult r = run_experiment(tiny("green"));
  write_summary_json(r, "/tmp/nle_summary.json");
  nlohmann::json j = nlohmann::json::parse(slurp("/tmp/nle_summary.json"));
  CHECK(j.at("experiment") == "green");
  CHECK(j.at("rows").get<std::size_t>() == r.rows.size());
  CHECK(j.at("passes").get<std::size_t>() + j.at("failures").get<std::size_t>() +
            j.at("errors").get<std::size_t>() ==
        r.rows.size());
  REQUIRE(j.contains("metrics"));
  CHECK(j.at("metrics").contains("mass_defect"));
  const auto& m = j.at("metrics").at("mass_defect");
  CHECK(m.at("min").get<double>() <= m.at("max").get<double>());
  std::remove("/tmp/nle_summary.json");
}

TEST_CASE("per-unit errors become rows, not aborts") {
  // sigma = 1 on the odd kernel is refused at kernel build time; the runner
  // must keep the remaining units alive
  ExperimentConfig c = tiny("max_principle");
  c.kernels = {"nonsym1d", "fraclap1d"};
  c.sigmas = {1.0};
  ExperimentResult r = run_experiment(c);
  CHECK(r.rows.size() > 0);
  CHECK(r.errors == 0);   // refused combos are skipped, not errored
  bool saw_fraclap = false;
  for (const auto& row : r.rows) {
    auto it = row.text.find("kernel");
    REQUIRE(it != row.text.end());
    if (it->second == "fraclap1d") saw_fraclap = true;
    CHECK(it->second != "nonsym1d");
  }
  CHECK(saw_fraclap);
}
