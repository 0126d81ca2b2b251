#pragma once

#include "nle/grid.hpp"
#include "nle/kernel.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

// Named verification experiments: each one sweeps a parameter grid, checks
// its own pass condition per row, and reports rows that serialize
// byte-identically across runs (fixed seeds, fixed iteration order).

namespace nle {

struct ExperimentConfig {
  std::string experiment;
  int n = 0;                          // 0 = experiment default
  std::vector<std::uint64_t> seeds;   // empty = 1..8
  std::vector<Real> sigmas;           // empty = experiment default
  std::vector<Real> alphas;
  std::vector<Real> lambdas;
  std::vector<Real> betas;
  std::vector<Real> epsilons;
  std::vector<std::string> kernels;
  int jobs = 1;
};

struct ExperimentRow {
  std::map<std::string, std::string> text;
  std::map<std::string, Real> num;
  bool pass = true;
  std::string note;
};

struct ExperimentResult {
  std::string experiment;
  std::vector<std::string> columns;   // order for CSV; "pass"/"note" appended
  std::vector<ExperimentRow> rows;
  int passes = 0;
  int failures = 0;
  int errors = 0;   // rows produced by a thrown exception
  bool ok() const { return failures == 0 && errors == 0; }
};

std::vector<std::string> experiment_names();
ExperimentConfig default_config(const std::string& experiment);
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// One row per line at 17 significant digits; reruns with the same config
// produce identical bytes.
void write_csv(const ExperimentResult& r, const std::string& path);
void write_summary_json(const ExperimentResult& r, const std::string& path);

// Kernel lookup used by the experiment grids: fraclap1d, fraclap2d,
// aniso2d, nonsym1d, truncated, xdep.  Returns false (without touching
// `out`) for combinations the kernel rejects, e.g. nonsym1d at sigma = 1.
bool experiment_kernel(const std::string& id, Real sigma, Real eps,
                       KernelSpec& out);

}  // namespace nle
