// Command-line front end: symbol tables, operator application, resolvent
// solves, norm reports, and the named verification experiments.

#include <CLI11.hpp>
#include <json.hpp>

#include "nle/experiment.hpp"
#include "nle/norms.hpp"
#include "nle/operators.hpp"
#include "nle/resolvent.hpp"
#include "nle/symbol.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using namespace nle;

namespace {

void ensure_parent(const std::string& path) {
  auto p = std::filesystem::path(path).parent_path();
  if (!p.empty()) std::filesystem::create_directories(p);
}

void write_symbol_csv(const SymbolTable& t, const std::string& path) {
  ensure_parent(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  const GridSpec& g = t.grid;
  out << "# symbol kernel=" << t.kernel_name << " sigma=" << format_real(t.sigma)
      << " dim=" << g.dim << " n=" << g.n
      << " period=" << format_real(g.period) << "\n";
  Real dxi = two_pi / g.period;
  if (g.dim == 1) {
    out << "k,xi,re,im\n";
    for (int i = 0; i < g.n; ++i) {
      int k = freq_index(i, g.n);
      out << k << "," << format_real(k * dxi) << ","
          << format_real(t.m[i].real()) << ","
          << format_real(t.m[i].imag()) << "\n";
    }
  } else {
    out << "k0,k1,xi0,xi1,re,im\n";
    for (int i0 = 0; i0 < g.n; ++i0)
      for (int i1 = 0; i1 < g.n; ++i1) {
        int k0 = freq_index(i0, g.n), k1 = freq_index(i1, g.n);
        out << k0 << "," << k1 << "," << format_real(k0 * dxi) << ","
            << format_real(k1 * dxi) << ","
            << format_real(t.m[flat(g, i0, i1)].real()) << ","
            << format_real(t.m[flat(g, i0, i1)].imag()) << "\n";
      }
  }
}

void write_trace_json(const PicardTrace& tr, const std::string& path) {
  ensure_parent(path);
  nlohmann::json j;
  j["iterations"] = tr.iterations;
  j["converged"] = tr.converged;
  j["final_residual"] = tr.final_residual;
  j["residuals"] = tr.residuals;
  j["contraction"] = tr.contraction;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

void apply_config_json(ExperimentConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  nlohmann::json j;
  in >> j;
  if (j.contains("experiment") &&
      j["experiment"].get<std::string>() != c.experiment)
    throw std::runtime_error("config is for experiment " +
                             j["experiment"].get<std::string>());
  if (j.contains("n")) c.n = j["n"].get<int>();
  if (j.contains("jobs")) c.jobs = j["jobs"].get<int>();
  if (j.contains("seeds"))
    c.seeds = j["seeds"].get<std::vector<std::uint64_t>>();
  if (j.contains("sigmas")) c.sigmas = j["sigmas"].get<std::vector<Real>>();
  if (j.contains("alphas")) c.alphas = j["alphas"].get<std::vector<Real>>();
  if (j.contains("lambdas")) c.lambdas = j["lambdas"].get<std::vector<Real>>();
  if (j.contains("betas")) c.betas = j["betas"].get<std::vector<Real>>();
  if (j.contains("epsilons"))
    c.epsilons = j["epsilons"].get<std::vector<Real>>();
  if (j.contains("kernels"))
    c.kernels = j["kernels"].get<std::vector<std::string>>();
}

int run_verify(const std::string& experiment, const std::string& config,
               const std::string& out_prefix, std::uint64_t seed, int n,
               int jobs, bool plot_data) {
  ExperimentConfig cfg = default_config(experiment);
  if (!config.empty()) apply_config_json(cfg, config);
  if (seed != 0) cfg.seeds = {seed};
  if (n != 0) cfg.n = n;
  cfg.jobs = jobs;
  ExperimentResult res = run_experiment(cfg);
  std::string prefix =
      out_prefix.empty() ? "out/" + experiment : out_prefix;
  ensure_parent(prefix + ".csv");
  write_csv(res, prefix + ".csv");
  write_summary_json(res, prefix + ".json");
  if (plot_data) {
    if (experiment == "green") {
      Real beta = cfg.betas.empty() ? 1.0 : cfg.betas.front();
      Real lam = cfg.lambdas.empty() ? 1.0 : cfg.lambdas.front();
      Field G = green_function(make_grid(1, cfg.n > 0 ? cfg.n : 2048), beta,
                               lam);
      write_csv(G, prefix + "_plot.csv");
    } else if (experiment == "borderline") {
      GridSpec g = make_grid(1, cfg.n > 0 ? cfg.n : 1024);
      int J = int(std::lround(std::log2(Real(g.n)))) - 2;
      write_csv(lacunary_field(g, J), prefix + "_plot.csv");
    } else {
      std::cout << "note: no plot data defined for " << experiment << "\n";
    }
  }
  std::cout << experiment << ": rows=" << res.rows.size()
            << " passes=" << res.passes << " failures=" << res.failures
            << " errors=" << res.errors << "\n";
  return res.errors > 0 ? 2 : (res.failures > 0 ? 1 : 0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for Levy-type non-local operators"};
  app.require_subcommand(1);

  // symbol
  auto* sym = app.add_subcommand("symbol", "evaluate m(xi) on a grid");
  std::string sym_kernel = "fraclap", sym_out = "symbol.csv";
  double sym_sigma = 1.0, sym_period = two_pi, sym_eps = 0.1;
  int sym_dim = 1, sym_n = 256;
  sym->add_option("--kernel", sym_kernel,
                  "fraclap|aniso2d|nonsym1d|truncated|xdep|unit");
  sym->add_option("--sigma", sym_sigma, "order in (0,2)");
  sym->add_option("--dim", sym_dim, "1 or 2");
  sym->add_option("--n", sym_n, "modes per axis");
  sym->add_option("--period", sym_period, "torus period");
  sym->add_option("--eps", sym_eps, "xdep amplitude size");
  sym->add_option("--out", sym_out, "output CSV");

  // apply
  auto* app_cmd = app.add_subcommand("apply", "apply L to a sampled field");
  std::string ap_kernel = "fraclap", ap_route = "spectral", ap_in, ap_out;
  double ap_sigma = 1.0, ap_eps = 0.1;
  app_cmd->add_option("--kernel", ap_kernel,
                      "fraclap|aniso2d|nonsym1d|truncated|xdep|unit");
  app_cmd->add_option("--sigma", ap_sigma, "order in (0,2)");
  app_cmd->add_option("--eps", ap_eps, "xdep amplitude size");
  app_cmd->add_option("--route", ap_route,
                      "spectral|quadrature|both (both writes the spectral "
                      "result and prints the relative discrepancy)");
  app_cmd->add_option("--in", ap_in, "input field CSV")->required();
  app_cmd->add_option("--out", ap_out, "output field CSV")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "solve (lambda - L) u = f");
  std::string so_kernel = "fraclap", so_in, so_out, so_trace;
  double so_sigma = 1.0, so_eps = 0.1, so_lambda = 1.0, so_tol = 1e-8;
  int so_maxit = 50;
  solve->add_option("--kernel", so_kernel,
                    "fraclap|aniso2d|nonsym1d|truncated|xdep|unit");
  solve->add_option("--sigma", so_sigma, "order in (0,2)");
  solve->add_option("--eps", so_eps, "xdep amplitude size");
  solve->add_option("--lambda", so_lambda, "resolvent parameter > 0");
  solve->add_option("--tol", so_tol, "Picard residual tolerance");
  solve->add_option("--max-iter", so_maxit, "Picard iteration cap");
  solve->add_option("--trace", so_trace, "write iteration trace JSON here");
  solve->add_option("--in", so_in, "right-hand side CSV")->required();
  solve->add_option("--out", so_out, "solution CSV")->required();

  // norm
  auto* norm = app.add_subcommand("norm", "norm report for a sampled field");
  std::string no_in, no_out = "report.json";
  std::vector<double> no_alphas;
  norm->add_option("--in", no_in, "input field CSV")->required();
  norm->add_option("--alphas", no_alphas, "Holder exponents in (0,1]")
      ->required();
  norm->add_option("--out", no_out, "output JSON");

  // verify
  auto* verify = app.add_subcommand("verify", "run a named experiment");
  std::string ve_exp, ve_config, ve_out;
  std::uint64_t ve_seed = 0;
  int ve_jobs = 1, ve_n = 0;
  bool ve_plot = false;
  verify->add_option("experiment", ve_exp,
                     "max_principle|schauder|borderline|isomorphism|green|"
                     "campanato|commutator")
      ->required();
  verify->add_option("--config", ve_config, "JSON config overrides");
  verify->add_option("--out", ve_out, "output prefix (default out/<name>)");
  verify->add_option("--seed", ve_seed, "run a single seed");
  verify->add_option("--n", ve_n, "grid size override");
  verify->add_option("--jobs", ve_jobs, "worker threads");
  verify->add_flag("--plot-data", ve_plot, "also write plot-friendly data");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run every experiment");
  std::string sw_out = "out";
  int sw_jobs = 1;
  sweep->add_option("--out", sw_out, "output directory");
  sweep->add_option("--jobs", sw_jobs, "worker threads");

  // field (utility: make inputs for apply/solve/norm)
  auto* field = app.add_subcommand("field", "generate a sample field CSV");
  std::string fi_kind = "random", fi_out = "field.csv";
  double fi_alpha = 0.7, fi_period = two_pi;
  int fi_n = 256, fi_dim = 1, fi_mode = 3;
  std::uint64_t fi_seed = 1;
  field->add_option("--kind", fi_kind, "random|cosine");
  field->add_option("--dim", fi_dim, "1 or 2");
  field->add_option("--n", fi_n, "points per axis");
  field->add_option("--period", fi_period, "torus period");
  field->add_option("--alpha", fi_alpha, "random field regularity");
  field->add_option("--seed", fi_seed, "random field seed");
  field->add_option("--mode", fi_mode, "cosine mode number");
  field->add_option("--out", fi_out, "output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sym->parsed()) {
      KernelSpec k = make_kernel(sym_kernel, sym_sigma, sym_dim, sym_eps,
                                 sym_period);
      SymbolTable t = symbol_table(k, make_grid(sym_dim, sym_n, sym_period));
      write_symbol_csv(t, sym_out);
      std::cout << "wrote " << sym_out << "\n";
      return 0;
    }

    if (app_cmd->parsed()) {
      Field u = read_csv(ap_in);
      KernelSpec k = make_kernel(ap_kernel, ap_sigma, u.grid.dim, ap_eps,
                                 u.grid.period);
      ensure_parent(ap_out);
      if (ap_route == "quadrature") {
        write_csv(apply_quadrature(k, u), ap_out);
      } else if (ap_route == "spectral" || ap_route == "both") {
        if (k.x_dependent)
          throw std::runtime_error(
              "spectral route needs an x-independent kernel; use --route "
              "quadrature");
        SymbolTable t = symbol_table(k, u.grid);
        Field vs = apply_symbol(t, u);
        if (ap_route == "both") {
          Field vq = apply_quadrature(k, u);
          Real disc = (vs.values - vq.values).abs().maxCoeff() /
                      std::max(sup_norm(vs), 1e-300);
          std::cout << "route discrepancy (relative sup): "
                    << format_real(disc) << "\n";
        }
        write_csv(vs, ap_out);
      } else {
        throw std::runtime_error("unknown route " + ap_route);
      }
      std::cout << "wrote " << ap_out << "\n";
      return 0;
    }

    if (solve->parsed()) {
      Field f = read_csv(so_in);
      KernelSpec k = make_kernel(so_kernel, so_sigma, f.grid.dim, so_eps,
                                 f.grid.period);
      ensure_parent(so_out);
      if (k.x_dependent) {
        SolveOptions opts;
        opts.tol = so_tol;
        opts.max_iter = so_maxit;
        PicardTrace tr;
        try {
          Field u = solve_variable(k, f, so_lambda, &tr, opts);
          write_csv(u, so_out);
        } catch (const PicardDivergence& e) {
          if (!so_trace.empty()) write_trace_json(e.trace, so_trace);
          std::cerr << "solve failed: " << e.what() << "\n";
          return 1;
        }
        if (!so_trace.empty()) write_trace_json(tr, so_trace);
        std::cout << "wrote " << so_out << " after " << tr.iterations
                  << " iterations, residual " << format_real(tr.final_residual)
                  << "\n";
      } else {
        SymbolTable t = symbol_table(k, f.grid);
        Field u = solve_constant(t, f, so_lambda);
        write_csv(u, so_out);
        if (!so_trace.empty()) {
          Field Lu = apply_symbol(t, u);
          PicardTrace tr;
          tr.iterations = 1;
          tr.converged = true;
          tr.final_residual =
              (so_lambda * u.values - Lu.values - f.values).abs().maxCoeff();
          tr.residuals = {tr.final_residual};
          write_trace_json(tr, so_trace);
        }
        std::cout << "wrote " << so_out << "\n";
      }
      return 0;
    }

    if (norm->parsed()) {
      Field u = read_csv(no_in);
      nlohmann::json reports = nlohmann::json::array();
      for (double a : no_alphas) {
        NormReport r = norm_report(u, a);
        reports.push_back({{"alpha", r.alpha},
                           {"sup_norm", r.sup_norm},
                           {"holder", r.holder},
                           {"zygmund_secdiff", r.zygmund_secdiff},
                           {"zygmund_ext", r.zygmund_ext},
                           {"campanato", r.campanato},
                           {"log_lip", r.log_lip}});
      }
      nlohmann::json j;
      j["file"] = no_in;
      j["reports"] = reports;
      ensure_parent(no_out);
      std::ofstream out(no_out, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + no_out);
      out << j.dump(2) << "\n";
      std::cout << "wrote " << no_out << "\n";
      return 0;
    }

    if (verify->parsed())
      return run_verify(ve_exp, ve_config, ve_out, ve_seed, ve_n, ve_jobs,
                        ve_plot);

    if (sweep->parsed()) {
      int worst = 0;
      for (const auto& name : experiment_names()) {
        ExperimentConfig cfg = default_config(name);
        cfg.jobs = sw_jobs;
        ExperimentResult res = run_experiment(cfg);
        std::string prefix = sw_out + "/" + name;
        ensure_parent(prefix + ".csv");
        write_csv(res, prefix + ".csv");
        write_summary_json(res, prefix + ".json");
        std::cout << name << ": rows=" << res.rows.size()
                  << " passes=" << res.passes << " failures=" << res.failures
                  << " errors=" << res.errors << "\n";
        int code = res.errors > 0 ? 2 : (res.failures > 0 ? 1 : 0);
        worst = std::max(worst, code);
      }
      return worst;
    }

    if (field->parsed()) {
      GridSpec g = make_grid(fi_dim, fi_n, fi_period);
      Field u;
      if (fi_kind == "random") {
        u = random_field(g, fi_alpha, fi_seed);
      } else if (fi_kind == "cosine") {
        u = Field{g, Array::Zero(g.size())};
        Real w = two_pi * fi_mode / g.period;
        if (g.dim == 1) {
          for (int i = 0; i < g.n; ++i) u.values[i] = std::cos(w * i * g.spacing());
        } else {
          for (int i0 = 0; i0 < g.n; ++i0)
            for (int i1 = 0; i1 < g.n; ++i1)
              u.values[flat(g, i0, i1)] = std::cos(w * i0 * g.spacing()) *
                                          std::cos(w * i1 * g.spacing());
        }
      } else {
        throw std::runtime_error("unknown field kind " + fi_kind);
      }
      ensure_parent(fi_out);
      write_csv(u, fi_out);
      std::cout << "wrote " << fi_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
