// Command-line laboratory for the compact wave scheme: spectra, runs, error
// tables, mesh search, stability checks, and scalar modal reports.
#include <cmath>
#include <complex>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "numerovlab/analysis.hpp"
#include "numerovlab/config.hpp"
#include "numerovlab/csv.hpp"
#include "numerovlab/errors.hpp"
#include "numerovlab/mesh.hpp"
#include "numerovlab/modal.hpp"
#include "numerovlab/reference.hpp"
#include "numerovlab/scheme.hpp"
#include "numerovlab/spectral.hpp"

namespace fs = std::filesystem;
using namespace nlab;

namespace {

struct Overrides {
  std::optional<std::string> config_path, mesh, steps, domain_length, tau_rule, out;
  std::optional<int> uniform, multiplicity;
  std::optional<double> a, sigma, tau;
  std::optional<long long> steps_override;
  std::vector<double> horizons, snapshots;
  bool fixed_steps = false, fixed_tau = false;
};

void add_common_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "configuration file (sectioned key = value)");
  cmd->add_option("--mesh", o.mesh, "mesh file (lines 'X <rational>' and 'steps ... / <d>')");
  cmd->add_option("--steps", o.steps, "inline mesh steps '<n1> <n2> ... / <d>'");
  cmd->add_option("--uniform", o.uniform, "uniform mesh with N intervals");
  cmd->add_option("--X", o.domain_length, "domain length (rational, default 1)");
  cmd->add_option("--K", o.multiplicity, "family multiplicity (default 1)");
  cmd->add_option("--a", o.a, "wave speed (default 1)");
  cmd->add_option("--sigma", o.sigma, "implicitness weight, real or p/q (default 1/12)");
  cmd->add_option("--tau", o.tau, "time step");
  cmd->add_option("--tau-rule", o.tau_rule, "time-step rule '<c>/K'");
  cmd->add_option("--T", o.horizons, "horizon(s)")->delimiter(',');
  cmd->add_option("--M", o.steps_override, "number of time steps (overrides the tau rule)");
  cmd->add_option("--snapshots", o.snapshots, "snapshot times (multiples of tau)")
      ->delimiter(',');
  cmd->add_option("--out", o.out, "output directory (default '.')");
  cmd->add_flag("--fixed-M", o.fixed_steps, "hold M fixed across horizons");
  cmd->add_flag("--fixed-tau", o.fixed_tau, "hold tau fixed across horizons (default)");
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig cfg;
  if (o.config_path) cfg = ExperimentConfig::load(*o.config_path);
  const auto clear_sources = [&] {
    cfg.mesh_file.reset();
    cfg.inline_steps.reset();
    cfg.inline_denominator.reset();
    cfg.uniform_intervals.reset();
  };
  if (o.mesh) {
    clear_sources();
    cfg.mesh_file = *o.mesh;
  }
  if (o.steps) {
    clear_sources();
    const auto slash = o.steps->rfind('/');
    if (slash == std::string::npos)
      throw std::invalid_argument("--steps needs '<n1> <n2> ... / <d>'");
    std::istringstream nums(o.steps->substr(0, slash));
    std::vector<long long> steps;
    long long v = 0;
    while (nums >> v) steps.push_back(v);
    cfg.inline_steps = std::move(steps);
    cfg.inline_denominator = std::stoll(o.steps->substr(slash + 1));
  }
  if (o.uniform) {
    clear_sources();
    cfg.uniform_intervals = *o.uniform;
  }
  if (o.domain_length) cfg.domain_length = parse_rational(*o.domain_length);
  if (o.multiplicity) cfg.multiplicity = *o.multiplicity;
  if (o.a) cfg.a = *o.a;
  if (o.sigma) cfg.sigma = *o.sigma;
  if (o.tau) {
    cfg.tau = *o.tau;
    cfg.tau_rule.reset();
  }
  if (o.tau_rule) {
    cfg.tau_rule = TauRule::parse(*o.tau_rule);
    cfg.tau.reset();
  }
  if (!o.horizons.empty()) cfg.horizons = o.horizons;
  if (o.steps_override) cfg.steps_override = *o.steps_override;
  if (!o.snapshots.empty()) cfg.snapshot_times = o.snapshots;
  if (o.out) cfg.out_dir = *o.out;
  if (o.fixed_steps) cfg.fixed_steps_mode = true;
  if (o.fixed_tau) cfg.fixed_steps_mode = false;
  return cfg;
}

std::string format_complex(std::complex<double> z) {
  return format_double(z.real()) + (z.imag() < 0 ? " - " : " + ") +
         format_double(std::abs(z.imag())) + "i";
}

const char* class_name(SpectrumClass c) {
  return c == SpectrumClass::ComplexPresent ? "COMPLEX_PRESENT" : "ALL_REAL";
}

int cmd_eig(const ExperimentConfig& cfg, bool with_oracle) {
  const Mesh mesh = extend_mesh(cfg.base_mesh(), cfg.multiplicity);
  const Spectrum spec = generalized_spectrum(mesh);
  std::ostringstream csv;
  write_spectrum_csv(spec, csv);
  write_text_atomic(fs::path(cfg.out_dir) / "spectrum.csv", csv.str());

  const std::complex<double> dom = spec.dominant_pair().lambda;
  std::cout << class_name(spec.classification) << ", N = " << mesh.intervals()
            << ", dominant lambda = " << format_complex(dom)
            << ", kappa0 = " << format_double(growth_rate(dom, cfg.a)) << "\n";
  if (with_oracle) {
    const std::vector<std::complex<double>> roots = charpoly_roots_oracle(mesh);
    double worst = 0.0;
    std::vector<std::complex<double>> pool = roots;
    for (const EigenPair& p : spec.pairs) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t pick = 0;
      for (std::size_t r = 0; r < pool.size(); ++r)
        if (std::abs(pool[r] - p.lambda) < best) {
          best = std::abs(pool[r] - p.lambda);
          pick = r;
        }
      worst = std::max(worst, best / std::max(1.0, std::abs(p.lambda)));
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    std::cout << "oracle max relative mismatch = " << format_double(worst) << "\n";
  }
  return 0;
}

int cmd_run(const ExperimentConfig& cfg) {
  if (cfg.horizons.size() != 1)
    throw std::invalid_argument("run: exactly one horizon T is required");
  const double T = cfg.horizons.front();
  const Mesh mesh = extend_mesh(cfg.base_mesh(), cfg.multiplicity);

  long long M;
  if (cfg.steps_override) {
    M = *cfg.steps_override;
  } else {
    const double tau_req = cfg.schedule().value_for(cfg.multiplicity);
    M = static_cast<long long>(std::ceil(T / tau_req * (1.0 - 1e-12)));
  }
  const double tau = T / static_cast<double>(M);
  const SchemeConfig sc{cfg.a, tau, M, cfg.sigma};
  const CompactWaveScheme scheme(mesh, sc);

  const auto& nodes = mesh.nodes();
  const int n = mesh.interior_count();
  std::vector<double> v0(n), u1(n, 0.0);
  for (int j = 0; j < n; ++j) v0[j] = quartic_bump(nodes[j + 1]);

  RunOptions options;
  options.snapshot_times = cfg.snapshot_times;
  const RunResult<double> run =
      scheme.run(std::span<const double>(v0), std::span<const double>(u1), options);

  std::string norms_csv = "m,t,l2h,dirichlet\n";
  for (const NormHistoryRow& r : run.norm_history)
    norms_csv += std::to_string(r.level) + ',' + format_double(r.time) + ',' +
                 format_double(r.l2h) + ',' + format_double(r.dirichlet) + '\n';
  write_text_atomic(fs::path(cfg.out_dir) / "norms.csv", norms_csv);

  for (const Snapshot<double>& snap : run.snapshots) {
    std::string csv = "x,v\n";
    csv += format_double(nodes.front()) + ",0\n";
    for (int j = 0; j < n; ++j)
      csv += format_double(nodes[j + 1]) + ',' + format_double(snap.values[j]) + '\n';
    csv += format_double(nodes.back()) + ",0\n";
    write_text_atomic(fs::path(cfg.out_dir) / ("snapshot_t" + format_double(snap.time) + ".csv"),
                      csv);
  }

  std::cout << "ran M = " << M << " steps, tau = " << format_double(tau)
            << ", T = " << format_double(T) << (run.overflowed ? ", overflowed" : "") << "\n";
  if (!run.overflowed) {
    const SineSeries reference = project_sine_series(quartic_bump, cfg.a, to_double(mesh.length()));
    const std::vector<double> exact = reference.evaluate(std::span<const double>(nodes), T);
    double worst = std::max(std::abs(exact.front()), std::abs(exact.back()));
    for (int j = 0; j < n; ++j)
      worst = std::max(worst, std::abs(exact[j + 1] - run.final_state.curr[j]));
    std::cout << "error vs reference at T: " << format_double(worst) << "\n";
  }
  return 0;
}

int cmd_table(const ExperimentConfig& cfg, std::vector<int> multiplicities) {
  if (multiplicities.empty()) multiplicities = {20, 40, 60, 80};
  std::vector<double> horizons = cfg.horizons.empty() ? std::vector<double>{2.0} : cfg.horizons;

  ExperimentSetup setup;
  setup.a = cfg.a;
  setup.sigma = cfg.sigma;
  if (cfg.fixed_steps_mode) {
    if (!cfg.steps_override)
      throw std::invalid_argument("table: fixed-M mode needs --M");
    setup.fixed_steps = cfg.steps_override;
  }
  const TauRule rule = cfg.fixed_steps_mode ? TauRule::fixed(1.0) : cfg.schedule();

  const ErrorTable table =
      error_table(cfg.base_mesh(), multiplicities, rule, horizons, setup);

  std::string csv = "K,T,tau,M,error\n";
  for (const ErrorRow& r : table.rows)
    csv += std::to_string(r.multiplicity) + ',' + format_double(r.horizon) + ',' +
           format_double(r.tau) + ',' + std::to_string(r.steps) + ',' + format_double(r.error) +
           '\n';
  write_text_atomic(fs::path(cfg.out_dir) / "table.csv", csv);
  std::cout << csv;

  // Growth-curve plot data: error against K, one file per horizon.
  for (double T : horizons) {
    std::string plot = "K,error\n";
    for (const ErrorRow& r : table.rows)
      if (r.horizon == T)
        plot += std::to_string(r.multiplicity) + ',' + format_double(r.error) + '\n';
    write_text_atomic(fs::path(cfg.out_dir) / ("growth_T" + format_double(T) + ".csv"), plot);
  }

  // Observed growth rate per K whenever two horizons are available.
  if (horizons.size() >= 2) {
    for (int K : multiplicities) {
      const ErrorRow *first = nullptr, *last = nullptr;
      for (const ErrorRow& r : table.rows) {
        if (r.multiplicity != K) continue;
        if (!first) first = &r;
        last = &r;
      }
      if (first && last && first->error > 0 && std::isfinite(last->error))
        std::cout << "K = " << K << ": practical rate = "
                  << format_double(
                         practical_rate(first->error, last->error, first->horizon, last->horizon))
                  << "\n";
    }
  }
  return 0;
}

int cmd_search(const ExperimentConfig& cfg, const SearchOptions& options) {
  std::string csv = "steps,denominator,re_lambda,im_lambda,kappa0\n";
  const auto row = [&](const CandidateReport& hit) {
    std::string steps;
    for (long long s : hit.steps) {
      if (!steps.empty()) steps += ' ';
      steps += std::to_string(s);
    }
    return steps + ',' + std::to_string(hit.denominator) + ',' +
           format_double(hit.dominant.real()) + ',' + format_double(hit.dominant.imag()) + ',' +
           format_double(hit.growth_rate) + '\n';
  };
  const SearchOutcome outcome = brute_force_search(options, [&](const CandidateReport& hit) {
    std::cout << "hit: steps " << row(hit);
  });
  for (const CandidateReport& hit : outcome.hits) csv += row(hit);
  write_text_atomic(fs::path(cfg.out_dir) / "search.csv", csv);
  std::cout << "examined " << outcome.examined << " candidates, " << outcome.hits.size()
            << " complex-spectrum hits" << (outcome.complete ? "" : " (budget exhausted)")
            << "\n";
  return 0;
}

int cmd_check(const ExperimentConfig& cfg, double eps0_sq, std::optional<double> kappa) {
  const Mesh base = cfg.base_mesh();
  const Mesh mesh = extend_mesh(base, cfg.multiplicity);
  if (!cfg.tau) throw std::invalid_argument("check: --tau is required");
  if (mesh.is_uniform()) {
    const CflReport r = check_cfl_uniform(mesh, cfg.a, *cfg.tau, eps0_sq);
    std::cout << "uniform step condition: " << (r.pass ? "PASS" : "FAIL")
              << "\n  ratio form:      lhs = " << format_double(r.ratio_form.lhs)
              << ", rhs = " << format_double(r.ratio_form.rhs)
              << ", margin = " << format_double(r.ratio_form.margin)
              << "\n  eigenvalue form: lhs = " << format_double(r.eigenvalue_form.lhs)
              << ", rhs = " << format_double(r.eigenvalue_form.rhs)
              << ", margin = " << format_double(r.eigenvalue_form.margin) << "\n";
    return 0;
  }
  const Spectrum spec = generalized_spectrum(base);
  const double allowance =
      kappa ? *kappa : growth_rate(spec.dominant_pair().lambda, cfg.a);
  const FamilyConditionReport r =
      check_family_condition(base, spec, cfg.multiplicity, *cfg.tau, allowance, cfg.a);
  if (r.vacuous) {
    std::cout << "family condition: vacuous (base spectrum is all-real)\n";
    return 0;
  }
  std::cout << "family condition (kappa = " << format_double(allowance)
            << "): " << (r.pass ? "PASS" : "FAIL") << "\n  lhs = " << format_double(r.lhs)
            << ", rhs = " << format_double(r.rhs) << ", margin = " << format_double(r.margin)
            << "\n  tau* = " << format_double(r.tau_star)
            << ", tau*/h_min^2 = " << format_double(r.tau_star_over_hmin_sq) << "\n";
  return 0;
}

int cmd_modal(const ExperimentConfig& cfg, double lambda_re, double lambda_im,
              std::vector<double> taus, double kappa) {
  if (taus.empty()) {
    if (!cfg.tau) throw std::invalid_argument("modal: provide --taus or --tau");
    taus.push_back(*cfg.tau);
  }
  const std::complex<double> lambda(lambda_re, lambda_im);
  std::string csv =
      "re_lambda,im_lambda,tau,sigma,re_q,im_q,abs_q,kappa0,"
      "magnitude_lhs,magnitude_pass,imaginary_lhs,imaginary_pass,spectral_lhs,spectral_pass\n";
  for (double tau : taus) {
    const ModalParams params{lambda, tau, cfg.a, cfg.sigma};
    const AmplificationResult amp = amplification(params);
    const NecessaryConditions cond = necessary_conditions(params, kappa);
    csv += format_double(lambda_re) + ',' + format_double(lambda_im) + ',' + format_double(tau) +
           ',' + format_double(cfg.sigma) + ',' + format_double(amp.q.real()) + ',' +
           format_double(amp.q.imag()) + ',' + format_double(amp.abs_q) + ',' +
           format_double(growth_rate(lambda, cfg.a)) + ',' + format_double(cond.magnitude.lhs) +
           ',' + (cond.magnitude.pass ? "1" : "0") + ',' + format_double(cond.imaginary.lhs) +
           ',' + (cond.imaginary.pass ? "1" : "0") + ',' + format_double(cond.spectral.lhs) +
           ',' + (cond.spectral.pass ? "1" : "0") + '\n';
  }
  write_text_atomic(fs::path(cfg.out_dir) / "modal.csv", csv);
  std::cout << csv;
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"compact wave scheme laboratory"};
  app.require_subcommand(1);

  Overrides o;
  bool with_oracle = false;
  std::vector<int> table_ks;
  SearchOptions search_options;
  bool no_oracle = false;
  double eps0_sq = 0.1;
  std::optional<double> kappa_opt;
  double lambda_re = 0.0, lambda_im = 0.0, kappa_allow = 0.0;
  std::vector<double> modal_taus;

  CLI::App* eig = app.add_subcommand("eig", "spectrum of the mesh pencil");
  add_common_options(eig, o);
  eig->add_flag("--oracle", with_oracle, "cross-check against the charpoly oracle (N <= 16)");

  CLI::App* run = app.add_subcommand("run", "time-step the scheme and compare to the reference");
  add_common_options(run, o);

  CLI::App* table = app.add_subcommand("table", "error table over a family of meshes");
  add_common_options(table, o);
  table->add_option("--Ks", table_ks, "multiplicities (default 20,40,60,80)")->delimiter(',');

  CLI::App* search = app.add_subcommand("search", "brute-force hunt for complex-spectrum meshes");
  add_common_options(search, o);
  search->add_option("--n0-min", search_options.min_intervals, "smallest interval count");
  search->add_option("--n0-max", search_options.max_intervals, "largest interval count");
  search->add_option("--alphabet", search_options.alphabet, "step numerators")->delimiter(',');
  search->add_option("--budget", search_options.budget, "max candidates to examine");
  search->add_flag("--no-oracle", no_oracle, "skip the charpoly cross-check on hits");

  CLI::App* check = app.add_subcommand("check", "stability conditions for the configured mesh");
  add_common_options(check, o);
  check->add_option("--eps0sq", eps0_sq, "eps0^2 in the step condition (default 0.1)");
  check->add_option("--kappa", kappa_opt, "growth allowance (default: kappa0 of the base)");

  CLI::App* modal = app.add_subcommand("modal", "scalar amplification report for one eigenvalue");
  add_common_options(modal, o);
  modal->add_option("--lambda-re", lambda_re, "Re lambda")->required();
  modal->add_option("--lambda-im", lambda_im, "Im lambda");
  modal->add_option("--taus", modal_taus, "time steps to sweep")->delimiter(',');
  modal->add_option("--kappa", kappa_allow, "growth allowance (default 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const ExperimentConfig cfg = resolve(o);
    search_options.oracle_check = !no_oracle;
    if (eig->parsed()) return cmd_eig(cfg, with_oracle);
    if (run->parsed()) return cmd_run(cfg);
    if (table->parsed()) return cmd_table(cfg, table_ks);
    if (search->parsed()) return cmd_search(cfg, search_options);
    if (check->parsed()) return cmd_check(cfg, eps0_sq, kappa_opt);
    if (modal->parsed()) return cmd_modal(cfg, lambda_re, lambda_im, modal_taus, kappa_allow);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
