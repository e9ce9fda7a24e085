// Batch front-end: plans, sweeps, oracle runs, sampling and figure data.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "schmidt_forge.hpp"

namespace sf = schmidt_forge;
namespace fs = std::filesystem;

namespace {

void emit(const std::string& text, const std::string& out) {
  if (out.empty())
    std::cout << text;
  else
    sf::write_text(out, text);
}

struct SpectrumSource {
  std::string path;
  std::size_t sample_dim = 0;
  std::uint64_t seed = 0;

  void attach(CLI::App* cmd) {
    auto* file = cmd->add_option("--spectrum", path, "spectrum JSON file");
    auto* dim = cmd->add_option("--sample-dim", sample_dim,
                                "draw a Haar-induced spectrum of this dimension instead");
    cmd->add_option("--seed", seed, "seed for --sample-dim");
    file->excludes(dim);
    dim->excludes(file);
  }

  sf::SchmidtSpectrum load() const {
    if (!path.empty()) return sf::read_spectrum(path);
    if (sample_dim == 0) throw CLI::RequiredError("--spectrum or --sample-dim");
    return sf::sample_haar_spectrum({sample_dim, seed, 1}).front();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal single-copy entanglement concentration for bipartite pure states"};
  app.require_subcommand(1);

  // measures
  std::string measures_path;
  auto* measures_cmd = app.add_subcommand("measures", "print entanglement measures of a spectrum");
  measures_cmd->add_option("spectrum", measures_path, "spectrum JSON file")->required();

  // sample
  sf::SampleSpec sample_spec;
  std::string sample_dir;
  auto* sample_cmd = app.add_subcommand("sample", "write Haar-induced random spectra");
  sample_cmd->add_option("--dim", sample_spec.dim, "dimension D")->required();
  sample_cmd->add_option("--seed", sample_spec.seed, "base seed");
  sample_cmd->add_option("--count", sample_spec.count, "number of spectra");
  sample_cmd->add_option("--out", sample_dir, "output directory")->required();

  // interp
  SpectrumSource interp_src;
  std::size_t interp_points = 101;
  std::string interp_out;
  auto* interp_cmd = app.add_subcommand("interp", "interpolation baseline curve (CSV)");
  interp_src.attach(interp_cmd);
  interp_cmd->add_option("--grid-points", interp_points, "uniform xi points in [0, 1]")
      ->check(CLI::PositiveNumber);
  interp_cmd->add_option("--out", interp_out, "CSV output (stdout if omitted)");

  // concentrate
  SpectrumSource conc_src;
  std::optional<double> pref, cref, cref_sq, kref;
  std::string conc_out;
  auto* conc_cmd = app.add_subcommand("concentrate", "efficiency-optimal plan");
  conc_src.attach(conc_cmd);
  auto* o_pref = conc_cmd->add_option("--pref", pref, "reference purity P_ref");
  auto* o_cref = conc_cmd->add_option("--cref", cref, "reference I-Concurrence");
  auto* o_cref_sq = conc_cmd->add_option("--cref-sq", cref_sq, "squared reference I-Concurrence");
  auto* o_kref = conc_cmd->add_option("--kref", kref, "reference Schmidt number");
  auto* ref_group = conc_cmd->add_option_group("reference");
  ref_group->add_option(o_pref);
  ref_group->add_option(o_cref);
  ref_group->add_option(o_cref_sq);
  ref_group->add_option(o_kref);
  ref_group->require_option(1);
  conc_cmd->add_option("--out", conc_out, "outcome JSON (stdout if omitted)");

  // fixedp
  SpectrumSource fixed_src;
  double p_fix = 1.0;
  std::string fixed_out;
  auto* fixed_cmd = app.add_subcommand("fixedp", "maximum-entanglement plan at fixed probability");
  fixed_src.attach(fixed_cmd);
  fixed_cmd->add_option("--p", p_fix, "success probability in (0, 1]")->required();
  fixed_cmd->add_option("--out", fixed_out, "outcome JSON (stdout if omitted)");

  // sweep
  SpectrumSource sweep_src;
  std::string sweep_mode = "efficiency", sweep_grid, sweep_out, sweep_format = "csv";
  auto* sweep_cmd = app.add_subcommand("sweep", "plans over a grid of reference values");
  sweep_src.attach(sweep_cmd);
  sweep_cmd->add_option("--mode", sweep_mode, "efficiency | fixedprob | interp")
      ->check(CLI::IsMember({"efficiency", "fixedprob", "interp"}));
  sweep_cmd->add_option("--grid,--pref-grid,--p-grid,--xi-grid", sweep_grid,
                        "lin:a:b:n, log:a:b:n or list:v1,v2 (bounds may use D, e.g. 1/D)");
  sweep_cmd->add_option("--format", sweep_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_option("--out", sweep_out, "output file (stdout if omitted)");

  // validate
  sf::ValidationConfig vcfg;
  auto* validate_cmd = app.add_subcommand("validate", "cross-check planners against the oracles");
  validate_cmd->add_option("--dim-min", vcfg.dim_min, "smallest dimension");
  validate_cmd->add_option("--dim-max", vcfg.dim_max, "largest dimension (<= 14)");
  validate_cmd->add_option("--instances", vcfg.instances, "random instances per suite");
  validate_cmd->add_option("--seed", vcfg.seed, "seed");

  // kthreshold
  SpectrumSource kthr_src;
  double kmin = 0.0, gap = 0.0;
  std::string kthr_out;
  auto* kthr_cmd = app.add_subcommand(
      "kthreshold", "plan from a minimum Schmidt number: P_ref = 1 / (kmin (1 - gap))");
  kthr_src.attach(kthr_cmd);
  kthr_cmd->add_option("--kmin", kmin, "minimum desirable Schmidt number")->required();
  kthr_cmd->add_option("--gap", gap, "relative threshold gap in [0, 1)")
      ->required()
      ->check(CLI::Range(0.0, 0.999999));
  kthr_cmd->add_option("--out", kthr_out, "outcome JSON (stdout if omitted)");

  // oracle
  SpectrumSource oracle_src;
  double oracle_pref = 1.0;
  std::string oracle_method = "enumerate", oracle_out;
  sf::AscentOptions ascent;
  auto* oracle_cmd = app.add_subcommand("oracle", "run an independent solver for one P_ref");
  oracle_src.attach(oracle_cmd);
  oracle_cmd->add_option("--pref", oracle_pref, "reference purity P_ref")->required();
  oracle_cmd->add_option("--method", oracle_method, "enumerate | ascent")
      ->check(CLI::IsMember({"enumerate", "ascent"}));
  oracle_cmd->add_option("--restarts", ascent.restarts, "random starts for ascent");
  oracle_cmd->add_option("--tol", ascent.tol, "relative projected-gradient tolerance");
  oracle_cmd->add_option("--oracle-seed", ascent.seed, "seed for ascent starts");
  oracle_cmd->add_flag("!--no-analytic-start", ascent.seed_with_analytical,
                       "do not start ascent from the closed-form plan");
  oracle_cmd->add_option("--out", oracle_out, "report JSON (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*measures_cmd) {
      std::cout << sf::measures_to_json(sf::measures(sf::read_spectrum(measures_path)));
    } else if (*sample_cmd) {
      fs::create_directories(sample_dir);
      const auto spectra = sf::sample_haar_spectrum(sample_spec);
      for (std::size_t i = 0; i < spectra.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof name, "spectrum_%06zu.json", i);
        sf::write_spectrum(spectra[i], fs::path(sample_dir) / name);
      }
    } else if (*interp_cmd) {
      const auto s = interp_src.load();
      const auto grid = sf::parse_grid("lin:0:1:" + std::to_string(interp_points), s.dim());
      emit(sf::interp_sweep_csv(sf::interp_sweep(s, grid)), interp_out);
    } else if (*conc_cmd) {
      const auto s = conc_src.load();
      const auto ref = pref      ? sf::reference_from(sf::ReferenceKind::p_ref, *pref, s.dim())
                       : cref    ? sf::reference_from(sf::ReferenceKind::c_ref, *cref, s.dim())
                       : cref_sq ? sf::reference_from(sf::ReferenceKind::c_ref_sq, *cref_sq, s.dim())
                                 : sf::reference_from(sf::ReferenceKind::k_ref, *kref, s.dim());
      emit(sf::outcome_to_json(sf::optimal_plan_efficiency(s, ref)), conc_out);
    } else if (*fixed_cmd) {
      const auto s = fixed_src.load();
      emit(sf::outcome_to_json(sf::optimal_plan_fixed(s, sf::fixed_prob_request(p_fix))), fixed_out);
    } else if (*sweep_cmd) {
      const auto s = sweep_src.load();
      const auto mode = sweep_mode == "efficiency"  ? sf::SweepMode::efficiency
                        : sweep_mode == "fixedprob" ? sf::SweepMode::fixedprob
                                                    : sf::SweepMode::interp;
      const auto grid =
          sf::parse_grid(sweep_grid.empty() ? sf::default_grid(mode) : sweep_grid, s.dim());
      if (grid.empty()) throw sf::Error(sf::ErrorKind::GridSyntax, "empty grid");
      const bool json = sweep_format == "json";
      std::string text;
      if (mode == sf::SweepMode::interp) {
        const auto points = sf::interp_sweep(s, grid);
        text = json ? sf::interp_points_json(points) : sf::interp_sweep_csv(points);
      } else if (mode == sf::SweepMode::efficiency) {
        const auto rows = sf::efficiency_sweep(s, grid);
        text = json ? sf::outcomes_json(rows) : sf::efficiency_sweep_csv(rows);
      } else {
        const auto rows = sf::fixedprob_sweep(s, grid);
        text = json ? sf::outcomes_json(rows) : sf::fixedprob_sweep_csv(rows);
      }
      emit(text, sweep_out);
    } else if (*validate_cmd) {
      bool ok = true;
      for (const auto& r : sf::run_validation(vcfg)) {
        std::cout << (r.passed() ? "PASS " : "FAIL ") << r.name << " (" << r.checked
                  << " instances, " << r.failed << " failed)";
        if (!r.passed()) std::cout << ": " << r.first_failure;
        std::cout << '\n';
        ok = ok && r.passed();
      }
      std::cout << (ok ? "all suites passed\n" : "validation FAILED\n");
      return ok ? 0 : 1;
    } else if (*kthr_cmd) {
      const auto s = kthr_src.load();
      const double k_thr = kmin * (1.0 - gap);
      const auto ref = sf::reference_from(sf::ReferenceKind::k_ref, k_thr, s.dim());
      emit(sf::outcome_to_json(sf::optimal_plan_efficiency(s, ref)), kthr_out);
    } else if (*oracle_cmd) {
      const auto s = oracle_src.load();
      const auto ref = sf::reference_from(sf::ReferenceKind::p_ref, oracle_pref, s.dim());
      const auto report = oracle_method == "enumerate" ? sf::enumerate_configurations(s, ref)
                                                       : sf::numeric_qp_ascent(s, ref, ascent);
      const auto best = sf::apply_plan(s, report.best_y, ref);
      emit(sf::oracle_report_to_json(best, report), oracle_out);
    }
  } catch (const sf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const CLI::RequiredError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
