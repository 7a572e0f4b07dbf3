#include <complex>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "phaseamb/phaseamb.hpp"

namespace {

using phaseamb::Tolerances;

struct ToleranceFlags {
  std::optional<double> root;
  std::optional<double> pair;
  std::optional<double> nonneg;

  Tolerances resolve() const {
    Tolerances tol;
    if (root) tol.root = *root;
    if (pair) tol.pair = *pair;
    if (nonneg) tol.nonneg = *nonneg;
    return tol;
  }
};

void add_tolerance_flags(CLI::App* cmd, ToleranceFlags& flags) {
  cmd->add_option("--tol-root", flags.root, "Root residual tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-pair", flags.pair, "Mirror/conjugate matching tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-nn", flags.nonneg, "Non-negativity slack")
      ->check(CLI::PositiveNumber);
}

void emit(const std::string& output_path, const std::string& content) {
  if (output_path.empty())
    std::cout << content;
  else
    phaseamb::io::write_file(output_path, content);
}

std::string flip_units_json(const std::vector<phaseamb::FlipUnit>& units) {
  std::string out = "[";
  for (std::size_t k = 0; k < units.size(); ++k) {
    const auto& u = units[k];
    out += (k ? ",\n    {" : "\n    {");
    out += std::string("\"kind\": \"") + phaseamb::to_string(u.kind) + "\", ";
    out += "\"gamma\": " + phaseamb::io::complex_object(u.pairs.front().gamma) +
           ", ";
    out += "\"mirror\": " +
           phaseamb::io::complex_object(u.pairs.front().mirror);
    if (u.pairs.size() > 1) {
      out += ", \"gamma_conj\": " +
             phaseamb::io::complex_object(u.pairs.back().gamma);
      out += ", \"mirror_conj\": " +
             phaseamb::io::complex_object(u.pairs.back().mirror);
    }
    out += "}";
  }
  out += units.empty() ? "]" : "\n  ]";
  return out;
}

int run_analyze(const std::string& input, const std::string& output,
                const Tolerances& tol) {
  const phaseamb::Signal x = phaseamb::io::read_signal(input, tol);
  const auto a = phaseamb::autocorrelation(x, tol);
  const int n_sup = x.support_length();

  std::vector<std::complex<double>> zeros;
  std::vector<phaseamb::FlipUnit> units;
  if (n_sup >= 2) {
    zeros = phaseamb::zeros_of_signal(x, tol);
    units = phaseamb::pair_roots(
        phaseamb::find_roots(phaseamb::AssociatedPolynomial(a), tol), tol);
  }
  int flippable = 0;
  for (const auto& u : units) flippable += u.flippable() ? 1 : 0;

  std::string out = "{\n";
  out += "  \"support_length\": " + std::to_string(n_sup) + ",\n";
  out += "  \"offset\": " + std::to_string(x.offset()) + ",\n";
  out += "  \"autocorrelation\": {\"coeffs\": " +
         phaseamb::io::double_array(a.coeffs()) + "},\n";
  out += "  \"signal_zeros\": " + phaseamb::io::zeros_array(zeros) + ",\n";
  out += "  \"flip_units\": " + flip_units_json(units) + ",\n";
  out += "  \"flippable_units\": " + std::to_string(flippable) + "\n";
  out += "}\n";
  emit(output, out);
  return 0;
}

int run_enumerate(const std::string& input, const std::string& output,
                  const std::string& csv_output, bool nonneg_only,
                  const Tolerances& tol) {
  const auto j = phaseamb::io::load_json(input);
  std::optional<phaseamb::Autocorrelation> a;
  if (j.is_object() && j.contains("values"))
    a = phaseamb::autocorrelation(phaseamb::io::signal_from_json(j, tol), tol);
  else
    a = phaseamb::io::autocorrelation_from_json(j, tol);

  auto report = phaseamb::enumerate_solutions(*a, tol);
  if (nonneg_only) {
    std::vector<phaseamb::SolutionClass> kept;
    for (auto& s : report.solutions)
      if (s.nonnegative) kept.push_back(std::move(s));
    report.solutions = std::move(kept);
  }
  emit(output, phaseamb::io::to_json(report));
  if (!csv_output.empty())
    phaseamb::io::write_file(csv_output,
                             phaseamb::io::solutions_csv(report, nonneg_only));
  return 0;
}

int run_region(const std::string& input, const std::string& output,
               const std::string& raster, const std::string& raster_output,
               const Tolerances& tol) {
  const auto fixed = phaseamb::io::read_zeros(input);
  const auto region = phaseamb::feasible_region(fixed, tol);
  emit(output, phaseamb::io::to_json(region));
  if (!raster.empty()) {
    double re_min, re_max, im_min, im_max, step;
    char c1, c2, c3, c4;
    std::istringstream ss(raster);
    if (!(ss >> re_min >> c1 >> re_max >> c2 >> im_min >> c3 >> im_max >> c4 >>
          step) ||
        c1 != ',' || c2 != ',' || c3 != ',' || c4 != ',')
      throw std::runtime_error(
          "--raster expects \"re_min,re_max,im_min,im_max,step\"");
    const std::string csv =
        phaseamb::io::raster_csv(region, re_min, re_max, im_min, im_max, step);
    if (raster_output.empty())
      std::cout << csv;
    else
      phaseamb::io::write_file(raster_output, csv);
  }
  return 0;
}

int run_generate(int support_length, const std::string& mode,
                 std::uint64_t seed, const std::string& output,
                 const Tolerances& tol) {
  phaseamb::GenSpec spec;
  spec.support_length = support_length;
  spec.seed = seed;
  if (mode == "max-ambiguous")
    spec.mode = phaseamb::GenMode::MaxAmbiguous;
  else if (mode == "unique")
    spec.mode = phaseamb::GenMode::Unique;
  else
    throw std::runtime_error("--mode must be max-ambiguous or unique");
  const phaseamb::Signal x = (spec.mode == phaseamb::GenMode::MaxAmbiguous)
                                 ? phaseamb::gen_max_ambiguous(spec, tol)
                                 : phaseamb::gen_unique(spec, tol);
  emit(output, phaseamb::io::to_json(x));
  return 0;
}

int run_perturb(const std::string& input, double delta, int trials,
                std::uint64_t seed, const std::string& output,
                const Tolerances& tol) {
  const phaseamb::Signal x = phaseamb::io::read_signal(input, tol);
  const auto study = phaseamb::perturb_study(x, delta, trials, seed, tol);
  emit(output, phaseamb::io::perturb_csv(study));
  return 0;
}

struct PropertyChecks {
  int failures = 0;

  void report(const std::string& name, bool pass, const std::string& detail) {
    if (pass) {
      std::cout << "PASS " << name << "\n";
    } else {
      ++failures;
      std::cout << "FAIL " << name << (detail.empty() ? "" : ": " + detail)
                << "\n";
    }
  }
};

int run_verify(const std::string& input, int samples, const Tolerances& tol) {
  const auto j = phaseamb::io::load_json(input);
  std::optional<phaseamb::Signal> x;
  std::optional<phaseamb::Autocorrelation> a;
  if (j.is_object() && j.contains("values")) {
    x = phaseamb::io::signal_from_json(j, tol);
    a = phaseamb::autocorrelation(*x, tol);
  } else {
    a = phaseamb::io::autocorrelation_from_json(j, tol);
  }

  PropertyChecks checks;
  const double two_pi = 2.0 * std::numbers::pi;

  if (x) {
    checks.report("endpoints-nonzero-energy-positive",
                  (*a)[0] > 0.0 && x->values().front() != 0.0 &&
                      x->values().back() != 0.0,
                  "");
    {
      bool ok = true;
      double worst = 0.0;
      const double limit = tol.eval * (1.0 + a->evaluate(0.0));
      for (int k = 0; k < samples; ++k) {
        const double w = two_pi * k / samples;
        const double d =
            std::abs(phaseamb::fourier_intensity(*x, w) - a->evaluate(w));
        worst = std::max(worst, d);
        if (d > limit) ok = false;
      }
      checks.report("intensity-matches-autocorrelation", ok,
                    "max deviation " + phaseamb::io::format_double(worst));
    }
    {
      const auto a_shift =
          phaseamb::autocorrelation(phaseamb::shift(*x, 3), tol);
      const auto a_refl =
          phaseamb::autocorrelation(phaseamb::reflect(*x), tol);
      bool ok = true;
      for (int n = 0; n < a->support_length(); ++n) {
        if (std::abs(a_shift[n] - (*a)[n]) > tol.eval * (*a)[0]) ok = false;
        if (std::abs(a_refl[n] - (*a)[n]) > tol.eval * (*a)[0]) ok = false;
      }
      checks.report("autocorrelation-shift-reflect-invariant", ok, "");
    }
    {
      const auto canon = phaseamb::canonicalize(*x);
      const bool idem = phaseamb::canonicalize(canon) == canon;
      const bool orbit =
          phaseamb::canonicalize(phaseamb::shift(phaseamb::reflect(*x), 5)) ==
          canon;
      checks.report("canonicalize-idempotent-orbit-constant", idem && orbit,
                    "");
    }
  }

  if (a->support_length() >= 2) {
    const phaseamb::AssociatedPolynomial poly(*a);
    std::vector<std::complex<double>> roots;
    try {
      roots = phaseamb::find_roots(poly, tol);
      checks.report("roots-within-residual-bound", true, "");
    } catch (const phaseamb::Error& e) {
      checks.report("roots-within-residual-bound", false, e.what());
      return 1;
    }
    {
      bool reflection = true;
      bool conjugation = true;
      for (const auto& g : roots) {
        const auto target = 1.0 / std::conj(g);
        double best_r = 1e300, best_c = 1e300;
        for (const auto& d : roots) {
          best_r = std::min(best_r, std::abs(d - target));
          best_c = std::min(best_c, std::abs(d - std::conj(g)));
        }
        const double g2 = std::abs(g) * std::abs(g);
        if (best_r > tol.pair * std::max(1.0, 1.0 / g2)) reflection = false;
        if (best_c > tol.pair * std::max(1.0, std::abs(g))) conjugation = false;
      }
      checks.report("root-reflection-closure", reflection, "");
      checks.report("root-conjugation-closure", conjugation, "");
    }
    try {
      const auto units = phaseamb::pair_roots(roots, tol);
      int zero_total = 0;
      for (const auto& u : units) zero_total += u.zero_count();
      checks.report("pairing-covers-all-zeros",
                    zero_total == a->support_length() - 1, "");
    } catch (const phaseamb::Error& e) {
      checks.report("pairing-covers-all-zeros", false, e.what());
    }
  }

  {
    const auto report = phaseamb::enumerate_solutions(*a, tol);
    bool intensity = true;
    bool descartes = true;
    for (const auto& s : report.solutions) {
      if (!phaseamb::verify_solution(s.signal, *a, tol)) intensity = false;
      if (s.nonnegative) {
        for (const auto& z : s.chosen_zeros)
          if (z.imag() == 0.0 && z.real() > tol.pair) descartes = false;
      }
    }
    checks.report("solutions-share-intensity", intensity, "");
    checks.report("nonnegative-classes-have-nonpositive-real-zeros", descartes,
                  "");
    checks.report(
        "class-counts-within-bound",
        report.nonnegative_classes <= report.total_classes &&
            static_cast<std::uint64_t>(report.total_classes) <=
                report.upper_bound,
        "");
  }

  return checks.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phaseamb: ambiguity analysis for one-dimensional "
               "finite-support phase retrieval"};
  app.require_subcommand(1);

  std::string input, output, csv_output, raster, raster_output, mode;
  int samples = 512;
  int support_length = 4;
  int trials = 100;
  double delta = 1e-4;
  std::uint64_t seed = 0;
  bool nonneg_only = false;
  ToleranceFlags tol_flags;

  auto* analyze = app.add_subcommand(
      "analyze", "Signal -> autocorrelation, zeros, flip-unit summary");
  analyze->add_option("--input", input, "Signal JSON")->required();
  analyze->add_option("--output", output, "Output path (default stdout)");
  analyze->add_option("--samples", samples, "Spectrum sample count");
  add_tolerance_flags(analyze, tol_flags);

  auto* enumerate = app.add_subcommand(
      "enumerate", "Signal or autocorrelation -> solution class report");
  enumerate->add_option("--input", input, "Signal or autocorrelation JSON")
      ->required();
  enumerate->add_option("--output", output, "Report JSON path (default stdout)");
  enumerate->add_option("--solutions-csv", csv_output,
                        "Also write the solutions as CSV");
  enumerate->add_flag("--nonneg-only", nonneg_only,
                      "Emit only non-negative solutions");
  add_tolerance_flags(enumerate, tol_flags);

  auto* region = app.add_subcommand(
      "region", "Fixed zeros -> feasible region for the free pair");
  region->add_option("--input", input, "Zero-set JSON")->required();
  region->add_option("--output", output, "Region JSON path (default stdout)");
  region->add_option("--raster", raster,
                     "Rasterize: \"re_min,re_max,im_min,im_max,step\"");
  region->add_option("--raster-output", raster_output,
                     "Raster CSV path (default stdout)");
  add_tolerance_flags(region, tol_flags);

  auto* generate = app.add_subcommand(
      "generate", "Construct an instance with a prescribed ambiguity count");
  generate->add_option("--N", support_length, "Support length")
      ->required()
      ->check(CLI::PositiveNumber);
  generate->add_option("--mode", mode, "max-ambiguous or unique")->required();
  generate->add_option("--seed", seed, "Random seed");
  generate->add_option("--output", output, "Signal JSON path (default stdout)");
  add_tolerance_flags(generate, tol_flags);

  auto* perturb = app.add_subcommand(
      "perturb", "Perturbation study around a base signal");
  perturb->add_option("--input", input, "Signal JSON")->required();
  perturb->add_option("--delta", delta, "Componentwise noise amplitude")
      ->required();
  perturb->add_option("--trials", trials, "Number of trials")
      ->check(CLI::NonNegativeNumber);
  perturb->add_option("--seed", seed, "Random seed");
  perturb->add_option("--output", output, "CSV path (default stdout)");
  add_tolerance_flags(perturb, tol_flags);

  auto* verify = app.add_subcommand(
      "verify", "Run the invariant suite on a signal or autocorrelation");
  verify->add_option("--input", input, "Signal or autocorrelation JSON")
      ->required();
  verify->add_option("--samples", samples, "Spectrum sample count");
  add_tolerance_flags(verify, tol_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const Tolerances tol = tol_flags.resolve();
  try {
    if (app.got_subcommand(analyze)) return run_analyze(input, output, tol);
    if (app.got_subcommand(enumerate))
      return run_enumerate(input, output, csv_output, nonneg_only, tol);
    if (app.got_subcommand(region))
      return run_region(input, output, raster, raster_output, tol);
    if (app.got_subcommand(generate))
      return run_generate(support_length, mode, seed, output, tol);
    if (app.got_subcommand(perturb))
      return run_perturb(input, delta, trials, seed, output, tol);
    if (app.got_subcommand(verify)) return run_verify(input, samples, tol);
  } catch (const phaseamb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
