// Command-line front end.
//
//   zygmund_cli classify <family> [--p P] [--s S]
//   zygmund_cli kernel <family> --beta B --n N [--samples M] [--check]
//   zygmund_cli error <family> --p P --beta B --s S --n N [--method fejer]
//   zygmund_cli sweep <config> [--threads T] [--output-dir DIR]
//   zygmund_cli verify <config> [--threads T] [--output-dir DIR]
//
// Exit codes: 0 ok, 1 verification failed, 2 usage/config/IO, 3 numerical.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "zygmund/zygmund.hpp"

namespace {

using namespace zygmund;

int run_classify(std::string const& descriptor, double p, double s) {
  PsiFamily const family = PsiFamily::parse(descriptor);
  FamilyInvariants const inv = family.check_invariants();
  std::cout << "family " << family.descriptor() << '\n';
  std::cout << "  positive " << (inv.positive ? "yes" : "no") << ", non-increasing "
            << (inv.nonincreasing ? "yes" : "no") << ", convex " << (inv.convex ? "yes" : "no")
            << ", decays " << (inv.decays ? "yes (below 1e-3 psi(1) by t=" + format_number(inv.decay_point) + ")" : "no")
            << '\n';
  ClassSpec const spec(family, 0.0, p, s);
  print_conditions(std::cout, spec, conditions_report(spec));

  std::vector<std::size_t> const grid = geometric_grid(8, 4.0, 6);
  RatioRelationsReport const rel = ratio_relations(spec, grid);
  std::cout << "  ratio relations over n=8..32768 (x4):\n";
  if (p > 1.0)
    std::cout << "    psi^p'(n) n^(p'-1) / tail: " << to_string(rel.pprime.trend) << " in ["
              << format_number(rel.pprime.min) << ", " << format_number(rel.pprime.max) << "]\n";
  std::cout << "    psi(n) n / sum_{k>=n} psi: " << to_string(rel.l1.trend) << " in ["
            << format_number(rel.l1.min) << ", " << format_number(rel.l1.max) << "]\n";
  return 0;
}

int run_kernel(std::string const& descriptor, double beta, std::size_t n, std::size_t samples, double tol,
               bool check) {
  PsiFamily const family = PsiFamily::parse(descriptor);
  write_kernel_samples(std::cout, {family, beta, n}, samples, tol);
  if (!check) return 0;
  SupTailReport const r = sup_tail_inequalities(family, n, 64);
  auto const line = [](char const* label, SupTailCheck const& c) {
    if (!c.applicable) {
      std::cout << "# " << label << ": not applicable\n";
      return;
    }
    std::cout << "# " << label << ": sup " << format_sci(c.grid_sup) << " at t=" << format_number(c.argmax)
              << " bound " << format_sci(c.bound) << (c.pass ? " holds" : " VIOLATED") << '\n';
  };
  line("cosine tail vs sum psi", r.cosine);
  line("sine tail vs (pi+2) psi(n) n", r.sine);
  return 0;
}

int run_error(std::string const& descriptor, double p, double beta, double s, std::size_t n,
              std::string const& method, double tol) {
  ClassSpec::Method m;
  if (method == "zygmund") m = ClassSpec::Method::zygmund;
  else if (method == "fejer") m = ClassSpec::Method::fejer;
  else throw InvalidArgument("method must be zygmund or fejer");
  ClassSpec const spec(PsiFamily::parse(descriptor), beta, p, s, m);
  ErrorConfig cfg;
  cfg.tol = tol;
  ErrorBracket const b = error_bracket(spec, n, cfg);
  std::cout << bracket_csv_header << '\n';
  write_bracket_row(std::cout, spec, n, b);
  BoundValue const bound = theory_bound(spec, n);
  std::cout << "# order " << to_string(bound.variant) << " = " << format_sci(bound.value) << ", U/B "
            << format_number(b.upper / bound.value) << ", L/B " << format_number(b.lower / bound.value) << '\n';
  if (bound.parity_warning) std::cout << "# warning: cos(beta pi/2) is nearly zero for a non-integer beta\n";
  return 0;
}

int run_config(std::string const& path, bool verify_mode, std::size_t threads, std::string const& output_dir) {
  ExperimentConfig cfg = load_config(path);
  if (threads > 0) cfg.parallelism = threads;
  if (!output_dir.empty()) cfg.output_dir = output_dir;
  if (verify_mode) return verify(cfg, std::cout, std::cerr);
  if (cfg.specs.empty()) {
    std::cerr << "warning: config has no [spec] blocks\n";
    return 0;
  }
  auto const reports = run_sweep(cfg);
  if (!cfg.output_dir.empty()) emit_outputs(reports, cfg.output_dir);
  print_summary(std::cout, reports);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zygmund-sum approximation errors on convolution classes"};
  app.require_subcommand(1);

  std::string family, method = "zygmund", config, output_dir;
  double p = 2.0, s = 1.0, beta = 0.0, tol = 1e-6;
  std::size_t n = 1, samples = 256, threads = 0;
  bool check = false;

  auto* classify = app.add_subcommand("classify", "alpha, GM+/GA+ and hypothesis checks for a family");
  classify->add_option("family", family, "e.g. power:r=1.5, powerlog:p=2,gamma=1.2,K=4, table:@file")->required();
  classify->add_option("--p", p, "class exponent p >= 1");
  classify->add_option("--s", s, "Zygmund exponent s > 0");

  auto* kernel = app.add_subcommand("kernel", "sample the residual kernel on [-pi, pi)");
  kernel->add_option("family", family)->required();
  kernel->add_option("--beta", beta)->required();
  kernel->add_option("--n", n, "first index of the tail")->required();
  kernel->add_option("--samples", samples);
  kernel->add_option("--tol", tol, "absolute accuracy per sample");
  kernel->add_flag("--check", check, "also test the sup-norm tail inequalities");

  auto* error = app.add_subcommand("error", "upper/lower bracket of the class error");
  error->add_option("family", family)->required();
  error->add_option("--p", p)->required();
  error->add_option("--beta", beta)->required();
  error->add_option("--s", s)->required();
  error->add_option("--n", n)->required();
  error->add_option("--method", method, "zygmund or fejer");
  error->add_option("--tol", tol);

  auto* sweep = app.add_subcommand("sweep", "run the n-sweeps of a config file");
  auto* verify_cmd = app.add_subcommand("verify", "run the sweeps and judge them");
  for (auto* sub : {sweep, verify_cmd}) {
    sub->add_option("config", config)->required();
    sub->add_option("--threads", threads, "worker threads (default: config, then ZYGMUND_THREADS)");
    sub->add_option("--output-dir", output_dir);
  }

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    int const code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*classify) return run_classify(family, p, s);
    if (*kernel) return run_kernel(family, beta, n, samples, tol, check);
    if (*error) return run_error(family, p, beta, s, n, method, tol);
    if (*sweep) return run_config(config, false, threads, output_dir);
    if (*verify_cmd) return run_config(config, true, threads, output_dir);
  } catch (zygmund::NumericalError const& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (zygmund::Error const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
