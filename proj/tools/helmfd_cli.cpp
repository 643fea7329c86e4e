#include <helmfd/checks.hpp>
#include <helmfd/experiments.hpp>
#include <helmfd/pollution.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using namespace helmfd;

namespace {

// "a..b" or a single level.
std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int j = std::stoi(s);
      return {j, j};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw ConfigError("bad J range '" + s + "', expected a..b");
  }
}

void print_rows(const std::vector<ResultRow>& rows) {
  std::printf("%3s %12s %9s %12s %7s %12s %7s %10s\n", "J", "h", "ppw", "err_l2", "order", "err_inf", "order", "residual");
  for (const auto& r : rows) {
    std::printf("%3d %12.5e %9.2f %12.5e", r.J, r.h, r.ppw, r.err_l2);
    r.order_l2 ? std::printf(" %7.2f", *r.order_l2) : std::printf(" %7s", "");
    std::printf(" %12.5e", r.err_inf);
    r.order_inf ? std::printf(" %7.2f", *r.order_inf) : std::printf(" %7s", "");
    std::printf(" %10.2e\n", r.residual);
  }
}

int derive(const std::string& out) {
  const InteriorFit in = fit_interior_params();
  const SideFit side = fit_impedance_side_params();
  const auto pub = published_interior_params();
  const auto pub_side = published_impedance_side_params();
  std::ofstream f(out);
  if (!f) throw IoError("cannot open '" + out + "' for writing");
  char buf[160];
  f << "name,fitted,published,units_2^-20\n";
  auto line = [&](const std::string& name, Real a, Real b) {
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.1f\n", name.c_str(), a, b, std::ldexp(a - b, 20));
    f << buf;
  };
  for (int j = 0; j < 11; ++j) line("interior_c" + std::to_string(j + 1), in.params[j], pub[j]);
  for (int j = 0; j < 8; ++j) line("impedance_side_c" + std::to_string(j + 1), side.params[j], pub_side[j]);
  std::snprintf(buf, sizeof buf, "# interior objective fitted %.6e published %.6e\n", in.objective_fitted,
                in.objective_published);
  f << buf;
  std::snprintf(buf, sizeof buf, "# impedance side objective fitted %.6e published %.6e\n", side.objective_fitted,
                side.objective_published);
  f << buf;
  std::cout << "wrote " << out << '\n';
  return 0;
}

int consistency() {
  install_corner_deriver();
  int failed = 0;
  for (const auto& r : check::slope_suite()) {
    std::printf("%-4s %-46s slope %5.2f (>= %.1f)\n", r.pass() ? "PASS" : "FAIL", r.name.c_str(), r.slope, r.threshold);
    failed += !r.pass();
  }
  return failed ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-order compact finite differences for Helmholtz problems with interfaces"};
  app.set_config("--config", "", "read options from a TOML/INI file");
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string range, out, dump;
  auto* run_cmd = app.add_subcommand("run", "run a catalog example and write its convergence table");
  run_cmd->add_option("--example", cfg.example, "ex1..ex4 or iface1..iface4")->required();
  run_cmd->add_option("--J", range, "grid levels a..b with h = (l2 - l1) / 2^J");
  run_cmd->add_option("--k", cfg.k, "wavenumber, or k+ k- for interface examples");
  run_cmd->add_option("--angles", cfg.angles, "plane-wave angles for ex1")->check(CLI::PositiveNumber);
  run_cmd->add_option("--alpha", cfg.alpha, "alpha of ex2/ex3");
  run_cmd->add_option("--beta", cfg.beta, "beta of ex2/ex3");
  run_cmd->add_option("--K", cfg.K, "K of iface3");
  run_cmd->add_flag("--general", cfg.force_general, "use the general irregular scheme even when k+ = k-");
  run_cmd->add_flag("--allow-large", cfg.allow_large, "skip the memory guard on J");
  run_cmd->add_option("--out", out, "CSV output path");
  run_cmd->add_option("--dump-matrix", dump, "write the matrix of the first level as row col re im triplets");

  std::string coeff_out = "coefficients.csv";
  auto* derive_cmd = app.add_subcommand("derive-coefficients", "refit the pollution-minimizing stencil parameters");
  derive_cmd->add_option("--out", coeff_out, "output path");

  bool all = false;
  auto* check_cmd = app.add_subcommand("check-consistency", "run the truncation-order slope suite");
  check_cmd->add_flag("--all", all, "every stencil family")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*derive_cmd) return derive(coeff_out);
    if (*check_cmd) return consistency();
    if (!range.empty()) std::tie(cfg.J_min, cfg.J_max) = parse_range(range);
    install_corner_deriver();
    const Problem P = make_problem(cfg);
    if (!dump.empty()) {
      std::ofstream f(dump);
      if (!f) throw IoError("cannot open '" + dump + "' for writing");
      Discretization(P.op, square_grid(P.l1, P.l2, P.J_min)).write_triplets(f);
    }
    const auto rows = run(P, cfg.allow_large);
    print_rows(rows);
    if (!out.empty()) emit_csv(rows, out);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
