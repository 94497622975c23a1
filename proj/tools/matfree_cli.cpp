// Command-line front end: moment tables, cross-route checks, finite-size
// convergence sweeps, weighted walk sums, and density grids for block
// models. See README.md for the model file format.

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matfree/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"moments and distributions of random pseudomatrices"};
  app.require_subcommand(1);

  matfree::cli::Options opt;
  std::string routes_csv, sizes_csv;

  auto add_common = [&](CLI::App* sub, bool needs_model = true) {
    if (needs_model) sub->add_option("--model", opt.model_path, "model JSON file")->required();
    sub->add_option("--order", opt.order, "maximum moment order (default 12)");
    sub->add_option("--profile", opt.profile, "rational|f64 (default rational)");
    sub->add_option("--out", opt.out_dir, "output directory (default .)");
  };

  auto* moments = app.add_subcommand("moments", "moment tables per route and law");
  add_common(moments);
  moments->add_option("--routes", routes_csv,
                      "comma list of combinatorial,continued_fraction,fock,walks,closed_form");
  moments->add_option("--fock-sizes", sizes_csv, "comma list of finite sizes for the fock route");

  auto* crosscheck = app.add_subcommand("crosscheck", "cross-route discrepancy report");
  add_common(crosscheck);
  crosscheck->add_option("--routes", routes_csv, "comma list of routes");
  crosscheck->add_option("--fock-sizes", sizes_csv, "comma list of finite sizes");

  auto* fock = app.add_subcommand("fock-converge", "finite-size moments against the limits");
  add_common(fock);
  fock->add_option("--fock-sizes", sizes_csv, "comma list of finite sizes")->required();

  auto* walks = app.add_subcommand("walks", "weighted walk and Catalan path sums (2 blocks)");
  add_common(walks);

  auto* density = app.add_subcommand("density", "density grid by Stieltjes inversion");
  add_common(density);
  density->add_option("--law", opt.law, "mu|mu0|mu_jJ|mu_ijIJ (default mu)");
  density->add_option("--eps", opt.eps, "inversion offset (default 1e-3)");
  density->add_option("--depth", opt.depth, "continued fraction depth (default max(40, order/2))");
  density->add_option("--grid", opt.grid, "lo:hi:steps (default -4:4:800)");
  density->add_flag("--richardson", opt.richardson, "first-order bias cancellation in eps");

  CLI11_PARSE(app, argc, argv);

  auto split_csv = [](const std::string& s) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (pos < s.size()) {
      size_t c = s.find(',', pos);
      if (c == std::string::npos) c = s.size();
      if (c > pos) out.push_back(s.substr(pos, c - pos));
      pos = c + 1;
    }
    return out;
  };
  opt.routes = split_csv(routes_csv);
  for (const auto& tok : split_csv(sizes_csv)) opt.fock_sizes.push_back(std::stoi(tok));

  for (auto* sub : {moments, crosscheck, fock, walks, density})
    if (sub->parsed()) opt.command = sub->get_name();

  return matfree::cli::run(opt);
}
