#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rodsed/config.hpp"
#include "rodsed/error.hpp"
#include "rodsed/experiment.hpp"
#include "rodsed/indicator.hpp"
#include "rodsed/snapshot.hpp"
#include "rodsed/study.hpp"

using namespace rodsed;

namespace {

struct CommonOptions {
  std::string preset;
  std::string config_file;
  std::vector<std::pair<std::string, std::string>> overrides;  // key, value in flag order
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--preset", o.preset, "shear-accuracy | shear-adaptive | droplet-2d");
  cmd->add_option("--config", o.config_file, "flat key = value file; flags override it")->check(CLI::ExistingFile);
  auto flag = [&](const char* name, const char* key, const char* help) {
    cmd->add_option_function<std::string>(
        name, [&o, key](const std::string& v) { o.overrides.emplace_back(key, v); }, help);
  };
  flag("--grid", "grid", "cells per direction");
  flag("--order", "order", "moment order N");
  flag("--t-end", "t_end", "final time");
  flag("--cfl", "cfl", "Courant number in (0, 1]");
  flag("--limiter", "limiter", "mc | minmod | superbee | vanleer | none");
  flag("--out", "out", "output directory");
  cmd->add_option("--set", o.sets, "any config key, as key=value (repeatable)");
}

ExperimentConfig build_config(const CommonOptions& o) {
  std::string name = o.preset;
  if (name.empty() && !o.config_file.empty()) name = preset_in_config_file(o.config_file);
  if (name.empty()) throw Error(ErrorKind::config, "no preset given (use --preset or a 'preset' key in --config)");
  ExperimentConfig c = preset_config(parse_preset(name));
  if (!o.config_file.empty()) apply_config_file(c, o.config_file);
  for (const auto& [k, v] : o.overrides) apply_setting(c, k, v);
  for (const std::string& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::config, "--set expects key=value, got '" + s + "'");
    if (s.substr(0, eq) == "preset") throw Error(ErrorKind::config, "use --preset to choose the preset");
    apply_setting(c, s.substr(0, eq), s.substr(eq + 1));
  }
  c.validate();
  return c;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

int cmd_run(const CommonOptions& o) {
  const ExperimentConfig c = build_config(o);
  const RunSummary s = run_experiment(c, std::cout);
  if (s.stats.relative_mass_drift() > 1e-11)
    std::cerr << "warning: relative mass drift " << s.stats.relative_mass_drift() << " exceeds 1e-11\n";
  return 0;
}

int cmd_eoc(const CommonOptions& o, const std::string& grids_text, int ref, const std::string& orders_text,
            int ref_order, const std::string& out) {
  ExperimentConfig c = build_config(o);
  if (c.two_dimensional()) throw Error(ErrorKind::config, "eoc studies are defined for the 1D presets");
  const std::vector<int> grids = parse_int_list(grids_text);
  std::vector<int> orders = orders_text.empty() ? std::vector<int>{c.order} : parse_int_list(orders_text);
  for (int n : grids)
    if (n <= 0 || (n & (n - 1)) != 0 || ref % n != 0)
      throw Error(ErrorKind::config, "grids must be powers of two nested in the reference grid");

  std::ostringstream table;
  table << "order,reference_order,cells,linf_error,eoc\n";
  std::vector<double> shared_reference;
  for (int order : orders) {
    c.order = order;
    const int k = ref_order > 0 ? ref_order : order;
    std::cerr << "order " << order << ": reference " << ref << " cells at order " << k << "\n";
    if (ref_order <= 0 || shared_reference.empty()) {
      auto r = shear_density(c, ref, k);
      if (ref_order > 0) shared_reference = r;
      const auto rows = accuracy_study(c, grids, r);
      for (const auto& row : rows)
        table << order << ',' << k << ',' << row.cells << ',' << fmt(row.linf) << ','
              << (row.eoc ? fmt(*row.eoc) : std::string()) << '\n';
    } else {
      for (const auto& row : accuracy_study(c, grids, shared_reference))
        table << order << ',' << k << ',' << row.cells << ',' << fmt(row.linf) << ','
              << (row.eoc ? fmt(*row.eoc) : std::string()) << '\n';
    }
  }
  std::cout << table.str();
  if (!out.empty()) {
    std::ofstream f(out);
    if (!(f << table.str())) throw Error(ErrorKind::io, "cannot write '" + out + "'");
  }
  return 0;
}

std::vector<Threshold> parse_thresholds(const std::string& text) {
  std::vector<Threshold> th;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::config, "threshold '" + item + "' is not level:order");
    const auto level = parse_real_list(item.substr(0, colon));
    const auto order = parse_int_list(item.substr(colon + 1));
    if (level.size() != 1 || order.size() != 1) throw Error(ErrorKind::config, "threshold '" + item + "' is not level:order");
    th.push_back({level[0], order[0]});
  }
  return th;
}

int cmd_indicate(const std::string& snapshot, const std::string& out, const std::string& thresholds, double min_width,
                 int base_order) {
  const Snapshot s = read_snapshot(snapshot);
  std::ostringstream csv;
  if (const auto* s1 = std::get_if<Snapshot1D>(&s)) {
    const auto ind = residuals_1d(s1->moments, s1->velocity);
    std::cout << "t = " << s1->time << "  max|R_2N+2| = " << fmt(ind.max_even()) << "  max|R_2N+3| = "
              << fmt(ind.max_odd()) << "  total entropy = " << fmt(total_entropy(s1->moments)) << '\n';
    csv << "x,R_2N+2,R_2N+3\n";
    const Grid1D& g = s1->moments.grid();
    for (int i = 0; i < g.cells; ++i) csv << g.center(i) << ',' << fmt(ind.r_even[i]) << ',' << fmt(ind.r_odd[i]) << '\n';
    if (!thresholds.empty()) {
      const auto map = suggest_resolution_map(ind, g, parse_thresholds(thresholds), MapOptions{base_order, min_width});
      std::cout << "suggested regions =";
      const char* sep = " ";
      for (const Region& r : map.regions()) {
        std::cout << sep << r.a << ':' << r.b << ':' << r.order;
        sep = ",";
      }
      std::cout << '\n';
    }
  } else {
    const auto& s2 = std::get<Snapshot2D>(s);
    if (!thresholds.empty()) throw Error(ErrorKind::config, "resolution maps are only suggested for 1D snapshots");
    const auto ind = residuals_2d(s2.moments, s2.velocity);
    std::cout << "t = " << s2.time << "  max|R_2N+2| = " << fmt(ind.max_even()) << "  max|R_2N+3| = "
              << fmt(ind.max_odd()) << "  total entropy = " << fmt(total_entropy(s2.moments)) << '\n';
    csv << "x,z,R_2N+2,R_2N+3\n";
    const Grid2D& g = s2.moments.grid();
    for (int j = 0; j < g.nz; ++j)
      for (int i = 0; i < g.nx; ++i)
        csv << g.x_center(i) << ',' << g.z_center(j) << ',' << fmt(ind.r_even[g.index(i, j)]) << ','
            << fmt(ind.r_odd[g.index(i, j)]) << '\n';
  }
  if (!out.empty()) {
    std::ofstream f(out);
    if (!(f << csv.str())) throw Error(ErrorKind::io, "cannot write '" + out + "'");
  }
  return 0;
}

int cmd_rp(const RiemannExperiment& e, const std::string& limiter, bool with_reference, const std::string& out) {
  RiemannExperiment x = e;
  x.wave.limiter = parse_limiter(limiter);
  const MomentField1D q = run_generalised_rp_experiment(x);
  const auto rho = q.rho_profile();
  std::vector<double> ref;
  if (with_reference) {
    KineticReference k;
    k.wxDr_left = x.wxDr_left;
    k.wxDr_right = x.wxDr_right;
    k.t_end = x.t_end;
    k.x_left = x.x_left;
    k.x_right = x.x_right;
    k.cells = x.cells;
    ref = kinetic_reference_1d(k);
    std::cout << "N = " << x.n_left << " | M = " << x.n_right << ", t = " << x.t_end
              << ": max |rho - rho_kinetic| = " << fmt(linf_distance(rho, ref)) << '\n';
  }
  std::ostringstream csv;
  csv << (with_reference ? "x,rho,rho_kinetic\n" : "x,rho\n");
  for (int i = 0; i < q.cells(); ++i) {
    csv << q.grid().center(i) << ',' << fmt(rho[i]);
    if (with_reference) csv << ',' << fmt(ref[i]);
    csv << '\n';
  }
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(out);
    if (!(f << csv.str())) throw Error(ErrorKind::io, "cannot write '" + out + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rodsed: moment models for sedimenting rod-like particles"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  auto* run = app.add_subcommand("run", "run a preset experiment and write snapshots");
  add_common(run, run_opts);

  CommonOptions eoc_opts;
  std::string grids = "512,1024,2048", orders;
  int ref = 8192, ref_order = 0;
  std::string eoc_out;
  auto* eoc_cmd = app.add_subcommand("eoc", "accuracy study against a fine self-reference");
  add_common(eoc_cmd, eoc_opts);
  eoc_cmd->add_option("--grids", grids, "comma-separated coarse grids")->capture_default_str();
  eoc_cmd->add_option("--ref", ref, "reference grid")->capture_default_str();
  eoc_cmd->add_option("--orders", orders, "comma-separated orders (default: the configured order)");
  eoc_cmd->add_option("--ref-order", ref_order, "reference order (default: same as each coarse order)");
  eoc_cmd->add_option("--csv", eoc_out, "also write the table to this file");

  std::string snapshot, ind_out, thresholds;
  double min_width = 0.0;
  int base_order = 1;
  auto* ind = app.add_subcommand("indicate", "modelling-error indicators of a snapshot");
  ind->add_option("--snapshot", snapshot, "moment CSV written by 'run'")->required()->check(CLI::ExistingFile);
  ind->add_option("--out", ind_out, "write indicator fields to this CSV");
  ind->add_option("--thresholds", thresholds, "level:order,... (descending levels) to suggest a 1D resolution map");
  ind->add_option("--min-width", min_width, "minimum region width of the suggested map");
  ind->add_option("--base-order", base_order, "order where no threshold is exceeded")->capture_default_str();

  RiemannExperiment rp_e;
  std::string rp_limiter = "mc", rp_out;
  bool rp_reference = false;
  auto* rp = app.add_subcommand("rp", "generalised Riemann problem between steady states");
  rp->add_option("--nleft", rp_e.n_left, "order left of x = 0")->capture_default_str();
  rp->add_option("--nright", rp_e.n_right, "order right of x = 0")->capture_default_str();
  rp->add_option("--t", rp_e.t_end, "final time")->capture_default_str();
  rp->add_option("--wxdr-left", rp_e.wxDr_left, "wx/D_r of the left steady state")->capture_default_str();
  rp->add_option("--wxdr-right", rp_e.wxDr_right, "wx/D_r of the right steady state")->capture_default_str();
  rp->add_option("--cells", rp_e.cells, "cells on [-10, 10]")->capture_default_str();
  rp->add_option("--cfl", rp_e.cfl, "Courant number")->capture_default_str();
  rp->add_option("--limiter", rp_limiter, "mc | minmod | superbee | vanleer | none")->capture_default_str();
  rp->add_flag("--reference", rp_reference, "add the kinetic reference density and report the distance");
  rp->add_option("--out", rp_out, "CSV file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*eoc_cmd) return cmd_eoc(eoc_opts, grids, ref, orders, ref_order, eoc_out);
    if (*ind) return cmd_indicate(snapshot, ind_out, thresholds, min_width, base_order);
    if (*rp) return cmd_rp(rp_e, rp_limiter, rp_reference, rp_out);
  } catch (const Error& e) {
    std::cerr << "rodsed: " << e.what() << '\n';
    return e.kind() == ErrorKind::config ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "rodsed: internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
