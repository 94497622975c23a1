#ifndef MATFREE_CLI_HPP
#define MATFREE_CLI_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "matfree/fock_collapsed.hpp"
#include "matfree/limit_law.hpp"
#include "matfree/model_io.hpp"

namespace matfree::cli {

struct Options {
  std::string command;
  std::string model_path;
  int order = 12;
  std::string profile = "rational";  // rational | f64
  std::string out_dir = ".";
  std::vector<std::string> routes;  // empty = all applicable
  std::vector<int> fock_sizes;
  double eps = 1e-3;
  int depth = 0;  // 0 = max(40, order/2)
  std::string grid = "-4:4:800";
  std::string law = "mu";
  bool richardson = false;
};

inline constexpr const char* kAllRoutes[] = {"combinatorial", "continued_fraction", "fock",
                                             "walks", "closed_form"};

template <class T>
struct MomentRow {
  std::string route;
  std::string law;
  int order;
  T value;
};

namespace detail {

inline std::filesystem::path out_file(const Options& opt, const std::string& name) {
  std::filesystem::create_directories(opt.out_dir);
  return std::filesystem::path(opt.out_dir) / name;
}

inline std::vector<double> parse_grid(const std::string& s) {
  auto c1 = s.find(':');
  auto c2 = s.find(':', c1 == std::string::npos ? std::string::npos : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw std::invalid_argument("grid: expected lo:hi:steps");
  double lo = std::stod(s.substr(0, c1));
  double hi = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
  int steps = std::stoi(s.substr(c2 + 1));
  return make_grid(lo, hi, steps);
}

template <class T>
void append_series(std::vector<MomentRow<T>>& rows, const std::string& route,
                   const std::string& law, const MomentSeries<T>& ms) {
  for (int k = 0; k <= ms.order(); ++k) rows.push_back({route, law, k, ms[k]});
}

template <class T>
std::vector<std::string> applicable_routes(const BlockModel<T>& model,
                                           const std::vector<std::string>& requested,
                                           bool have_fock_sizes) {
  std::vector<std::string> routes = requested;
  if (routes.empty()) {
    for (const char* r : kAllRoutes) routes.emplace_back(r);
    // default set: keep only what the model supports
    std::erase_if(routes, [&](const std::string& r) {
      if ((r == "walks" || r == "closed_form") && model.r != 2) return true;
      if (r == "fock" && !have_fock_sizes) return true;
      if (r == "combinatorial" && model.has_zero_diagonal()) return true;
      return false;
    });
  } else {
    for (const auto& r : routes) {
      bool known = false;
      for (const char* k : kAllRoutes) known = known || r == k;
      if (!known) throw std::invalid_argument("unknown route: " + r);
      if ((r == "walks" || r == "closed_form") && model.r != 2)
        throw std::invalid_argument("route " + r + " requires a 2-block model");
      if (r == "fock" && !have_fock_sizes)
        throw std::invalid_argument("route fock requires --fock-sizes");
    }
  }
  if (routes.empty()) throw std::invalid_argument("no applicable routes");
  return routes;
}

template <class T>
std::vector<MomentRow<T>> collect_moments(const BlockModel<T>& model, int M,
                                          const std::vector<std::string>& routes,
                                          const std::vector<int>& fock_sizes) {
  std::vector<MomentRow<T>> rows;
  SquareMat<T> b = model.B();
  for (const auto& route : routes) {
    if (route == "combinatorial") {
      append_series(rows, route, "mu", tracial_moments_combinatorial(model, M));
      append_series(rows, route, "mu0", standard_moments_combinatorial(model, M));
    } else if (route == "continued_fraction") {
      LimitFamily<T> fam = limit_family(model, M);
      append_series(rows, route, "mu", fam.mu);
      append_series(rows, route, "mu0", fam.mu0);
      for (int j = 0; j < model.r; ++j)
        append_series(rows, route, "mu_j" + std::to_string(j + 1),
                      k_to_moments(fam.muj[j], M));
      for (int i = 0; i < model.r; ++i)
        for (int j = 0; j < model.r; ++j)
          append_series(rows, route,
                        "mu_ij" + std::to_string(i + 1) + std::to_string(j + 1),
                        k_to_moments(fam.kij[i][j], M));
    } else if (route == "walks") {
      std::vector<T> mum(M + 1, T(0)), mu0m(M + 1, T(0));
      for (int k = 0; k <= M; ++k) mu0m[k] = walk_moment(weighting_mu0(b), k);
      for (int j = 0; j < model.r; ++j) {
        std::vector<T> mj(M + 1, T(0));
        for (int k = 0; k <= M; ++k) mj[k] = walk_moment(weighting_muj(b, j), k);
        for (int k = 0; k <= M; ++k) mum[k] += model.D[j] * mj[k];
        append_series(rows, route, "mu_j" + std::to_string(j + 1),
                      MomentSeries<T>(std::move(mj)));
      }
      append_series(rows, route, "mu", MomentSeries<T>(std::move(mum)));
      append_series(rows, route, "mu0", MomentSeries<T>(std::move(mu0m)));
    } else if (route == "closed_form") {
      KMatrix2<T> km = dim2_closed_forms(b(0, 0), b(0, 1), b(1, 0), b(1, 1), M);
      std::vector<T> mum(M + 1, T(0));
      for (int j = 0; j < 2; ++j) {
        MomentSeries<T> mj = k_to_moments(boolean_conv(km[0][j], km[1][j]), M);
        for (int k = 0; k <= M; ++k) mum[k] += model.D[j] * mj[k];
        append_series(rows, route, "mu_j" + std::to_string(j + 1), mj);
      }
      append_series(rows, route, "mu", MomentSeries<T>(std::move(mum)));
      append_series(rows, route, "mu0",
                    k_to_moments(boolean_conv(km[0][0], km[1][1]), M));
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          append_series(rows, route,
                        "mu_ij" + std::to_string(i + 1) + std::to_string(j + 1),
                        k_to_moments(km[i][j], M));
    } else if (route == "fock") {
      int need = M / 2 + 2;
      if (static_cast<int>(fock_sizes.size()) < need)
        throw std::invalid_argument("route fock: need at least " + std::to_string(need) +
                                    " sizes in --fock-sizes for order " + std::to_string(M));
      std::vector<T> tr = fock_extrapolated_moments(model, M, fock_sizes, StateKind::trace());
      std::vector<T> va = fock_extrapolated_moments(model, M, fock_sizes, StateKind::vacuum());
      append_series(rows, route, "mu", MomentSeries<T>(std::move(tr)));
      append_series(rows, route, "mu0", MomentSeries<T>(std::move(va)));
    }
  }
  return rows;
}

template <class T>
void write_moments_csv(const std::filesystem::path& path, const std::vector<MomentRow<T>>& rows) {
  std::ofstream out(path);
  out << "route,law,order,value\n";
  for (const auto& r : rows)
    out << r.route << "," << r.law << "," << r.order << "," << scalar_to_string(r.value) << "\n";
}

template <class T>
bool within_tolerance(const T& a, const T& b);

template <>
inline bool within_tolerance<Rational>(const Rational& a, const Rational& b) {
  return a == b;
}

template <>
inline bool within_tolerance<double>(const double& a, const double& b) {
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= 1e-9 * scale;
}

// Pairwise max discrepancy across routes over every law both routes emit.
template <class T>
struct Discrepancy {
  std::vector<std::string> routes;
  std::vector<std::vector<T>> max_diff;
  bool all_within = true;
};

template <class T>
Discrepancy<T> discrepancy_matrix(const std::vector<MomentRow<T>>& rows,
                                  const std::vector<std::string>& routes) {
  Discrepancy<T> d;
  d.routes = routes;
  size_t n = routes.size();
  d.max_diff.assign(n, std::vector<T>(n, T(0)));
  auto value = [&](const std::string& route, const std::string& law, int order) -> const T* {
    for (const auto& r : rows)
      if (r.route == route && r.law == law && r.order == order) return &r.value;
    return nullptr;
  };
  std::set<std::pair<std::string, int>> keys;
  for (const auto& r : rows) keys.insert({r.law, r.order});
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      T worst(0);
      for (const auto& [law, order] : keys) {
        const T* a = value(routes[i], law, order);
        const T* b = value(routes[j], law, order);
        if (!a || !b) continue;
        T diff = abs_value(*a - *b);
        if (diff > worst) worst = diff;
        if (!within_tolerance(*a, *b)) d.all_within = false;
      }
      d.max_diff[i][j] = d.max_diff[j][i] = worst;
    }
  return d;
}

template <class T>
void write_discrepancy(const std::filesystem::path& path, const Discrepancy<T>& d) {
  std::ofstream out(path);
  out << "cross-route discrepancy matrix (max |difference| over shared laws and orders)\n";
  for (size_t i = 0; i < d.routes.size(); ++i)
    for (size_t j = i + 1; j < d.routes.size(); ++j)
      out << d.routes[i] << " vs " << d.routes[j] << ": "
          << scalar_to_string(d.max_diff[i][j]) << "\n";
  out << "verdict: " << (d.all_within ? "agree" : "DISAGREE") << "\n";
}

template <class T>
void write_convergence_csv(const Options& opt, const BlockModel<T>& model) {
  std::vector<int> orders;
  for (int k = 2; k <= opt.order; k += 2) orders.push_back(k);
  MomentSeries<T> mu = tracial_moments_combinatorial(model, opt.order);
  MomentSeries<T> mu0 = standard_moments_combinatorial(model, opt.order);
  std::ofstream out(out_file(opt, "fock_convergence.csv"));
  out << "state,order,n,value,limit,abs_error,abs_error_f64\n";
  auto emit = [&](const char* state, const StateKind& kind, const MomentSeries<T>& lim) {
    std::vector<T> lims;
    for (int k : orders) lims.push_back(lim[k]);
    for (const auto& row : convergence_table(model, orders, opt.fock_sizes, kind, lims)) {
      out << state << "," << row.order << "," << row.n << "," << scalar_to_string(row.value)
          << "," << scalar_to_string(row.limit) << "," << scalar_to_string(row.abs_error) << ","
          << scalar_to_string(numeric_profile<T>::to_double(row.abs_error)) << "\n";
    }
  };
  emit("trace", StateKind::trace(), mu);
  emit("vacuum", StateKind::vacuum(), mu0);
}

template <class T>
int run_moments_t(const Options& opt) {
  BlockModel<T> model = load_model<T>(opt.model_path);
  if (opt.order < 2) throw std::invalid_argument("order must be >= 2");
  auto routes = applicable_routes(model, opt.routes, !opt.fock_sizes.empty());
  auto rows = collect_moments(model, opt.order, routes, opt.fock_sizes);
  write_moments_csv(out_file(opt, "moments.csv"), rows);
  for (const auto& r : routes)
    if (r == "fock") write_convergence_csv(opt, model);
  return 0;
}

template <class T>
int run_crosscheck_t(const Options& opt) {
  BlockModel<T> model = load_model<T>(opt.model_path);
  if (opt.order < 2) throw std::invalid_argument("order must be >= 2");
  auto routes = applicable_routes(model, opt.routes, !opt.fock_sizes.empty());
  auto rows = collect_moments(model, opt.order, routes, opt.fock_sizes);
  write_moments_csv(out_file(opt, "crosscheck.csv"), rows);
  auto disc = discrepancy_matrix(rows, routes);
  write_discrepancy(out_file(opt, "discrepancy.txt"), disc);
  for (const auto& r : routes)
    if (r == "fock") write_convergence_csv(opt, model);
  return disc.all_within ? 0 : 1;
}

template <class T>
int run_fock_converge_t(const Options& opt) {
  BlockModel<T> model = load_model<T>(opt.model_path);
  if (opt.fock_sizes.empty()) throw std::invalid_argument("fock-converge requires --fock-sizes");
  write_convergence_csv(opt, model);
  return 0;
}

template <class T>
int run_walks_t(const Options& opt) {
  BlockModel<T> model = load_model<T>(opt.model_path);
  if (model.r != 2) throw std::invalid_argument("walks requires a 2-block model");
  SquareMat<T> b = model.B();
  std::ofstream out(out_file(opt, "walks.csv"));
  out << "target,order,walk_sum,path_sum,path_count\n";
  auto emit = [&](const char* name, const MatricialWeighting<T>& w) {
    for (int k = 0; k <= opt.order; ++k) {
      T walk = walk_moment(w, k);
      if (k % 2 == 0) {
        auto [paths, total] = catalan_paths(w, k / 2);
        out << name << "," << k << "," << scalar_to_string(walk) << ","
            << scalar_to_string(total) << "," << paths.size() << "\n";
      } else {
        out << name << "," << k << "," << scalar_to_string(walk) << ",0,0\n";
      }
    }
  };
  emit("mu0", weighting_mu0(b));
  emit("mu1", weighting_muj(b, 0));
  emit("mu2", weighting_muj(b, 1));
  return 0;
}

inline int run_density(const Options& opt) {
  BlockModel<double> model = load_model<double>(opt.model_path);
  SquareMat<double> b = model.B();
  int depth = opt.depth > 0 ? opt.depth : std::max(40, opt.order / 2);
  auto xs = detail::parse_grid(opt.grid);
  int r = model.r;
  std::string law = opt.law;
  auto cauchy = [&](std::complex<double> z) {
    auto k = cf_eval_family(b, depth, z);
    auto kj = [&](int j) {
      std::complex<double> s(0, 0);
      for (int i = 0; i < r; ++i) s += k[i][j];
      return s;
    };
    if (law == "mu") {
      std::complex<double> g(0, 0);
      for (int j = 0; j < r; ++j) g += model.D[j] / (z - kj(j));
      return g;
    }
    if (law == "mu0") {
      std::complex<double> s(0, 0);
      for (int j = 0; j < r; ++j) s += k[j][j];
      return 1.0 / (z - s);
    }
    if (law.rfind("mu_j", 0) == 0) {
      int j = std::stoi(law.substr(4)) - 1;
      if (j < 0 || j >= r) throw std::invalid_argument("density: bad mu_j index");
      return 1.0 / (z - kj(j));
    }
    if (law.rfind("mu_ij", 0) == 0 && law.size() == 7) {
      int i = law[5] - '1', j = law[6] - '1';
      if (i < 0 || i >= r || j < 0 || j >= r)
        throw std::invalid_argument("density: bad mu_ij index");
      return 1.0 / (z - k[i][j]);
    }
    throw std::invalid_argument("density: unknown law " + law);
  };
  auto grid = opt.richardson ? density_grid_richardson(cauchy, xs, opt.eps)
                             : density_grid(cauchy, xs, opt.eps);
  std::ofstream out(detail::out_file(opt, "density.csv"));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", opt.eps);
  out << "# model=" << model_hash(model) << " law=" << law << " eps=" << buf
      << " depth=" << depth << " richardson=" << (opt.richardson ? 1 : 0) << "\n";
  out << "x,density\n";
  for (auto [x, dens] : grid)
    out << scalar_to_string(x) << "," << scalar_to_string(dens) << "\n";
  return 0;
}

}  // namespace detail

inline int run(const Options& opt) {
  try {
    auto dispatch = [&](auto run_rational, auto run_f64) {
      if (opt.profile == "rational") return run_rational();
      if (opt.profile == "f64") return run_f64();
      throw std::invalid_argument("profile must be rational or f64");
    };
    if (opt.command == "moments")
      return dispatch([&] { return detail::run_moments_t<Rational>(opt); },
                      [&] { return detail::run_moments_t<double>(opt); });
    if (opt.command == "crosscheck")
      return dispatch([&] { return detail::run_crosscheck_t<Rational>(opt); },
                      [&] { return detail::run_crosscheck_t<double>(opt); });
    if (opt.command == "fock-converge")
      return dispatch([&] { return detail::run_fock_converge_t<Rational>(opt); },
                      [&] { return detail::run_fock_converge_t<double>(opt); });
    if (opt.command == "walks")
      return dispatch([&] { return detail::run_walks_t<Rational>(opt); },
                      [&] { return detail::run_walks_t<double>(opt); });
    if (opt.command == "density") return detail::run_density(opt);
    std::cerr << "unknown command: " << opt.command << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace matfree::cli

#endif  // MATFREE_CLI_HPP
