#include "crn/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "crn/equilibria.hpp"
#include "crn/errors.hpp"
#include "crn/lyapunov.hpp"
#include "crn/model_io.hpp"
#include "crn/sim.hpp"

namespace crn {

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

void print_json(const ordered_json& j) { std::cout << j.dump(2) << '\n'; }

[[nodiscard]] int fail_json(const std::string& kind, const std::string& message,
                            int code) {
  ordered_json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  std::cerr << j.dump(2) << '\n';
  return code;
}

unsigned worker_count() {
  if (const char* env = std::getenv("CRN_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

struct LoadedModel {
  ModelFile file;
  Network net;
};

LoadedModel load(const std::string& path) {
  LoadedModel m{parse_model(path), {}};
  m.net = build_network(m.file.spec);
  return m;
}

Vec positive_vector_flag(const std::string& text, std::size_t n, const char* what) {
  const Vec v = parse_vector(text);
  if (v.size() != n)
    throw ModelError(std::string(what) + ": expected " + std::to_string(n) + " components");
  for (double x : v)
    if (!(x > 0.0)) throw ModelError(std::string(what) + ": components must be positive");
  return v;
}

// ---------------------------------------------------------------- validate

int cmd_validate(const std::string& model_path) {
  const LoadedModel m = load(model_path);
  const StoichBasis basis = stoich_bases(m.net);
  ordered_json j;
  j["model"] = model_path;
  if (!m.file.name.empty()) j["name"] = m.file.name;
  j["species"] = m.net.species_count();
  j["complexes"] = m.net.complex_count();
  j["reactions"] = m.net.reaction_count();
  j["stoich_rank"] = basis.rank;
  j["s_perp_basis"] = basis.s_perp_basis;
  ordered_json names = ordered_json::array();
  for (const auto& sp : m.net.species) names.push_back(sp.name);
  j["species_names"] = names;
  print_json(j);
  return kExitOk;
}

// ----------------------------------------------------------------- balance

int cmd_balance(const std::string& model_path, const std::string& at, double tol) {
  const LoadedModel m = load(model_path);
  const Vec x = positive_vector_flag(at, m.net.species_count(), "--at");
  const BalanceReport report = check_complex_balance(m.net, x, tol);
  ordered_json j;
  j["at"] = x;
  j["tolerance"] = report.tolerance;
  j["residual_norm"] = report.residual_norm;
  j["passed"] = report.passed;
  ordered_json pc = ordered_json::array();
  for (std::size_t l = 0; l < report.per_complex.size(); ++l) {
    ordered_json e;
    e["complex"] = m.net.complexes[l].stoich;
    e["inflow"] = report.per_complex[l].first;
    e["outflow"] = report.per_complex[l].second;
    pc.push_back(e);
  }
  j["per_complex"] = pc;
  print_json(j);
  return report.passed ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------- equilibrium

int cmd_equilibrium(const std::string& model_path, const std::string& reference,
                    const std::string& history, int max_iter, double grad_tol) {
  const LoadedModel m = load(model_path);
  const Vec ref = positive_vector_flag(reference, m.net.species_count(), "--reference");
  const History theta = make_history(m.file, m.net, history);
  ClassEquilibriumOptions opts;
  opts.max_iterations = max_iter;
  opts.grad_tol = grad_tol;
  const ClassEquilibriumResult res = solve_class_equilibrium(m.net, ref, theta, opts);
  ordered_json j;
  j["equilibrium"] = res.x;
  j["mu"] = res.mu;
  j["iterations"] = res.iterations;
  j["reduced_gradient_norm"] = res.grad_norm;
  j["equilibrium_residual"] = res.equilibrium_residual;
  j["class_residual"] = res.class_residual;
  print_json(j);
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

std::vector<Vec> trajectory_rows(const Trajectory& traj) {
  std::vector<Vec> rows;
  rows.reserve(traj.mesh().size());
  for (std::size_t j = 0; j < traj.mesh().size(); ++j) {
    Vec row;
    row.reserve(1 + traj.states()[j].size());
    row.push_back(traj.mesh()[j]);
    for (double v : traj.states()[j]) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> trajectory_header(const Network& net) {
  std::vector<std::string> header{"t"};
  for (const auto& sp : net.species) header.push_back(sp.name);
  return header;
}

int cmd_simulate(const std::string& model_path, const std::string& history, double t_end,
                 double dt, double floor, const std::string& out) {
  const LoadedModel m = load(model_path);
  const History theta = make_history(m.file, m.net, history);
  const Trajectory traj = simulate(m.net, theta, SimConfig{t_end, dt, floor});
  write_csv(out, trajectory_header(m.net), trajectory_rows(traj));
  ordered_json j;
  j["out"] = out;
  j["rows"] = traj.mesh().size();
  j["final_time"] = traj.final_time();
  j["final_state"] = traj.final_state();
  print_json(j);
  return kExitOk;
}

// ---------------------------------------------------------------- lyapunov

Trajectory load_trajectory(const LoadedModel& m, const std::string& csv_path,
                           const History& theta, double floor) {
  std::vector<std::string> header;
  std::vector<Vec> rows;
  read_csv(csv_path, header, rows);
  if (header.size() != m.net.species_count() + 1 || header.empty() || header[0] != "t")
    throw ModelError(csv_path + ": expected a trajectory CSV (t plus one column per species)");
  if (rows.empty()) throw ModelError(csv_path + ": no data rows");
  if (std::abs(rows.front()[0]) > 1e-12)
    throw ModelError(csv_path + ": trajectory must start at t = 0");
  const double min_delay = m.net.min_positive_delay();
  Trajectory traj(m.net, theta);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double t = rows[r][0];
    if (r > 0) {
      const double gap = t - rows[r - 1][0];
      if (!(gap > 0.0)) throw ModelError(csv_path + ": times must strictly increase");
      if (m.net.has_delays() && gap > min_delay + 1e-12)
        throw ModelError(csv_path + ": row spacing exceeds the smallest positive delay");
    }
    const Vec x(rows[r].begin() + 1, rows[r].end());
    traj.append(t, x, dde_rhs(m.net, traj, t, x, floor));
  }
  return traj;
}

int cmd_lyapunov(const std::string& model_path, const std::string& reference,
                 const std::string& traj_path, const std::string& history, double t_end,
                 double dt, double floor, int stride, const std::string& out) {
  const LoadedModel m = load(model_path);
  const Vec ref = positive_vector_flag(reference, m.net.species_count(), "--reference");

  std::optional<Trajectory> traj;
  if (!traj_path.empty()) {
    if (history.empty())
      throw ModelError("--traj requires --history (the pre-zero segment of the run)");
    traj = load_trajectory(m, traj_path, make_history(m.file, m.net, history), floor);
  } else {
    if (history.empty() || !(t_end > 0.0) || !(dt > 0.0))
      throw ModelError("lyapunov needs either --traj or --history with --t-end and --dt");
    traj = simulate(m.net, make_history(m.file, m.net, history), SimConfig{t_end, dt, floor});
  }

  const DecreaseReport report = decrease_report(m.net, *traj, ref, stride);
  std::vector<Vec> rows;
  rows.reserve(report.times.size());
  for (std::size_t i = 0; i < report.times.size(); ++i)
    rows.push_back({report.times[i], report.values[i]});
  write_csv(out, {"t", "V"}, rows);

  ordered_json j;
  j["out"] = out;
  j["samples"] = report.times.size();
  j["initial_value"] = report.values.empty() ? 0.0 : report.values.front();
  j["final_value"] = report.values.empty() ? 0.0 : report.values.back();
  j["max_increase"] = report.max_increase;
  j["max_scaled_increase"] = report.max_scaled_increase;
  j["tolerance"] = report.tolerance;
  j["reference_balanced"] = report.reference_balanced;
  j["passed"] = report.passed;
  print_json(j);
  return (report.passed && report.reference_balanced) ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------------- phase

struct GridAxis {
  double lo = 0.0, hi = 0.0;
  int count = 0;
};

std::vector<GridAxis> parse_grid(const std::string& text, std::size_t n) {
  std::vector<GridAxis> axes;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    GridAxis ax;
    if (std::sscanf(part.c_str(), "%lf:%lf:%d", &ax.lo, &ax.hi, &ax.count) != 3)
      throw ModelError("--grid: expected lo:hi:count per species, got '" + part + "'");
    if (!(ax.lo > 0.0) || !(ax.hi >= ax.lo) || ax.count < 1)
      throw ModelError("--grid: need 0 < lo <= hi and count >= 1");
    axes.push_back(ax);
  }
  if (axes.size() != n)
    throw ModelError("--grid: expected " + std::to_string(n) + " axes");
  return axes;
}

int cmd_phase(const std::string& model_path, const std::string& grid,
              const std::string& reference, double t_end, double dt, double floor,
              const std::string& out_dir) {
  const LoadedModel m = load(model_path);
  const std::size_t n = m.net.species_count();
  const Vec ref = positive_vector_flag(reference, n, "--reference");
  const std::vector<GridAxis> axes = parse_grid(grid, n);
  if (dt <= 0.0) {
    dt = 0.01;
    if (m.net.has_delays()) dt = std::min(dt, m.net.min_positive_delay());
  }

  fs::create_directories(out_dir);
  std::vector<Vec> points;
  Vec point(n, 0.0);
  const std::function<void(std::size_t)> expand = [&](std::size_t axis) {
    if (axis == n) {
      points.push_back(point);
      return;
    }
    const GridAxis& ax = axes[axis];
    for (int i = 0; i < ax.count; ++i) {
      point[axis] = ax.count == 1 ? ax.lo : ax.lo + (ax.hi - ax.lo) * i / (ax.count - 1);
      expand(axis + 1);
    }
  };
  expand(0);

  const StoichBasis basis = stoich_bases(m.net);
  struct Row {
    Vec theta, xeq;
    double e_residual = 0.0, class_residual = 0.0;
  };
  std::vector<Row> results(points.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;

  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= points.size() || failed.load()) break;
      try {
        const double t_lo = m.net.tau_max() > 0.0 ? -m.net.tau_max() : -1.0;
        const History theta = History::constant(points[i], t_lo, 0.0);
        const Trajectory traj = simulate(m.net, theta, SimConfig{t_end, dt, floor});
        char name[32];
        std::snprintf(name, sizeof(name), "traj_%04zu.csv", i);
        write_csv((fs::path(out_dir) / name).string(), trajectory_header(m.net),
                  trajectory_rows(traj));
        const ClassEquilibriumResult eq = solve_class_equilibrium(m.net, ref, theta);
        Row row;
        row.theta = points[i];
        row.xeq = eq.x;
        row.class_residual = eq.class_residual;
        row.e_residual =
            norm_inf(basis.project_s(sub(rho(m.net, eq.x), rho(m.net, ref))));
        results[i] = std::move(row);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) first_error = e.what();
      }
    }
  };

  const unsigned threads = std::min<unsigned>(worker_count(),
                                              static_cast<unsigned>(points.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < std::max(1u, threads); ++w) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (failed.load()) throw NumericError("phase: " + first_error);

  std::vector<std::string> header{"index"};
  for (const auto& sp : m.net.species) header.push_back("theta_" + sp.name);
  for (const auto& sp : m.net.species) header.push_back("eq_" + sp.name);
  header.push_back("e_residual");
  header.push_back("class_residual");
  std::vector<Vec> rows;
  for (std::size_t i = 0; i < results.size(); ++i) {
    Vec row{static_cast<double>(i)};
    for (double v : results[i].theta) row.push_back(v);
    for (double v : results[i].xeq) row.push_back(v);
    row.push_back(results[i].e_residual);
    row.push_back(results[i].class_residual);
    rows.push_back(std::move(row));
  }
  write_csv((fs::path(out_dir) / "equilibria.csv").string(), header, rows);

  ordered_json j;
  j["directory"] = out_dir;
  j["trajectories"] = points.size();
  j["equilibria"] = "equilibria.csv";
  print_json(j);
  return kExitOk;
}

// ----------------------------------------------------------------- contour

int cmd_contour(const std::string& model_path, const std::string& reference,
                const std::string& plane, const std::string& out) {
  const LoadedModel m = load(model_path);
  if (m.net.species_count() != 3)
    throw ModelError("contour requires a 3-species model (simplex slice)");
  const Vec ref = positive_vector_flag(reference, 3, "--reference");

  double total = 0.0;
  int count = 0;
  {
    std::stringstream ss(plane);
    std::string part;
    while (std::getline(ss, part, ',')) {
      double v = 0.0;
      if (std::sscanf(part.c_str(), "total=%lf", &v) == 1)
        total = v;
      else if (std::sscanf(part.c_str(), "n=%lf", &v) == 1)
        count = static_cast<int>(v);
      else
        throw ModelError("--plane: expected total=<sum>,n=<points>, got '" + part + "'");
    }
  }
  if (!(total > 0.0) || count < 2)
    throw ModelError("--plane: need total > 0 and n >= 2");

  const double t_lo = m.net.tau_max() > 0.0 ? -m.net.tau_max() : -1.0;
  std::vector<Vec> rows;
  for (int i = 1; i <= count; ++i) {
    for (int jj = 1; jj <= count; ++jj) {
      const double x1 = total * i / (count + 1);
      const double x2 = total * jj / (count + 1);
      const double x3 = total - x1 - x2;
      if (!(x3 > total * 1e-6)) continue;
      const Vec x{x1, x2, x3};
      const double vp = v_point(m.net, x, ref);
      const double vk =
          v_krasovskii(m.net, History::constant(x, t_lo, 0.0), ref);
      rows.push_back({x1, x2, vp, vk});
    }
  }
  write_csv(out, {"x1", "x2", "V_point", "V_LK"}, rows);
  ordered_json j;
  j["out"] = out;
  j["rows"] = rows.size();
  print_json(j);
  return kExitOk;
}

} // namespace

int run_command(const std::vector<std::string>& args) {
  CLI::App app{"delayed reaction network toolkit"};
  app.require_subcommand(1);

  std::string model, at, reference, history, traj_path, grid, plane, out;
  double tol = 1e-10, t_end = 0.0, dt = 0.0, floor = 1e-12, grad_tol = 1e-10;
  int max_iter = 200, stride = 0;

  auto* validate = app.add_subcommand("validate", "parse a model and print a summary");
  validate->add_option("model", model)->required();

  auto* balance = app.add_subcommand("balance", "complex-balance check at a state");
  balance->add_option("model", model)->required();
  balance->add_option("--at", at, "state vector v1,v2,...")->required();
  balance->add_option("--tol", tol, "residual tolerance");

  auto* equilibrium =
      app.add_subcommand("equilibrium", "unique equilibrium of a compatibility class");
  equilibrium->add_option("model", model)->required();
  equilibrium->add_option("--reference", reference, "complex balanced state")->required();
  equilibrium->add_option("--history", history, "initial history (vector or @name)")
      ->required();
  equilibrium->add_option("--max-iter", max_iter);
  equilibrium->add_option("--grad-tol", grad_tol);

  auto* simulate_cmd = app.add_subcommand("simulate", "integrate the delayed system");
  simulate_cmd->add_option("model", model)->required();
  simulate_cmd->add_option("--history", history)->required();
  simulate_cmd->add_option("--t-end", t_end)->required();
  simulate_cmd->add_option("--dt", dt)->required();
  simulate_cmd->add_option("--floor", floor, "positivity floor");
  simulate_cmd->add_option("--out", out, "trajectory CSV")->required();

  auto* lyapunov_cmd =
      app.add_subcommand("lyapunov", "Krasovskii values and decrease check");
  lyapunov_cmd->add_option("model", model)->required();
  lyapunov_cmd->add_option("--reference", reference)->required();
  lyapunov_cmd->add_option("--traj", traj_path, "existing trajectory CSV");
  lyapunov_cmd->add_option("--history", history);
  lyapunov_cmd->add_option("--t-end", t_end);
  lyapunov_cmd->add_option("--dt", dt);
  lyapunov_cmd->add_option("--floor", floor);
  lyapunov_cmd->add_option("--stride", stride, "sampling stride (0 = default policy)");
  lyapunov_cmd->add_option("--out", out, "t,V CSV")->required();

  auto* phase = app.add_subcommand("phase", "trajectory fan plus equilibrium locus");
  phase->add_option("model", model)->required();
  phase->add_option("--grid", grid, "lo:hi:count per species")->required();
  phase->add_option("--reference", reference)->required();
  phase->add_option("--t-end", t_end)->required();
  phase->add_option("--dt", dt, "step size (default min(0.01, smallest delay))");
  phase->add_option("--floor", floor);
  phase->add_option("--out", out, "output directory")->required();

  auto* contour = app.add_subcommand("contour", "Lyapunov values over a simplex slice");
  contour->add_option("model", model)->required();
  contour->add_option("--reference", reference)->required();
  contour->add_option("--plane", plane, "total=<sum>,n=<points>")->required();
  contour->add_option("--out", out, "grid CSV")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail_json("usage", e.what(), kExitUsage);
  }

  try {
    if (validate->parsed()) return cmd_validate(model);
    if (balance->parsed()) return cmd_balance(model, at, tol);
    if (equilibrium->parsed())
      return cmd_equilibrium(model, reference, history, max_iter, grad_tol);
    if (simulate_cmd->parsed()) return cmd_simulate(model, history, t_end, dt, floor, out);
    if (lyapunov_cmd->parsed())
      return cmd_lyapunov(model, reference, traj_path, history, t_end, dt, floor, stride,
                          out);
    if (phase->parsed())
      return cmd_phase(model, grid, reference, t_end, dt, floor, out);
    if (contour->parsed()) return cmd_contour(model, reference, plane, out);
    return fail_json("usage", "no subcommand given", kExitUsage);
  } catch (const ModelError& e) {
    return fail_json("model", e.what(), kExitUsage);
  } catch (const DomainError& e) {
    return fail_json("domain", e.what(), kExitUsage);
  } catch (const NumericError& e) {
    return fail_json("numeric", e.what(), kExitNumeric);
  } catch (const std::exception& e) {
    return fail_json("internal", e.what(), kExitNumeric);
  }
}

} // namespace crn
