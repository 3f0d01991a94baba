#include "radial/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "radial/report.hpp"

namespace radial {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (const char* env = std::getenv("RADIAL_BLOWUP_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && v > 0) workers = v;
  }
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

struct Opts {
  double p = 1.0;
  double q = 2.0;
  std::string f_spec = "power";
  int N = 3;
  double m = 1.0;
  double R = 1.0;
  bool whole_space = false;
  bool biharmonic = false;
  double rtol = 1e-9;
  double v_ceiling = 1e8;
  double r_horizon = 1e6;
  double window_decades = 1.0;
  std::string out;
  std::string format = "json";
  int round = 0;
  std::string p_range, q_range;
  std::string which = "both";
  std::vector<int> N_list{2, 20, 40};
  std::string field;
  double t_end = 12.0;
  bool trajectory = false;
  bool shoot = false;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void emit_json(const json& j, const std::string& out_path, int round_digits) {
  const std::string text = json_to_string(j, round_digits);
  if (out_path.empty())
    std::cout << text;
  else
    write_text(out_path, text);
}

Nonlinearity nl_from_spec(const std::string& spec, double q, bool q_given) {
  if (spec == "power") {
    if (!q_given)
      throw std::invalid_argument("--q is required for --f power");
    return Nonlinearity::power(q);
  }
  if (spec == "exp") return Nonlinearity::exponential();
  if (spec.rfind("custom:", 0) == 0)
    return Nonlinearity::custom_from_csv(spec.substr(7));
  throw std::invalid_argument("unknown --f \"" + spec +
                              "\" (expected power, exp, or custom:FILE)");
}

struct Range {
  double lo = 0.0, hi = 0.0;
  int n = 0;
  double at(int i) const {
    return n < 2 ? lo : lo + (hi - lo) * i / (n - 1.0);
  }
};

Range parse_range(const std::string& s, const char* flag) {
  const auto bad = [&] {
    throw std::invalid_argument(std::string(flag) +
                                " expects lo:hi:n with lo <= hi and n >= 1");
  };
  const auto c1 = s.find(':');
  const auto c2 = s.rfind(':');
  if (c1 == std::string::npos || c2 == c1) bad();
  Range r;
  try {
    std::size_t used = 0;
    const std::string a = s.substr(0, c1);
    const std::string b = s.substr(c1 + 1, c2 - c1 - 1);
    const std::string c = s.substr(c2 + 1);
    r.lo = std::stod(a, &used);
    if (used != a.size()) bad();
    r.hi = std::stod(b, &used);
    if (used != b.size()) bad();
    r.n = std::stoi(c, &used);
    if (used != c.size()) bad();
  } catch (const std::invalid_argument&) {
    bad();
  } catch (const std::out_of_range&) {
    bad();
  }
  if (!(r.lo <= r.hi) || r.n < 1) bad();
  return r;
}

json params_json(const Params& par) {
  json j;
  j["p"] = par.p;
  j["f"] = to_string(par.nl.kind());
  if (par.nl.kind() == FKind::Power) j["q"] = par.nl.power_exponent();
  j["N"] = par.N;
  j["m"] = par.m;
  if (std::holds_alternative<BallDomain>(par.domain)) {
    j["domain"] = "ball";
    j["R"] = std::get<BallDomain>(par.domain).R;
  } else {
    j["domain"] = "whole_space";
  }
  return j;
}

int cmd_classify(const Opts& o, bool p_given, bool q_given) {
  const bool grid = !o.p_range.empty() || !o.q_range.empty();
  if (grid) {
    if (o.p_range.empty() || o.q_range.empty())
      throw std::invalid_argument(
          "--p-range and --q-range must be given together");
    if (o.f_spec != "power")
      throw std::invalid_argument("grid classification requires --f power");
    const Range pr = parse_range(o.p_range, "--p-range");
    const Range qr = parse_range(o.q_range, "--q-range");
    if (!(pr.lo > 0.0) || !(qr.lo > 0.0))
      throw std::invalid_argument("grid ranges must be positive");
    std::string csv = "p,q,region\n";
    for (int i = 0; i < pr.n; ++i)
      for (int j = 0; j < qr.n; ++j) {
        const double pv = pr.at(i), qv = qr.at(j);
        const Nonlinearity nl = Nonlinearity::power(qv);
        const Classification c =
            o.whole_space ? classify_whole_space(nl, pv) : classify_ball(nl, pv);
        csv += fmt17(pv);
        csv += ',';
        csv += fmt17(qv);
        csv += ',';
        csv += region_letter(c.verdict);
        csv += '\n';
      }
    if (o.out.empty())
      std::cout << csv;
    else
      write_text(o.out + "_grid.csv", csv);
    return 0;
  }

  if (!p_given && !o.biharmonic)
    throw std::invalid_argument("classify needs --p (or --biharmonic)");
  const Nonlinearity nl = nl_from_spec(o.f_spec, o.q, q_given);

  if (o.format == "csv") {
    if (!p_given)
      throw std::invalid_argument("--format csv needs --p and a power --f");
    const Classification c =
        o.whole_space ? classify_whole_space(nl, o.p) : classify_ball(nl, o.p);
    std::string csv = "p,q,region\n";
    csv += fmt17(o.p);
    csv += ',';
    csv += nl.kind() == FKind::Power ? fmt17(nl.power_exponent()) : "nan";
    csv += ',';
    csv += region_letter(c.verdict);
    csv += '\n';
    if (o.out.empty())
      std::cout << csv;
    else
      write_text(o.out + "_classification.csv", csv);
    return 0;
  }

  json j;
  j["schema_version"] = kSchemaVersion;
  if (p_given) {
    const Classification c =
        o.whole_space ? classify_whole_space(nl, o.p) : classify_ball(nl, o.p);
    j["classification"] = classification_json(c);
  }
  if (o.biharmonic)
    j["biharmonic"] = to_string(classify_biharmonic(nl));
  emit_json(j, o.out.empty() ? "" : o.out + "_classification.json", o.round);
  return 0;
}

int cmd_solve(const Opts& o, bool q_given) {
  Params par;
  par.p = o.p;
  par.nl = nl_from_spec(o.f_spec, o.q, q_given);
  par.N = o.N;
  par.m = o.m;
  if (o.whole_space)
    par.domain = WholeSpaceDomain{};
  else
    par.domain = BallDomain{o.R};
  StepControls sc;
  sc.rtol = o.rtol;
  sc.v_ceiling = o.v_ceiling;
  sc.r_horizon = o.r_horizon;
  const RadialSolution sol = integrate(par, sc);

  json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["params"] = params_json(par);
  meta["solution"] = solution_meta_json(sol);
  if (o.out.empty()) {
    std::cout << json_to_string(meta, o.round);
  } else {
    write_samples_csv(o.out + "_samples.csv", sol.samples, o.round);
    write_text(o.out + "_meta.json", json_to_string(meta, o.round));
  }
  return 0;
}

int cmd_rates(const Opts& o) {
  Params par;
  par.p = o.p;
  par.nl = Nonlinearity::power(o.q);
  par.N = o.N;
  par.m = o.m;
  par.domain = WholeSpaceDomain{};
  StepControls sc;
  sc.rtol = o.rtol;
  sc.v_ceiling = o.v_ceiling;
  const RadialSolution sol = integrate(par, sc);
  const BallRateReport rep =
      verify_ball_rates(sol, o.p, o.q, o.window_decades);

  json j;
  j["schema_version"] = kSchemaVersion;
  j["params"] = params_json(par);
  j["solution"] = solution_meta_json(sol);
  j["rates"] = ball_report_json(rep);
  emit_json(j, o.out.empty() ? "" : o.out + "_rates.json", o.round);
  return 0;
}

int cmd_whole_space(const Opts& o) {
  const WholeSpaceRates ws = whole_space_rates(o.p, o.q, o.N);

  Params par;
  par.p = o.p;
  par.nl = Nonlinearity::power(o.q);
  par.N = o.N;
  par.m = o.m;
  par.domain = WholeSpaceDomain{};
  StepControls sc;
  sc.rtol = o.rtol;
  sc.r_horizon = o.r_horizon;
  const RadialSolution sol = integrate(par, sc);
  const WholeSpaceReport rep = verify_whole_space(sol, o.p, o.q, o.N);

  json j;
  j["schema_version"] = kSchemaVersion;
  j["params"] = params_json(par);
  j["classification"] =
      classification_json(classify_whole_space(par.nl, o.p));
  j["rates"] = whole_space_rates_json(ws);
  j["exact_residual_max"] =
      exact_solution_residual(o.p, o.q, o.N, {1.0, 10.0, 100.0});
  j["solution"] = solution_meta_json(sol);
  json checks = json::array();
  for (const RateCheck& c : rep.checks) checks.push_back(rate_check_json(c));
  j["checks"] = checks;

  const WholeSpaceField field(o.p, o.q, o.N);
  json eqs = json::array();
  for (const Equilibrium& e : equilibria(field))
    eqs.push_back(equilibrium_json(e));
  j["equilibria"] = eqs;
  j["stability"] = stability_trace_json(check_stability_zeta2(o.p, o.q, o.N));
  j["divergence"] = divergence_json(check_divergence(field));
  emit_json(j, o.out.empty() ? "" : o.out + "_whole_space.json", o.round);
  return 0;
}

int cmd_dynsys(const Opts& o) {
  if (o.trajectory && o.out.empty())
    throw std::invalid_argument("--trajectory requires --out");

  json j;
  j["schema_version"] = kSchemaVersion;
  j["field"] = o.field;

  if (o.field == "ball") {
    const BallField field(o.p, o.q);
    json eqs = json::array();
    for (const Equilibrium& e : equilibria(field))
      eqs.push_back(equilibrium_json(e));
    j["equilibria"] = eqs;
    j["divergence"] = divergence_json(check_divergence(field));
    if (o.shoot) j["shoot"] = shoot_json(shoot_boundary_blowup_m(o.p, o.q, o.N));
    if (o.trajectory) {
      const TransformedBallRun run =
          integrate_transformed_ball(o.p, o.q, o.N, o.m, o.t_end);
      std::vector<std::vector<double>> rows;
      rows.reserve(run.samples.size());
      for (const FlowSample& s : run.samples)
        rows.push_back({s.t, s.s[0], s.s[1], s.s[2]});
      write_csv(o.out + "_trajectory.csv", {"t", "X", "Y", "Z"}, rows,
                o.round);
      json traj;
      traj["outcome"] = to_string(run.outcome);
      if (!run.note.empty()) traj["note"] = run.note;
      traj["samples"] = run.samples.size();
      j["trajectory"] = traj;
    }
  } else {  // whole-space
    if (o.shoot)
      throw std::invalid_argument("--shoot applies to --field ball only");
    const WholeSpaceField field(o.p, o.q, o.N);
    json eqs = json::array();
    for (const Equilibrium& e : equilibria(field))
      eqs.push_back(equilibrium_json(e));
    j["equilibria"] = eqs;
    if (o.p * o.q < 1.0) {
      j["stability"] =
          stability_trace_json(check_stability_zeta2(o.p, o.q, o.N));
      j["divergence"] = divergence_json(check_divergence(field));
    }
    if (o.trajectory) {
      const std::vector<WholeSpaceSample> traj =
          integrate_transformed_whole_space(o.p, o.q, o.N, o.m, o.t_end);
      std::vector<std::vector<double>> rows;
      rows.reserve(traj.size());
      for (const WholeSpaceSample& s : traj)
        rows.push_back({s.t, s.X, s.Y, s.Z, s.W});
      write_csv(o.out + "_trajectory.csv", {"t", "X", "Y", "Z", "W"}, rows,
                o.round);
      j["trajectory"] = json{{"samples", rows.size()}};
    }
  }
  emit_json(j, o.out.empty() ? "" : o.out + "_dynsys.json", o.round);
  return 0;
}

int cmd_figures(const Opts& o) {
  std::vector<std::string> figs;
  if (o.which == "both")
    figs = {"fig2", "fig3"};
  else if (o.which == "fig2" || o.which == "fig3")
    figs = {o.which};
  else
    throw std::invalid_argument("--which expects fig2, fig3, or both");
  if (o.N_list.empty()) throw std::invalid_argument("--N-list is empty");
  for (int N : o.N_list)
    if (N < 2) throw std::invalid_argument("--N-list entries must be >= 2");
  if (!(o.m > 0.0)) throw std::invalid_argument("--m must be positive");

  struct Job {
    std::string fig;
    double p, q;
    int N;
  };
  std::vector<Job> jobs;
  for (const std::string& fig : figs)
    for (int N : o.N_list) {
      if (fig == "fig2")
        jobs.push_back({fig, 4.0, 3.0, N});
      else
        jobs.push_back({fig, 2.0, 3.0, N});
    }

  const std::string prefix = o.out.empty() ? "figure" : o.out;
  std::vector<std::vector<std::string>> files(jobs.size());

  parallel_for(jobs.size(), [&](std::size_t idx) {
    const Job& job = jobs[idx];
    Params par;
    par.p = job.p;
    par.nl = Nonlinearity::power(job.q);
    par.N = job.N;
    par.m = o.m;
    par.domain = WholeSpaceDomain{};
    StepControls sc;
    sc.rtol = o.rtol;
    sc.v_ceiling = o.v_ceiling;
    RadialSolution sol = integrate(par, sc);
    if (sol.termination != Termination::BlowUp)
      throw std::runtime_error(job.fig + " N=" + std::to_string(job.N) +
                               ": no blow-up, cannot normalize");
    // Normalize the blow-up radius to 1 through the scaling symmetry:
    // amplitude sigma^beta m has radius R/sigma, so sigma = R_max.
    const double beta = ball_rates(job.p, job.q).beta;
    par.m = std::pow(sol.R_max, beta) * o.m;
    sol = integrate(par, sc);

    const auto curve = [&](auto value) {
      std::vector<std::vector<double>> rows;
      for (const Sample& s : sol.samples) {
        const double y = value(s);
        if (y > 50.0) break;  // plotting window parity
        rows.push_back({s.r, y});
      }
      if (rows.size() > 2000) {
        const std::size_t stride = (rows.size() + 1999) / 2000;
        std::vector<std::vector<double>> thin;
        for (std::size_t i = 0; i < rows.size(); i += stride)
          thin.push_back(rows[i]);
        if (thin.back() != rows.back()) thin.push_back(rows.back());
        rows.swap(thin);
      }
      return rows;
    };
    const std::string tag = "_" + job.fig + "_";
    const std::string nstr = "_N" + std::to_string(job.N) + ".csv";
    const std::string u_path = prefix + tag + "u" + nstr;
    const std::string v_path = prefix + tag + "v" + nstr;
    write_csv(u_path, {"r", "u"}, curve([](const Sample& s) { return s.u; }),
              o.round);
    write_csv(v_path, {"r", "v"}, curve([](const Sample& s) { return s.v; }),
              o.round);
    files[idx] = {u_path, v_path};
  });

  json j;
  j["schema_version"] = kSchemaVersion;
  json list = json::array();
  for (const auto& pair : files)
    for (const std::string& f : pair) list.push_back(f);
  j["files"] = list;
  std::cout << json_to_string(j, 0);
  return 0;
}

int cmd_report(const Opts& o) {
  if (!(o.p > 0.0)) throw std::invalid_argument("--p must be positive");
  if (!(o.q > 0.0)) throw std::invalid_argument("--q must be positive");
  if (o.N < 2) throw std::invalid_argument("--N must be >= 2");
  if (!(o.m > 0.0)) throw std::invalid_argument("--m must be positive");

  json sections;
  int failures = 0;
  const auto section = [&](const char* name, auto&& fn) {
    try {
      sections[name] = fn();
    } catch (const std::domain_error& e) {
      sections[name] = json{{"skipped", e.what()}};
    } catch (const std::runtime_error& e) {
      sections[name] = json{{"error", e.what()}};
      ++failures;
    }
  };

  const Nonlinearity nl = Nonlinearity::power(o.q);
  section("classification",
          [&] { return classification_json(classify_whole_space(nl, o.p)); });
  section("ball_rates", [&] { return ball_rates_json(ball_rates(o.p, o.q)); });

  std::optional<RadialSolution> sol;
  section("solve", [&] {
    Params par;
    par.p = o.p;
    par.nl = nl;
    par.N = o.N;
    par.m = o.m;
    par.domain = WholeSpaceDomain{};
    StepControls sc;
    sc.rtol = o.rtol;
    sc.v_ceiling = o.v_ceiling;
    sc.r_horizon = o.r_horizon;
    sol = integrate(par, sc);
    return solution_meta_json(*sol);
  });

  section("rate_checks", [&]() -> json {
    if (!sol) throw std::domain_error("no solution available");
    if (sol->termination == Termination::BlowUp)
      return ball_report_json(verify_ball_rates(*sol, o.p, o.q));
    if (sol->termination == Termination::GlobalHorizon)
      return whole_space_report_json(verify_whole_space(*sol, o.p, o.q, o.N));
    throw std::domain_error(std::string("no rate theory for termination ") +
                            to_string(sol->termination));
  });

  section("whole_space_rates", [&] {
    json j = whole_space_rates_json(whole_space_rates(o.p, o.q, o.N));
    j["exact_residual_max"] =
        exact_solution_residual(o.p, o.q, o.N, {1.0, 10.0, 100.0});
    return j;
  });

  section("equilibria", [&] {
    json j;
    try {
      const BallField bf(o.p, o.q);
      json eqs = json::array();
      for (const Equilibrium& e : equilibria(bf))
        eqs.push_back(equilibrium_json(e));
      j["ball"] = eqs;
      j["ball_divergence"] = divergence_json(check_divergence(bf));
    } catch (const std::domain_error& e) {
      j["ball"] = json{{"skipped", e.what()}};
    }
    const WholeSpaceField wf(o.p, o.q, o.N);
    json eqs = json::array();
    for (const Equilibrium& e : equilibria(wf))
      eqs.push_back(equilibrium_json(e));
    j["whole_space"] = eqs;
    if (o.p * o.q < 1.0) {
      j["stability"] =
          stability_trace_json(check_stability_zeta2(o.p, o.q, o.N));
      j["divergence"] = divergence_json(check_divergence(wf));
    }
    return j;
  });

  json j;
  j["schema_version"] = kSchemaVersion;
  json par;
  par["p"] = o.p;
  par["q"] = o.q;
  par["N"] = o.N;
  par["m"] = o.m;
  j["params"] = par;
  j["sections"] = sections;
  j["failed_sections"] = failures;
  emit_json(j, o.out.empty() ? "" : o.out + "_report.json", o.round);
  return failures > 0 ? 1 : 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "radial-blowup: positive radial solutions of the coupled system\n"
      "  Delta u = v^p,  Delta v = f(|grad u|)\n"
      "on a ball or the whole space: boundary blow-up classification,\n"
      "high-accuracy solves, blow-up rate checks, and the associated\n"
      "dynamical systems."};
  app.require_subcommand(1);

  Opts co, so, ro, wo, dy, fo, re;
  ro.v_ceiling = 1e12;
  re.v_ceiling = 1e12;

  CLI::App* classify = app.add_subcommand(
      "classify", "Boundary behaviour from the growth of f (regions A/B/C)");
  classify->add_option("--p", co.p, "exponent of v^p");
  classify->add_option("--q", co.q, "power exponent of f");
  classify->add_option("--f", co.f_spec, "power | exp | custom:FILE");
  classify->add_flag("--whole-space", co.whole_space,
                     "classify global solvability instead of the ball");
  classify->add_flag("--biharmonic", co.biharmonic,
                     "also classify the p = 1 fourth-order problem");
  classify->add_option("--p-range", co.p_range, "grid sweep lo:hi:n over p");
  classify->add_option("--q-range", co.q_range, "grid sweep lo:hi:n over q");
  classify->add_option("--format", co.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  classify->add_option("--out", co.out, "output path prefix");
  classify->add_option("--round", co.round, "significant digits (0 = full)");

  CLI::App* solve = app.add_subcommand(
      "solve", "Integrate the radial system from the series start");
  solve->add_option("--p", so.p, "exponent of v^p")->required();
  solve->add_option("--q", so.q, "power exponent of f");
  solve->add_option("--f", so.f_spec, "power | exp | custom:FILE");
  solve->add_option("--N", so.N, "space dimension");
  solve->add_option("--m", so.m, "initial value v(0)");
  solve->add_option("--R", so.R, "ball radius");
  solve->add_flag("--whole-space", so.whole_space, "integrate on R^N");
  solve->add_option("--rtol", so.rtol, "relative step tolerance");
  solve->add_option("--v-ceiling", so.v_ceiling, "blow-up detection level");
  solve->add_option("--r-horizon", so.r_horizon, "whole-space stop radius");
  solve->add_option("--out", so.out,
                    "path prefix for _samples.csv and _meta.json");
  solve->add_option("--round", so.round, "significant digits (0 = full)");

  CLI::App* rates = app.add_subcommand(
      "rates", "Verify boundary blow-up rates against the closed forms");
  rates->add_option("--p", ro.p, "exponent of v^p")->required();
  rates->add_option("--q", ro.q, "power exponent of f")->required();
  rates->add_option("--N", ro.N, "space dimension");
  rates->add_option("--m", ro.m, "initial value v(0)");
  rates->add_option("--rtol", ro.rtol, "relative step tolerance");
  rates->add_option("--v-ceiling", ro.v_ceiling, "blow-up detection level");
  rates->add_option("--window-decades", ro.window_decades,
                    "fit window size in decades of v");
  rates->add_option("--out", ro.out, "output path prefix");
  rates->add_option("--round", ro.round, "significant digits (0 = full)");

  CLI::App* wspace = app.add_subcommand(
      "whole-space", "Global solutions on R^N: rates, equilibria, stability");
  wspace->add_option("--p", wo.p, "exponent of v^p")->required();
  wspace->add_option("--q", wo.q, "power exponent of f")->required();
  wspace->add_option("--N", wo.N, "space dimension");
  wspace->add_option("--m", wo.m, "initial value v(0)");
  wspace->add_option("--rtol", wo.rtol, "relative step tolerance");
  wspace->add_option("--r-horizon", wo.r_horizon, "stop radius");
  wspace->add_option("--out", wo.out, "output path prefix");
  wspace->add_option("--round", wo.round, "significant digits (0 = full)");

  CLI::App* dynsys = app.add_subcommand(
      "dynsys", "Equilibria and stability of the transformed systems");
  dynsys->add_option("--field", dy.field, "ball | whole-space")
      ->required()
      ->check(CLI::IsMember({"ball", "whole-space"}));
  dynsys->add_option("--p", dy.p, "exponent of v^p")->required();
  dynsys->add_option("--q", dy.q, "power exponent of f")->required();
  dynsys->add_option("--N", dy.N, "space dimension");
  dynsys->add_option("--m", dy.m, "initial value v(0)");
  dynsys->add_option("--t-end", dy.t_end, "trajectory end time");
  dynsys->add_flag("--trajectory", dy.trajectory,
                   "write the transformed trajectory CSV (needs --out)");
  dynsys->add_flag("--shoot", dy.shoot,
                   "bisect for the amplitude on the connection to (1,1,1)");
  dynsys->add_option("--out", dy.out, "output path prefix");
  dynsys->add_option("--round", dy.round, "significant digits (0 = full)");

  CLI::App* figures = app.add_subcommand(
      "figures", "Curve data for the two boundary blow-up regimes");
  figures->add_option("--which", fo.which, "fig2 | fig3 | both")
      ->check(CLI::IsMember({"fig2", "fig3", "both"}));
  figures
      ->add_option("--N-list", fo.N_list, "space dimensions (comma separated)")
      ->delimiter(',');
  figures->add_option("--m", fo.m, "initial value v(0) before normalization");
  figures->add_option("--rtol", fo.rtol, "relative step tolerance");
  figures->add_option("--v-ceiling", fo.v_ceiling, "blow-up detection level");
  figures->add_option("--out", fo.out, "output path prefix (default figure)");
  figures->add_option("--round", fo.round, "significant digits (0 = full)");

  CLI::App* report = app.add_subcommand(
      "report", "Consolidated JSON: classification, solve, rates, equilibria");
  report->add_option("--p", re.p, "exponent of v^p")->required();
  report->add_option("--q", re.q, "power exponent of f")->required();
  report->add_option("--N", re.N, "space dimension");
  report->add_option("--m", re.m, "initial value v(0)");
  report->add_option("--rtol", re.rtol, "relative step tolerance");
  report->add_option("--v-ceiling", re.v_ceiling, "blow-up detection level");
  report->add_option("--r-horizon", re.r_horizon, "whole-space stop radius");
  report->add_option("--out", re.out, "output path prefix");
  report->add_option("--round", re.round, "significant digits (0 = full)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (classify->parsed())
      return cmd_classify(co, classify->count("--p") > 0,
                          classify->count("--q") > 0);
    if (solve->parsed()) return cmd_solve(so, solve->count("--q") > 0);
    if (rates->parsed()) return cmd_rates(ro);
    if (wspace->parsed()) return cmd_whole_space(wo);
    if (dynsys->parsed()) return cmd_dynsys(dy);
    if (figures->parsed()) return cmd_figures(fo);
    if (report->parsed()) return cmd_report(re);
  } catch (const std::logic_error& e) {  // invalid_argument, domain_error
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace radial
