#include "radial/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace radial {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double round_sig(double x, int digits) {
  if (digits <= 0 || !std::isfinite(x) || x == 0.0) return x;
  const double mag = std::floor(std::log10(std::abs(x)));
  const double scale = std::pow(10.0, digits - 1 - mag);
  return std::round(x * scale) / scale;
}

json round_doubles(json j, int digits) {
  if (digits <= 0) return j;
  if (j.is_number_float()) return round_sig(j.get<double>(), digits);
  if (j.is_array() || j.is_object())
    for (auto& el : j) el = round_doubles(el, digits);
  return j;
}

std::string json_to_string(const json& j, int round_digits) {
  return round_doubles(j, round_digits).dump(2) + "\n";
}

namespace {

json complex_json(const std::complex<double>& z) {
  return json::array({z.real(), z.imag()});
}

json vec3_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

}  // namespace

json ko_json(const KOReport& rep) {
  json j;
  j["p"] = rep.p;
  j["f"] = to_string(rep.f_kind);
  j["q"] = rep.q;
  j["plain"] = to_string(rep.plain);
  j["weighted"] = to_string(rep.weighted);
  j["method"] = to_string(rep.method);
  j["tail_exponent"] = rep.tail_exponent;
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

json classification_json(const Classification& c) {
  json j;
  j["verdict"] = to_string(c.verdict);
  j["region"] = std::string(1, region_letter(c.verdict));
  j["evidence"] = ko_json(c.evidence);
  return j;
}

json rate_check_json(const RateCheck& c) {
  json j;
  j["quantity"] = c.quantity;
  j["empirical"] = c.empirical;
  j["theoretical"] = c.theoretical;
  j["rel_err"] = c.rel_err;
  j["window"] = json::array({c.window_lo, c.window_hi});
  j["half_window_drift"] = c.half_window_drift;
  return j;
}

json ball_rates_json(const BallRates& r) {
  json j;
  j["p"] = r.p;
  j["q"] = r.q;
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["gamma"] = r.gamma;
  j["A"] = r.A;
  j["B"] = r.B;
  j["C"] = r.C;
  j["u_case"] = to_string(r.u_case);
  j["u_rate_constant"] = r.u_rate_constant;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json ball_report_json(const BallRateReport& rep) {
  json j;
  j["rates"] = ball_rates_json(rep.rates);
  j["R_hat"] = rep.R_hat;
  json checks = json::array();
  for (const RateCheck& c : rep.checks) checks.push_back(rate_check_json(c));
  j["checks"] = checks;
  return j;
}

json whole_space_rates_json(const WholeSpaceRates& ws) {
  json j;
  j["p"] = ws.p;
  j["q"] = ws.q;
  j["N"] = ws.N;
  j["Y2"] = ws.Y2;
  j["Z2"] = ws.Z2;
  j["W2"] = ws.W2;
  j["X_limit"] = ws.X_limit;
  j["u_exponent"] = ws.u_exponent;
  j["v_exponent"] = ws.v_exponent;
  j["u_const"] = ws.u_const;
  j["v_const"] = ws.v_const;
  return j;
}

json whole_space_report_json(const WholeSpaceReport& rep) {
  json j;
  j["rates"] = whole_space_rates_json(rep.rates);
  json checks = json::array();
  for (const RateCheck& c : rep.checks) checks.push_back(rate_check_json(c));
  j["checks"] = checks;
  return j;
}

json equilibrium_json(const Equilibrium& eq) {
  json j;
  j["point"] = vec3_json(eq.point);
  json ev = json::array();
  for (const auto& l : eq.eigenvalues) ev.push_back(complex_json(l));
  j["eigenvalues"] = ev;
  j["char_poly"] =
      json::array({eq.char_poly[0], eq.char_poly[1], eq.char_poly[2]});
  j["stability"] = to_string(eq.stability);
  j["dim_stable"] = eq.dim_stable;
  j["residual"] = eq.residual;
  return j;
}

json stability_trace_json(const StabilityTrace& tr) {
  json j;
  j["zeta2"] = json::array({tr.Y2, tr.Z2, tr.W2});
  j["a"] = tr.a;
  j["b"] = tr.b;
  j["c"] = tr.c;
  j["constant_term"] = tr.constant_term;
  j["ab"] = tr.ab;
  j["am_gm_lower"] = tr.am_gm_lower;
  j["routh_hurwitz"] = tr.routh_hurwitz;
  j["positive_on_grid"] = tr.positive_on_grid;
  json ev = json::array();
  for (const auto& l : tr.eigenvalues) ev.push_back(complex_json(l));
  j["eigenvalues"] = ev;
  j["all_re_negative"] = tr.all_re_negative;
  return j;
}

json divergence_json(const DivergenceReport& rep) {
  json j;
  j["max_divergence"] = rep.max_divergence;
  j["argmax"] = vec3_json(rep.argmax);
  j["nonpositive"] = rep.nonpositive;
  j["condition_lhs"] = rep.condition_lhs;
  j["condition_rhs"] = rep.condition_rhs;
  j["condition_holds"] = rep.condition_holds;
  return j;
}

json shoot_json(const ShootResult& res) {
  json j;
  j["m_star"] = res.m_star;
  j["t_probe"] = res.t_probe;
  j["deviation_at_12"] = res.deviation_at_12;
  j["iterations"] = res.iterations;
  return j;
}

json solution_meta_json(const RadialSolution& sol) {
  json j;
  j["termination"] = to_string(sol.termination);
  j["r_stop"] = sol.r_stop;
  j["samples"] = sol.samples.size();
  if (sol.termination == Termination::BlowUp) {
    j["R_max"] = sol.R_max;
    j["fit_beta"] = sol.fit_beta;
    j["fit_B"] = sol.fit_B;
  }
  return j;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows,
               int round_digits) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << fmt17(round_sig(row[i], round_digits));
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_samples_csv(const std::string& path,
                       const std::vector<Sample>& samples, int round_digits) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "r,u,w,v,psi\n";
  for (const Sample& s : samples)
    out << fmt17(round_sig(s.r, round_digits)) << ','
        << fmt17(round_sig(s.u, round_digits)) << ','
        << fmt17(round_sig(s.w, round_digits)) << ','
        << fmt17(round_sig(s.v, round_digits)) << ','
        << fmt17(round_sig(s.psi, round_digits)) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace radial
