#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "radial/asymptotics.hpp"
#include "radial/dynsys.hpp"
#include "radial/ko_criteria.hpp"
#include "radial/radial_ode.hpp"

namespace radial {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Exact decimal form of a double (17 significant digits).
std::string fmt17(double x);

// Rounds to `digits` significant digits; digits <= 0 returns x unchanged.
double round_sig(double x, int digits);

// round_sig applied to every float in a document.
json round_doubles(json j, int digits);

// 2-space indentation, trailing newline, optional rounding.  Non-finite
// values serialize as null.
std::string json_to_string(const json& j, int round_digits = 0);

json ko_json(const KOReport& rep);
json classification_json(const Classification& c);
json rate_check_json(const RateCheck& c);
json ball_rates_json(const BallRates& r);
json ball_report_json(const BallRateReport& rep);
json whole_space_rates_json(const WholeSpaceRates& ws);
json whole_space_report_json(const WholeSpaceReport& rep);
json equilibrium_json(const Equilibrium& eq);  // eigenvalues as [re, im]
json stability_trace_json(const StabilityTrace& tr);
json divergence_json(const DivergenceReport& rep);
json shoot_json(const ShootResult& res);
json solution_meta_json(const RadialSolution& sol);

// CSV with one %.17g column per value and '\n' line endings.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows,
               int round_digits = 0);
// Header r,u,w,v,psi, one row per sample.
void write_samples_csv(const std::string& path,
                       const std::vector<Sample>& samples,
                       int round_digits = 0);

}  // namespace radial
