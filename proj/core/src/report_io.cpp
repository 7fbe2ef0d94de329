#include "lazy_newton/report_io.hpp"

#include <cmath>

namespace lazy_newton {
namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json values(const NamedValue& v) {
    if (v.values.size() == 1) {
        return number(v.values.front());
    }
    json arr = json::array();
    for (double x : v.values) {
        arr.push_back(number(x));
    }
    return arr;
}

json vec(const Vec3& v) { return json::array({number(v.x), number(v.y), number(v.z)}); }

}  // namespace

json to_json(const ScenarioReport& report) {
    json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["scenario"] = report.scenario;
    json inputs = json::object();
    for (const auto& v : report.inputs) {
        inputs[v.name] = values(v);
    }
    doc["inputs"] = inputs;
    for (const auto& v : report.outputs) {
        doc[v.name] = values(v);
    }
    json comparisons = json::array();
    for (const auto& c : report.comparisons) {
        comparisons.push_back({{"quantity", c.quantity},
                               {"formula", c.formula},
                               {"predicted", number(c.predicted)},
                               {"simulated", number(c.simulated)},
                               {"abs_deviation", number(c.abs_deviation)},
                               {"rel_deviation", number(c.rel_deviation)}});
    }
    doc["comparisons"] = comparisons;
    doc["max_rel_deviation"] = number(report.max_rel_deviation());
    doc["rel_deviation_floor"] = ScenarioReport::kRelDeviationFloor;
    json fits = json::array();
    for (const auto& f : report.fits) {
        json probes = json::array();
        for (const auto& p : f.probes) {
            probes.push_back(vec(p));
        }
        fits.push_back({{"delta_m", vec(f.delta)},
                        {"residual_rms_J_kg", number(f.residual_rms)},
                        {"converged", f.converged},
                        {"iterations", f.iterations},
                        {"probes_m", probes}});
    }
    doc["fits"] = fits;
    doc["diagnostics"] = {{"nodes", report.diagnostics.nodes},
                          {"segments", report.diagnostics.segments},
                          {"evaluations", report.diagnostics.evaluations}};
    doc["wall_time_s"] = report.wall_time_s;
    doc["notes"] = report.notes;
    return doc;
}

}  // namespace lazy_newton
