// Structured analysis reports and their JSON form. Field order is fixed
// (ordered_json) and doubles print in shortest round-trip form, so identical
// inputs and seed produce byte-identical output.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "homma/classify.hpp"
#include "homma/geometry.hpp"
#include "homma/homogeneity.hpp"
#include "homma/version.hpp"

namespace homma {

using Json = nlohmann::ordered_json;

struct CurvatureSample {
    std::vector<double> point;
    double det_hess = 0.0;
    double gauss_kronecker = 0.0;
};

struct IdentityCheck {
    std::string name;
    int trials = 0;
    double tolerance = 0.0;
    double max_relerr = 0.0;
    bool pass = false;
    Json rows = Json::array(); // per-trial evidence
};

struct AnalysisReport {
    std::string command;
    Json input = Json::object(); // echo of expression/model, constants, seed, samples

    std::optional<DegreeEstimate> degree;
    std::optional<bool> homogeneous;
    std::optional<double> mrs_residual; // degree-zero homogeneity of the MRS
    std::optional<bool> homothetic;
    std::optional<double> min_abs_gradient; // production functions need non-vanishing f_i
    std::optional<FlatnessVerdict> flat;
    std::vector<CurvatureSample> curvature;
    Json classification;   // filled by classify
    std::vector<IdentityCheck> identities; // filled by verify
    std::optional<std::string> timestamp;  // omitted under --no-timestamp
};

inline Json to_json(const FlatnessVerdict& v) {
    Json j;
    j["verdict"] = to_string(v.verdict);
    j["max_normalized_residual"] = v.max_normalized_residual;
    j["raw_residual_at_max"] = v.max_raw_residual;
    j["witness"] = v.witness ? Json(*v.witness) : Json(nullptr);
    return j;
}

inline Json to_json(const DegreeEstimate& d) {
    Json j;
    j["estimate"] = d.degree;
    j["spread"] = d.spread;
    j["points_used"] = d.points_used;
    return j;
}

inline Json to_json(const AnalysisReport& r) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["tool"] = Json{{"name", kToolName}, {"version", kVersion}};
    if (r.timestamp) j["timestamp"] = *r.timestamp;
    j["command"] = r.command;
    j["input"] = r.input;
    if (r.degree) {
        j["degree"] = to_json(*r.degree);
        j["degree"]["homogeneous"] = r.homogeneous.value_or(false);
    }
    if (r.mrs_residual) {
        j["homotheticity"] = Json{{"mrs_degree_zero_residual", *r.mrs_residual},
                                  {"homothetic", r.homothetic.value_or(false)}};
    }
    if (r.min_abs_gradient) j["min_abs_gradient"] = *r.min_abs_gradient;
    if (r.flat) j["flatness"] = to_json(*r.flat);
    if (!r.curvature.empty()) {
        Json arr = Json::array();
        for (const auto& s : r.curvature)
            arr.push_back(Json{{"point", s.point},
                               {"det_hess", s.det_hess},
                               {"gauss_kronecker", s.gauss_kronecker}});
        j["curvature_samples"] = arr;
    }
    if (!r.classification.is_null() && !r.classification.empty()) j["classification"] = r.classification;
    if (!r.identities.empty()) {
        Json arr = Json::array();
        for (const auto& c : r.identities) {
            Json e;
            e["name"] = c.name;
            e["trials"] = c.trials;
            e["tolerance"] = c.tolerance;
            e["max_relerr"] = c.max_relerr;
            e["pass"] = c.pass;
            e["rows"] = c.rows;
            arr.push_back(e);
        }
        j["identities"] = arr;
    }
    return j;
}

inline Json to_json(const Classification2& c) {
    Json j;
    j["arity"] = 2;
    j["case"] = to_string(c.result);
    if (c.result == TwoInputCase::InnerPerfectSubstitutePower) {
        j["a"] = c.a;
        j["b"] = c.b;
        j["both_cases"] = c.both_cases;
    }
    Json ev;
    ev["max_ma_residual"] = c.evidence.flatness.max_normalized_residual;
    if (c.evidence.hhat_hessian_residual) ev["hhat_hessian_residual"] = *c.evidence.hhat_hessian_residual;
    if (c.evidence.coefficient_drift) ev["coefficient_drift"] = *c.evidence.coefficient_drift;
    if (c.evidence.radial_affinity) ev["radial_affinity"] = *c.evidence.radial_affinity;
    j["evidence"] = ev;
    return j;
}

inline Json to_json(const ClassificationN& c, const VarSpec* profile_vars = nullptr) {
    Json j;
    j["case"] = to_string(c.result);
    if (c.profile) {
        const int m = std::max(c.profile->arity(), 1);
        const VarSpec vars = profile_vars ? *profile_vars : VarSpec::numbered(m, "u");
        j["profile"] = print(*c.profile, vars);
    }
    Json ev;
    ev["max_ma_residual"] = c.evidence.flatness.max_normalized_residual;
    if (c.evidence.radial_affinity) ev["radial_affinity"] = *c.evidence.radial_affinity;
    if (c.evidence.profile_det_residual) ev["profile_det_residual"] = *c.evidence.profile_det_residual;
    j["evidence"] = ev;
    return j;
}

} // namespace homma
