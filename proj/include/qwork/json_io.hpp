#pragma once

#include <json.hpp>
#include <string>

#include "qwork/duality.hpp"
#include "qwork/workdist.hpp"

namespace qwork {

using json = nlohmann::ordered_json;

inline json mixture_to_json(const MixtureDistribution& dist) {
    json comps = json::array();
    for (const auto& c : dist.components)
        comps.push_back({{"re_weight", c.weight.real()},
                         {"im_weight", c.weight.imag()},
                         {"mean", c.mean},
                         {"width", c.width}});
    json out;
    out["label"] = to_string(dist.label);
    if (dist.label == MixtureLabel::PerLevel) out["level"] = dist.level;
    out["components"] = std::move(comps);
    return out;
}

inline MixtureDistribution mixture_from_json(const json& j) {
    MixtureDistribution dist;
    const std::string label = j.at("label").get<std::string>();
    if (label == "full")
        dist.label = MixtureLabel::Full;
    else if (label == "incoherent")
        dist.label = MixtureLabel::Incoherent;
    else if (label == "coherent")
        dist.label = MixtureLabel::Coherent;
    else if (label == "per_level")
        dist.label = MixtureLabel::PerLevel;
    else
        throw contract_violation("mixture_from_json: unknown label " + label);
    dist.level = j.value("level", -1);
    for (const auto& c : j.at("components"))
        dist.components.push_back({cxd(c.at("re_weight").get<double>(),
                                       c.at("im_weight").get<double>()),
                                   c.at("mean").get<double>(), c.at("width").get<double>()});
    return dist;
}

inline json decomposition_to_json(const WorkDecomposition& decomp) {
    json out;
    out["full"] = mixture_to_json(decomp.full);
    out["incoherent"] = mixture_to_json(decomp.incoherent);
    out["coherent"] = mixture_to_json(decomp.coherent);
    json levels = json::array();
    for (const auto& lvl : decomp.per_level) levels.push_back(mixture_to_json(lvl));
    out["per_level"] = std::move(levels);
    out["survived_coherence_factor"] = decomp.survived_coherence_factor;
    return out;
}

inline json report_to_json(const DualityReport& rep) {
    json out;
    out["d_w"] = rep.d_w;
    out["v_w"] = rep.v_w;
    out["c"] = rep.c;
    out["c_trace"] = rep.c_trace;
    out["c_tilde"] = rep.c_tilde;
    out["d_state"] = rep.d_state;
    out["v_state"] = rep.v_state;
    out["bound_residual"] = rep.bound_residual;
    out["sum_residual"] = rep.sum_residual;
    out["survived_coherence_factor"] = rep.survived_coherence_factor;
    json prov;
    prov["scheme"] = rep.provenance.scheme == SchemeKind::Gaussian ? "gaussian" : "projective";
    prov["sigma"] = rep.provenance.sigma;
    prov["dim"] = rep.provenance.dim;
    if (!rep.provenance.note.empty()) prov["note"] = rep.provenance.note;
    out["provenance"] = std::move(prov);
    return out;
}

inline json scan_to_json(const ScanTable& table) {
    json rows = json::array();
    for (const auto& r : table.rows)
        rows.push_back({{"theta", r.theta},
                        {"sigma", r.sigma},
                        {"d_w", r.d_w},
                        {"v_w", r.v_w},
                        {"c", r.c},
                        {"c_tilde", r.c_tilde},
                        {"bound_residual", r.bound_residual},
                        {"sum_residual", r.sum_residual}});
    json out;
    out["rows"] = std::move(rows);
    out["argmax_index"] = table.argmax_index;
    return out;
}

}  // namespace qwork
