#pragma once

#include <json.hpp>

#include "lipexp/cone_rigidity.hpp"
#include "lipexp/hyperbolicity.hpp"
#include "lipexp/map_metrics.hpp"
#include "lipexp/shadowing.hpp"
#include "lipexp/smooth_compare.hpp"

namespace lipexp {

inline constexpr const char* report_schema = "lipexp/1";

inline nlohmann::json point_json(const Point& p) {
    using nlohmann::json;
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, TorusPoint>)
                return json{{"x", v.x}, {"y", v.y}};
            else if constexpr (std::is_same_v<T, DiskPoint>)
                return json{{"x", v.x}, {"y", v.y}};
            else if constexpr (std::is_same_v<T, IntervalPoint>)
                return json{{"t", v.t}};
            else if constexpr (std::is_same_v<T, ConePoint>)
                return json{{"r", v.r}, {"theta", v.theta}};
            else if constexpr (std::is_same_v<T, ShiftWord>) {
                json syms = json::array();
                for (int n = -v.window; n <= v.window; ++n)
                    syms.push_back(int(v.at(n)));
                return json{{"window", v.window},
                            {"alphabet", v.alphabet},
                            {"symbols", syms}};
            } else {
                return json{{"index", v.index}};
            }
        },
        p);
}

inline void to_json(nlohmann::json& j, const PairWitness& w) {
    j = nlohmann::json{
        {"a", point_json(w.a)}, {"b", point_json(w.b)}, {"value", w.value}};
}

inline void to_json(nlohmann::json& j, const PointWitness& w) {
    j = nlohmann::json{{"p", point_json(w.p)}, {"value", w.value}};
}

inline void to_json(nlohmann::json& j, const MapMetricReport& r) {
    j = nlohmann::json{{"c0", r.c0},
                       {"w_prime_fwd", r.w_prime_fwd},
                       {"w_prime_inv", r.w_prime_inv},
                       {"w", r.w},
                       {"l_prime_fwd", r.l_prime_fwd},
                       {"l_prime_inv", r.l_prime_inv},
                       {"l", r.l},
                       {"c0_fwd_witness", r.c0_fwd_witness},
                       {"c0_inv_witness", r.c0_inv_witness},
                       {"w_fwd_witness", r.w_fwd_witness},
                       {"w_inv_witness", r.w_inv_witness},
                       {"l_fwd_witness", r.l_fwd_witness},
                       {"l_inv_witness", r.l_inv_witness}};
}

inline void to_json(nlohmann::json& j, const LipschitzNorm& n) {
    j = nlohmann::json{{"c0_norm", n.c0_norm},
                       {"loglips_fwd", n.loglips_fwd},
                       {"loglips_inv", n.loglips_inv},
                       {"value", n.value}};
}

inline void to_json(nlohmann::json& j, const EquivalenceReport& r) {
    j = nlohmann::json{{"d_w", r.d_w},
                       {"d_l", r.d_l},
                       {"rho_min", r.rho_min},
                       {"k", r.k},
                       {"delta_cap", r.delta_cap},
                       {"hypothesis_met", r.hypothesis_met},
                       {"holds", r.holds}};
}

inline void to_json(nlohmann::json& j, const HyperbolicityCertificate& c) {
    j = nlohmann::json{{"delta", c.delta},
                       {"lambda", c.lambda},
                       {"pairs_checked", c.pairs_checked},
                       {"worst_pair", c.worst_pair},
                       {"ok", c.ok}};
}

inline void to_json(nlohmann::json& j, const RobustnessMargin& m) {
    j = nlohmann::json{{"lambda", m.lambda},
                       {"lambda_prime", m.lambda_prime},
                       {"epsilon", m.epsilon}};
}

inline void to_json(nlohmann::json& j, const CertificateCheck& c) {
    j = nlohmann::json{{"d_w", c.d_w},
                       {"epsilon", c.epsilon},
                       {"hypothesis_met", c.hypothesis_met},
                       {"close_pairs", c.close_pairs},
                       {"violations", c.violations},
                       {"worst_ratio", c.worst_ratio},
                       {"worst_pair", c.worst_pair},
                       {"conclusion_holds", c.conclusion_holds},
                       {"pass", c.pass}};
}

inline void to_json(nlohmann::json& j, const ShadowResult& s) {
    j = nlohmann::json{{"sup_correction", s.sup_correction},
                       {"bound", s.bound},
                       {"max_defect", s.max_defect},
                       {"residual", s.residual}};
}

inline void to_json(nlohmann::json& j, const ConjugacyField& f) {
    j = nlohmann::json{{"grid_n", f.grid_n},
                       {"n_steps", f.n_steps},
                       {"id_dist", f.id_dist},
                       {"residual", f.residual},
                       {"injectivity_margin", f.injectivity_margin}};
}

inline void to_json(nlohmann::json& j, const PersistenceReport& r) {
    j = nlohmann::json{{"count", r.count},
                       {"matched", r.matched},
                       {"worst_deviation", r.worst_deviation},
                       {"eps", r.eps},
                       {"all_ok", r.all_ok}};
}

inline void to_json(nlohmann::json& j, const RatioCheck& r) {
    j = nlohmann::json{{"dw_prime_fwd", r.dw_prime_fwd},
                       {"dw_prime_inv", r.dw_prime_inv},
                       {"min_ratio", r.min_ratio},
                       {"max_ratio", r.max_ratio},
                       {"pairs", r.pairs}};
}

inline void to_json(nlohmann::json& j, const RigidityEstimate& e) {
    j = nlohmann::json{{"lips_fwd", e.lips_fwd},
                       {"lips_inv", e.lips_inv},
                       {"product", e.product},
                       {"r1", e.r1},
                       {"r2", e.r2},
                       {"samples", e.samples}};
}

inline void to_json(nlohmann::json& j, const FixSetReport& r) {
    j = nlohmann::json{{"prongs", r.prongs},
                       {"family_size", r.family_size},
                       {"min_product", r.min_product},
                       {"bound", r.bound},
                       {"vacuous", r.vacuous},
                       {"ok", r.ok}};
}

inline void to_json(nlohmann::json& j, const DerivSlopeReport& r) {
    j = nlohmann::json{{"c0", r.c0},
                       {"sup_deriv_gap", r.sup_deriv_gap},
                       {"dw_prime", r.dw_prime},
                       {"holds", r.holds}};
}

}  // namespace lipexp
