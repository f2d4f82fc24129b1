#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lipexp/json_io.hpp"

using nlohmann::json;

namespace lipexp {
namespace {

double parse_num(const std::string& s) {
    std::size_t idx = 0;
    double v = std::stod(s, &idx);
    if (idx != s.size())
        throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t comma = s.find(',', start);
        std::string part = s.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        if (part.empty()) throw std::invalid_argument("empty entry in list '" + s + "'");
        out.push_back(parse_num(part));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

MetricSpace parse_space(const std::string& s) {
    if (s == "torus") return torus_space();
    if (s == "disk") return disk_space();
    if (s == "interval") return interval_space();
    if (s.rfind("shift:", 0) == 0) {
        auto nums = parse_double_list(s.substr(6));
        if (nums.size() != 2)
            throw std::invalid_argument("shift space needs W,A as in shift:6,2");
        return shift_space(int(nums[0]), int(nums[1]));
    }
    if (s.rfind("cone:", 0) == 0) {
        auto nums = parse_double_list(s.substr(5));
        if (nums.size() < 1 || nums.size() > 2)
            throw std::invalid_argument("cone space needs prongs[,radius]");
        return cone_space(int(nums[0]), nums.size() == 2 ? nums[1] : 1.0);
    }
    throw std::invalid_argument(
        "unknown space '" + s +
        "' (expected torus | disk | interval | shift:W,A | cone:n[,R])");
}

IntervalDiffeo parse_diffeo(std::string spec) {
    if (spec.rfind("interval:", 0) == 0) spec = spec.substr(9);
    if (spec == "id") return interval_identity_diffeo();
    if (spec.rfind("poly:", 0) == 0)
        return interval_poly_diffeo(parse_num(spec.substr(5)));
    throw std::invalid_argument("unknown interval map '" + spec +
                                "' (expected id | poly:c)");
}

void emit_text(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw std::invalid_argument("cannot open output file '" + path + "'");
    f << text;
}

json base_doc(const char* command) {
    json j;
    j["schema"] = report_schema;
    j["command"] = command;
    j["config"]["threads"] = worker_count();
    return j;
}

void emit_doc(const json& doc, const std::string& path) {
    emit_text(doc.dump(2) + "\n", path);
}

struct MetricsCmd {
    std::string space, f, g, out;
    std::size_t pairs = 20000;
    std::uint64_t seed = 0;
    double eq_margin = 0.0;
    std::optional<double> max_sep;

    int run() const {
        MetricSpace sp = parse_space(space);
        MapSystem fs = parse_map(f, sp);
        MapSystem gs = parse_map(g, sp);
        PairSample ps = sample_pairs(sp, pairs, seed, max_sep);
        json doc = base_doc("metrics");
        auto& cfg = doc["config"];
        cfg["space"] = sp.name;
        cfg["f"] = f;
        cfg["g"] = g;
        cfg["pairs"] = pairs;
        cfg["seed"] = seed;
        cfg["eq_margin"] = eq_margin;
        if (max_sep) cfg["max_sep"] = *max_sep;
        doc["report"]["metrics"] = metric_report(fs, gs, ps, ps.points);
        doc["report"]["norm_induced"] = norm_induced_dist(fs, gs, ps, ps.points);
        doc["report"]["equivalence"] =
            equivalence_check(fs, gs, ps, ps.points, eq_margin);
        emit_doc(doc, out);
        return 0;
    }
};

struct CertifyCmd {
    std::string space, f, g, out;
    double delta = 0.0;
    bool exhaustive = false;
    std::size_t pairs = 200000;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double lambda_prime = 0.0;
    bool lambda_prime_set = false;
    std::optional<double> max_sep;

    int run() const {
        MetricSpace sp = parse_space(space);
        MapSystem fs = parse_map(f, sp);
        if (!exhaustive && !seed_set)
            throw std::invalid_argument("--seed is required unless --exhaustive");
        if (g.empty() != !lambda_prime_set)
            throw std::invalid_argument(
                "--g and --lambda-prime must be given together");
        PairSample ps = exhaustive ? exhaustive_pairs(sp, max_sep)
                                   : sample_pairs(sp, pairs, seed, max_sep);
        HyperbolicityCertificate cert = check_hyperbolic(fs, ps, delta);

        json doc = base_doc("certify");
        auto& cfg = doc["config"];
        cfg["space"] = sp.name;
        cfg["f"] = f;
        cfg["delta"] = delta;
        cfg["exhaustive"] = exhaustive;
        if (!exhaustive) {
            cfg["pairs"] = pairs;
            cfg["seed"] = seed;
        }
        if (max_sep) cfg["max_sep"] = *max_sep;
        doc["report"]["certificate"] = cert;

        int rc = cert.ok ? 0 : 1;
        if (!g.empty()) {
            MapSystem gs = parse_map(g, sp);
            RobustnessMargin margin = robust_margin(cert.lambda, lambda_prime);
            CertificateCheck check = verify_certificate(fs, gs, margin, cert, ps);
            cfg["g"] = g;
            cfg["lambda_prime"] = lambda_prime;
            doc["report"]["margin"] = margin;
            doc["report"]["verification"] = check;
            rc = cert.ok && check.pass ? 0 : 1;
        }
        emit_doc(doc, out);
        return rc;
    }
};

struct ShadowCmd {
    std::string x0, out;
    double delta = 1e-3;
    int steps = 60;
    std::uint64_t seed = 0;

    int run() const {
        MapSystem f = cat_system();
        ToralAutomorphism a = cat_matrix();
        TorusPoint start;
        if (x0.empty()) {
            CounterRng rng(seed, 7);
            start = TorusPoint{rng.uniform(), rng.uniform()};
        } else {
            auto nums = parse_double_list(x0);
            if (nums.size() != 2)
                throw std::invalid_argument("--x0 expects x,y");
            start = TorusPoint{wrap01(nums[0]), wrap01(nums[1])};
        }
        PseudoOrbit po = make_pseudo_orbit(f, start, delta, steps, seed);
        ShadowResult res = shadow_linear(a, po);
        bool ok = res.residual < 1e-10 && res.sup_correction <= res.bound;

        json doc = base_doc("shadow");
        auto& cfg = doc["config"];
        cfg["x0"] = json{{"x", start.x}, {"y", start.y}};
        cfg["delta"] = delta;
        cfg["steps"] = steps;
        cfg["seed"] = seed;
        doc["report"] = res;
        doc["report"]["ok"] = ok;
        emit_doc(doc, out);
        return ok ? 0 : 1;
    }
};

struct ConjugacyCmd {
    std::string g, out, csv;
    int grid = 64;
    int steps = 60;

    int run() const {
        ToralAutomorphism a = cat_matrix();
        MapSystem gs = parse_map(g, torus_space());
        ConjugacyField field = build_conjugacy(a, gs, grid, steps);

        if (!csv.empty()) {
            std::string text = "x1,x2,h1,h2,dev\n";
            for (std::size_t i = 0; i < field.grid.size(); ++i) {
                text += format_double(field.grid[i].x) + ',' +
                        format_double(field.grid[i].y) + ',' +
                        format_double(field.h[i].x) + ',' +
                        format_double(field.h[i].y) + ',' +
                        format_double(field.deviation[i]) + '\n';
            }
            emit_text(text, csv);
        }

        json doc = base_doc("conjugacy");
        auto& cfg = doc["config"];
        cfg["g"] = g;
        cfg["grid"] = grid;
        cfg["steps"] = steps;
        if (!csv.empty()) cfg["csv"] = csv;
        doc["report"] = field;
        emit_doc(doc, out);
        return field.injectivity_margin > 0.0 ? 0 : 1;
    }
};

struct CounterexampleCmd {
    std::string epsilons = "0.5,0.2,0.1";
    std::size_t pairs = 100000;
    std::uint64_t seed = 0;
    std::string out, csv;

    int run() const {
        std::vector<double> eps = parse_double_list(epsilons);
        PairSample ps = polar_pair_sample(pairs, seed);

        json doc = base_doc("counterexample");
        auto& cfg = doc["config"];
        cfg["epsilons"] = eps;
        cfg["pairs"] = pairs;
        cfg["seed"] = seed;
        doc["report"]["cases"] = json::array();

        std::string text = "epsilon,dw_prime,c1_gap\n";
        bool all_ok = true;
        for (double e : eps) {
            GammaProfile prof = gamma_build(e);
            RatioCheck rc = dw_prime_ratio_check(prof, ps);
            double gap = c1_gap(prof);
            double dw = std::max(rc.dw_prime_fwd, rc.dw_prime_inv);
            bool ok = dw <= e;
            all_ok = all_ok && ok;
            json entry = rc;
            entry["epsilon"] = e;
            entry["c1_gap"] = gap;
            entry["within_epsilon"] = ok;
            doc["report"]["cases"].push_back(entry);
            text += format_double(e) + ',' + format_double(dw) + ',' +
                    format_double(gap) + '\n';
        }
        if (!csv.empty()) {
            cfg["csv"] = csv;
            emit_text(text, csv);
        }
        emit_doc(doc, out);
        return all_ok ? 0 : 1;
    }
};

struct ConeCmd {
    int prongs = 3;
    std::size_t family = 50;
    std::uint64_t seed = 0;
    double tol = 1e-2;
    std::string out;

    int run() const {
        FixSetReport rep = fix_set_stability(prongs, family, seed, tol);
        json doc = base_doc("cone");
        auto& cfg = doc["config"];
        cfg["prongs"] = prongs;
        cfg["family"] = family;
        cfg["seed"] = seed;
        cfg["tol"] = tol;
        doc["report"] = rep;
        emit_doc(doc, out);
        return rep.ok ? 0 : 1;
    }
};

struct IntervalCmd {
    std::string f, g, out;
    int grid = 2001;

    int run() const {
        IntervalDiffeo fd = parse_diffeo(f);
        IntervalDiffeo gd = parse_diffeo(g);
        DerivSlopeReport rep = interval_dw_vs_c1(fd, gd, grid);
        json doc = base_doc("interval");
        auto& cfg = doc["config"];
        cfg["f"] = f;
        cfg["g"] = g;
        cfg["grid"] = grid;
        doc["report"] = rep;
        emit_doc(doc, out);
        return rep.holds ? 0 : 1;
    }
};

}  // namespace
}  // namespace lipexp

int main(int argc, char** argv) {
    using namespace lipexp;

    CLI::App app{"Metrics, expansiveness certificates, and stability checks "
                 "for bi-Lipschitz dynamical systems"};
    app.require_subcommand(1);

    MetricsCmd metrics;
    auto* m = app.add_subcommand(
        "metrics", "Distances between two maps over a sampled pair cloud");
    m->add_option("--space", metrics.space, "torus | disk | interval | shift:W,A")
        ->required();
    m->add_option("--f", metrics.f, "first map")->required();
    m->add_option("--g", metrics.g, "second map")->required();
    m->add_option("--pairs", metrics.pairs, "sample size");
    m->add_option("--seed", metrics.seed, "sampling seed")->required();
    m->add_option("--max-sep", metrics.max_sep, "cap on pair separation");
    m->add_option("--eq-margin", metrics.eq_margin,
                  "safety margin in the equivalence hypothesis");
    m->add_option("--out", metrics.out, "write the JSON report here");

    CertifyCmd certify;
    auto* c = app.add_subcommand(
        "certify", "Expansion certificate, optionally verified for a "
                   "perturbed map");
    c->add_option("--space", certify.space, "usually shift:W,A")->required();
    c->add_option("--f", certify.f, "map to certify")->required();
    c->add_option("--delta", certify.delta, "closeness scale")->required();
    c->add_flag("--exhaustive", certify.exhaustive,
                "check every interior pair of an enumerable space");
    c->add_option("--pairs", certify.pairs, "sample size when not exhaustive");
    auto* seed_opt = c->add_option("--seed", certify.seed, "sampling seed");
    c->add_option("--max-sep", certify.max_sep, "cap on pair separation");
    c->add_option("--g", certify.g, "perturbed map to verify");
    auto* lp_opt = c->add_option("--lambda-prime", certify.lambda_prime,
                                 "expansion floor the perturbed map must keep");
    c->add_option("--out", certify.out, "write the JSON report here");

    ShadowCmd shadow;
    auto* s = app.add_subcommand(
        "shadow", "Correct a noisy hyperbolic-automorphism orbit");
    s->add_option("--x0", shadow.x0, "start point x,y (default: from seed)");
    s->add_option("--delta", shadow.delta, "noise amplitude");
    s->add_option("--steps", shadow.steps, "window half-length");
    s->add_option("--seed", shadow.seed, "noise seed")->required();
    s->add_option("--out", shadow.out, "write the JSON report here");

    ConjugacyCmd conjugacy;
    auto* cj = app.add_subcommand(
        "conjugacy", "Grid-sampled conjugation from a perturbed map back to "
                     "the automorphism");
    cj->add_option("--g", conjugacy.g, "perturbed torus map")->required();
    cj->add_option("--grid", conjugacy.grid, "grid resolution per axis");
    cj->add_option("--steps", conjugacy.steps, "orbit half-length");
    cj->add_option("--csv", conjugacy.csv, "write per-cell rows here");
    cj->add_option("--out", conjugacy.out, "write the JSON report here");

    CounterexampleCmd cx;
    auto* x = app.add_subcommand(
        "counterexample", "Disk twists that stay metrically tame while their "
                          "derivative gap stays at 2");
    x->add_option("--epsilons", cx.epsilons, "comma list of twist rates");
    x->add_option("--pairs", cx.pairs, "sample size");
    x->add_option("--seed", cx.seed, "sampling seed")->required();
    x->add_option("--csv", cx.csv, "write epsilon,dw_prime,c1_gap rows here");
    x->add_option("--out", cx.out, "write the JSON report here");

    ConeCmd cone;
    auto* cn = app.add_subcommand(
        "cone", "Lipschitz cost of moving a cone apex, swept over a family");
    cn->add_option("--prongs", cone.prongs, "number of prongs (>= 2)");
    cn->add_option("--family", cone.family, "family size");
    cn->add_option("--seed", cone.seed, "family seed")->required();
    cn->add_option("--tol", cone.tol, "slack against the n/2 bound");
    cn->add_option("--out", cone.out, "write the JSON report here");

    IntervalCmd interval;
    auto* iv = app.add_subcommand(
        "interval", "Slope metric against derivative gap for interval "
                    "diffeomorphisms");
    iv->add_option("--f", interval.f, "first diffeo (id | poly:c)")->required();
    iv->add_option("--g", interval.g, "second diffeo")->required();
    iv->add_option("--grid", interval.grid, "derivative grid size");
    iv->add_option("--out", interval.out, "write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    certify.seed_set = seed_opt->count() > 0;
    certify.lambda_prime_set = lp_opt->count() > 0;

    try {
        if (m->parsed()) return metrics.run();
        if (c->parsed()) return certify.run();
        if (s->parsed()) return shadow.run();
        if (cj->parsed()) return conjugacy.run();
        if (x->parsed()) return cx.run();
        if (cn->parsed()) return cone.run();
        if (iv->parsed()) return interval.run();
    } catch (const precondition_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
