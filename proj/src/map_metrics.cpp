#include "lipexp/map_metrics.hpp"

#include <cmath>
#include <limits>

namespace lipexp {

namespace {

std::vector<Point> apply_all(const std::function<Point(const Point&)>& f,
                             const std::vector<Point>& pts) {
    std::vector<Point> out;
    out.reserve(pts.size());
    for (const auto& p : pts) out.push_back(f(p));
    return out;
}

void require_pairs(const PairSample& pairs) {
    if (pairs.pairs.empty())
        throw precondition_error("empty pair sample");
}

}  // namespace

double dist_c0(const MapSystem& f, const MapSystem& g,
               const std::vector<Point>& pts) {
    if (!f.space.same_space(g.space))
        throw precondition_error("dist_c0: maps live on different spaces");
    if (pts.empty()) throw precondition_error("dist_c0: empty point list");
    const MetricSpace& sp = f.space;
    double fwd = 0.0, inv = 0.0;
    for (const auto& p : pts) {
        fwd = std::max(fwd, sp.distance(f.fwd(p), g.fwd(p)));
        inv = std::max(inv, sp.distance(f.inv(p), g.inv(p)));
    }
    return fwd + inv;
}

double dist_w_prime(const MapSystem& f, const MapSystem& g,
                    const PairSample& pairs) {
    require_pairs(pairs);
    const MetricSpace& sp = f.space;
    auto fi = apply_all(f.forward, pairs.points);
    auto gi = apply_all(g.forward, pairs.points);
    double best = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [a, b] = pairs.pairs[i];
        double d = pairs.pair_dist(sp, i);
        if (!(d > 0.0)) throw precondition_error("dist_w_prime: coincident pair");
        double v = std::abs(sp.distance(fi[a], fi[b]) - sp.distance(gi[a], gi[b])) / d;
        best = std::max(best, v);
    }
    return best;
}

double dist_w(const MapSystem& f, const MapSystem& g, const PairSample& pairs,
              const std::vector<Point>& pts) {
    return dist_c0(f, g, pts) + dist_w_prime(f, g, pairs) +
           dist_w_prime(inverted(f), inverted(g), pairs);
}

double dist_l_prime(const MapSystem& f, const MapSystem& g,
                    const PairSample& pairs) {
    require_pairs(pairs);
    const MetricSpace& sp = f.space;
    auto fi = apply_all(f.forward, pairs.points);
    auto gi = apply_all(g.forward, pairs.points);
    double best = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [a, b] = pairs.pairs[i];
        double df = sp.distance(fi[a], fi[b]);
        double dg = sp.distance(gi[a], gi[b]);
        if (df <= 1e-14 || dg <= 1e-14)
            throw precondition_error(
                "dist_l_prime: image pair collapsed below roundoff");
        best = std::max(best, std::abs(std::log(df / dg)));
    }
    return best;
}

double dist_l(const MapSystem& f, const MapSystem& g, const PairSample& pairs,
              const std::vector<Point>& pts) {
    return dist_c0(f, g, pts) + dist_l_prime(f, g, pairs) +
           dist_l_prime(inverted(f), inverted(g), pairs);
}

MapMetricReport metric_report(const MapSystem& f, const MapSystem& g,
                              const PairSample& pairs,
                              const std::vector<Point>& pts) {
    if (!f.space.same_space(g.space))
        throw precondition_error("metric_report: maps live on different spaces");
    if (pts.empty()) throw precondition_error("metric_report: empty point list");
    require_pairs(pairs);
    const MetricSpace& sp = f.space;
    MapMetricReport r;

    for (const auto& p : pts) {
        double vf = sp.distance(f.fwd(p), g.fwd(p));
        if (vf > r.c0_fwd_witness.value) r.c0_fwd_witness = {p, vf};
        double vi = sp.distance(f.inv(p), g.inv(p));
        if (vi > r.c0_inv_witness.value) r.c0_inv_witness = {p, vi};
    }
    r.c0 = r.c0_fwd_witness.value + r.c0_inv_witness.value;

    auto ff = apply_all(f.forward, pairs.points);
    auto gf = apply_all(g.forward, pairs.points);
    auto fb = apply_all(f.inverse, pairs.points);
    auto gb = apply_all(g.inverse, pairs.points);

    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [a, b] = pairs.pairs[i];
        double d = pairs.pair_dist(sp, i);
        if (!(d > 0.0)) throw precondition_error("metric_report: coincident pair");
        double dff = sp.distance(ff[a], ff[b]);
        double dgf = sp.distance(gf[a], gf[b]);
        double dfb = sp.distance(fb[a], fb[b]);
        double dgb = sp.distance(gb[a], gb[b]);

        double wf = std::abs(dff - dgf) / d;
        if (wf > r.w_fwd_witness.value)
            r.w_fwd_witness = {pairs.points[a], pairs.points[b], wf};
        double wi = std::abs(dfb - dgb) / d;
        if (wi > r.w_inv_witness.value)
            r.w_inv_witness = {pairs.points[a], pairs.points[b], wi};

        if (dff <= 1e-14 || dgf <= 1e-14 || dfb <= 1e-14 || dgb <= 1e-14)
            throw precondition_error(
                "metric_report: image pair collapsed below roundoff");
        double lf = std::abs(std::log(dff / dgf));
        if (lf > r.l_fwd_witness.value)
            r.l_fwd_witness = {pairs.points[a], pairs.points[b], lf};
        double li = std::abs(std::log(dfb / dgb));
        if (li > r.l_inv_witness.value)
            r.l_inv_witness = {pairs.points[a], pairs.points[b], li};
    }
    r.w_prime_fwd = r.w_fwd_witness.value;
    r.w_prime_inv = r.w_inv_witness.value;
    r.l_prime_fwd = r.l_fwd_witness.value;
    r.l_prime_inv = r.l_inv_witness.value;
    r.w = r.c0 + r.w_prime_fwd + r.w_prime_inv;
    r.l = r.c0 + r.l_prime_fwd + r.l_prime_inv;
    return r;
}

double lips_estimate(const MapSystem& f, const PairSample& pairs) {
    require_pairs(pairs);
    const MetricSpace& sp = f.space;
    auto fi = apply_all(f.forward, pairs.points);
    double best = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [a, b] = pairs.pairs[i];
        double d = pairs.pair_dist(sp, i);
        if (!(d > 0.0)) throw precondition_error("lips_estimate: coincident pair");
        best = std::max(best, sp.distance(fi[a], fi[b]) / d);
    }
    return best;
}

LipschitzNorm norm_l(const MapSystem& f, const PairSample& pairs,
                     const std::vector<Point>& pts) {
    require_pairs(pairs);
    if (pts.empty()) throw precondition_error("norm_l: empty point list");
    const MetricSpace& sp = f.space;
    LipschitzNorm n;
    for (const auto& p : pts)
        n.c0_norm = std::max(n.c0_norm, sp.distance(p, f.fwd(p)));

    auto fi = apply_all(f.forward, pairs.points);
    double lips_fwd = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [a, b] = pairs.pairs[i];
        double d = pairs.pair_dist(sp, i);
        if (!(d > 0.0)) throw precondition_error("norm_l: coincident pair");
        lips_fwd = std::max(lips_fwd, sp.distance(fi[a], fi[b]) / d);
    }
    // f^-1 probed on the f-image of the same pairs.
    auto back = apply_all(f.inverse, fi);
    double lips_inv = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [a, b] = pairs.pairs[i];
        double d = sp.distance(fi[a], fi[b]);
        if (!(d > 0.0)) throw precondition_error("norm_l: collapsed image pair");
        lips_inv = std::max(lips_inv, sp.distance(back[a], back[b]) / d);
    }
    n.loglips_fwd = std::max(0.0, std::log(lips_fwd));
    n.loglips_inv = std::max(0.0, std::log(lips_inv));
    n.value = n.c0_norm + std::max(n.loglips_fwd, n.loglips_inv);
    return n;
}

PairSample transported_pairs(const MapSystem& f, const PairSample& pairs) {
    PairSample out;
    out.points = apply_all(f.forward, pairs.points);
    out.pairs = pairs.pairs;
    out.dist.reserve(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [a, b] = pairs.pairs[i];
        out.dist.push_back(f.space.distance(out.points[a], out.points[b]));
    }
    return out;
}

std::vector<Point> transported_points(const MapSystem& f,
                                      const std::vector<Point>& pts) {
    return apply_all(f.forward, pts);
}

double norm_induced_dist(const MapSystem& f, const MapSystem& g,
                         const PairSample& pairs,
                         const std::vector<Point>& pts) {
    if (!f.space.same_space(g.space))
        throw precondition_error("norm_induced_dist: maps live on different spaces");
    MapSystem gi = inverted(g);
    MapSystem fi = inverted(f);
    // |f g^-1| on the g-image of the samples, |g^-1 f| on the f^-1-image:
    // the change of variables that matches the direct metric.
    LipschitzNorm n1 = norm_l(compose(f, gi), transported_pairs(g, pairs),
                              transported_points(g, pts));
    LipschitzNorm n2 = norm_l(compose(gi, f), transported_pairs(fi, pairs),
                              transported_points(fi, pts));
    return n1.value + n2.value;
}

EquivalenceReport equivalence_check(const MapSystem& f, const MapSystem& g,
                                    const PairSample& pairs,
                                    const std::vector<Point>& pts,
                                    double margin) {
    require_pairs(pairs);
    const MetricSpace& sp = f.space;
    EquivalenceReport rep;
    rep.d_w = dist_w(f, g, pairs, pts);
    rep.d_l = dist_l(f, g, pairs, pts);

    auto ff = apply_all(f.forward, pairs.points);
    auto gf = apply_all(g.forward, pairs.points);
    auto fb = apply_all(f.inverse, pairs.points);
    auto gb = apply_all(g.inverse, pairs.points);
    double rho = std::numeric_limits<double>::infinity();
    double lips_f = 0.0, lips_g = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        auto [a, b] = pairs.pairs[i];
        double d = pairs.pair_dist(sp, i);
        for (double img : {sp.distance(ff[a], ff[b]), sp.distance(gf[a], gf[b]),
                           sp.distance(fb[a], fb[b]), sp.distance(gb[a], gb[b])})
            rho = std::min(rho, img / d);
        lips_f = std::max(lips_f, sp.distance(ff[a], ff[b]) / d);
        lips_g = std::max(lips_g, sp.distance(gf[a], gf[b]) / d);
    }
    rep.rho_min = rho;
    rep.k = std::max(1.0, 1.0 / rho);
    rep.delta_cap = 1.0 / std::max(lips_f, lips_g) - margin;
    rep.hypothesis_met = rep.d_w < rep.delta_cap;
    rep.holds = rep.d_l <= rep.k * rep.d_w + 1e-12;
    return rep;
}

}  // namespace lipexp
