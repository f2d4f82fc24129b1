#include "lipexp/smooth_compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lipexp {

namespace {

// Ramp shape and slope: S(0) = S'(0) = 0, S(1) = 1/2, S'(1) = 1, with
// S' in [0, 1] throughout, so ramp slopes interpolate 0 and -epsilon
// without overshoot.
double ramp_s(double u) { return u * u * u - 0.5 * u * u * u * u; }
double ramp_sp(double u) { return 3.0 * u * u - 2.0 * u * u * u; }

double clamp01(double u) { return std::clamp(u, 0.0, 1.0); }

}  // namespace

GammaProfile gamma_build(double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon <= 1.4))
        throw precondition_error(
            "gamma_build: epsilon outside (0, 1.4]; the outer plateau must "
            "start inside the unit disk");
    GammaProfile p;
    p.epsilon = epsilon;
    p.k = epsilon * std::log(epsilon / 2.0);
    p.h = 0.5 * std::log(2.0);
    p.t_d = p.k / epsilon;
    p.t_c = (p.k - M_PI) / epsilon;
    p.t_a = p.t_c - p.h;
    p.a = std::exp(p.t_a);
    p.c = std::exp(p.t_c);
    p.d = std::exp(p.t_d);
    p.b = std::exp(p.t_d + p.h);
    return p;
}

double GammaProfile::gamma(double r) const {
    if (r <= a) return M_PI;
    if (r >= b) return 0.0;
    double t = std::log(r);
    if (t < t_c + h) {
        double u = clamp01((t - t_a) / (2.0 * h));
        return M_PI - 2.0 * h * epsilon * ramp_s(u);
    }
    if (t <= t_d - h) return k - epsilon * t;
    double u = clamp01((t - (t_d - h)) / (2.0 * h));
    return epsilon * h - 2.0 * h * epsilon * (u - ramp_s(u));
}

double GammaProfile::log_slope(double r) const {
    if (r <= a || r >= b) return 0.0;
    double t = std::log(r);
    if (t < t_c + h) {
        double u = clamp01((t - t_a) / (2.0 * h));
        return -epsilon * ramp_sp(u);
    }
    if (t <= t_d - h) return -epsilon;
    double u = clamp01((t - (t_d - h)) / (2.0 * h));
    return -epsilon * (1.0 - ramp_sp(u));
}

double GammaProfile::dgamma(double r) const {
    if (r <= a || r >= b) return 0.0;
    return log_slope(r) / r;
}

DiskPoint counterexample_apply(const GammaProfile& prof, const DiskPoint& p) {
    double r = std::hypot(p.x, p.y);
    if (r <= prof.a) return DiskPoint{-p.x, -p.y};
    if (r >= prof.b) return p;
    double g = prof.gamma(r);
    double cg = std::cos(g), sg = std::sin(g);
    return DiskPoint{cg * p.x - sg * p.y, sg * p.x + cg * p.y};
}

DiskPoint counterexample_unapply(const GammaProfile& prof, const DiskPoint& p) {
    double r = std::hypot(p.x, p.y);
    if (r <= prof.a) return DiskPoint{-p.x, -p.y};
    if (r >= prof.b) return p;
    double g = prof.gamma(r);
    double cg = std::cos(g), sg = std::sin(g);
    return DiskPoint{cg * p.x + sg * p.y, -sg * p.x + cg * p.y};
}

MapSystem polar_twist_system(double epsilon) {
    GammaProfile prof = gamma_build(epsilon);
    MapSystem m;
    m.space = disk_space();
    m.name = "twist(eps=" + format_double(epsilon) + ")";
    m.forward = [prof](const Point& p) -> Point {
        return counterexample_apply(prof, std::get<DiskPoint>(p));
    };
    m.inverse = [prof](const Point& p) -> Point {
        return counterexample_unapply(prof, std::get<DiskPoint>(p));
    };
    return m;
}

Mat2 twist_jacobian(const GammaProfile& prof, const DiskPoint& p) {
    double r = std::hypot(p.x, p.y);
    if (r <= prof.a) return Mat2{-1.0, 0.0, 0.0, -1.0};
    if (r >= prof.b) return mat2_identity();
    double g = prof.gamma(r);
    double dg = prof.dgamma(r);
    double cg = std::cos(g), sg = std::sin(g);
    Mat2 rot{cg, -sg, sg, cg};
    // Rank-one part dg * (J R p) (p / r)^T.
    Vec2 rp{cg * p.x - sg * p.y, sg * p.x + cg * p.y};
    Vec2 jrp{-rp.y, rp.x};
    Vec2 unit{p.x / r, p.y / r};
    return Mat2{rot.a + dg * jrp.x * unit.x, rot.b + dg * jrp.x * unit.y,
                rot.c + dg * jrp.y * unit.x, rot.d + dg * jrp.y * unit.y};
}

double c1_gap(const GammaProfile& prof) {
    Mat2 at0 = twist_jacobian(prof, DiskPoint{0.0, 0.0});
    Mat2 gap{at0.a - 1.0, at0.b, at0.c, at0.d - 1.0};
    return gap.op_norm();
}

RatioCheck dw_prime_ratio_check(const GammaProfile& prof,
                                const PairSample& pairs) {
    if (pairs.pairs.empty())
        throw precondition_error("dw_prime_ratio_check: empty pair sample");
    RatioCheck out;
    out.min_ratio = std::numeric_limits<double>::infinity();
    out.pairs = pairs.pairs.size();

    std::vector<DiskPoint> fwd(pairs.points.size()), inv(pairs.points.size());
    for (std::size_t i = 0; i < pairs.points.size(); ++i) {
        const DiskPoint& p = std::get<DiskPoint>(pairs.points[i]);
        fwd[i] = counterexample_apply(prof, p);
        inv[i] = counterexample_unapply(prof, p);
    }
    const MetricSpace sp = disk_space();
    for (std::size_t i = 0; i < pairs.pairs.size(); ++i) {
        double base = pairs.pair_dist(sp, i);
        if (!(base > 0.0)) continue;
        auto [ia, ib] = pairs.pairs[i];
        double df = disk_distance(fwd[ia], fwd[ib]);
        double di = disk_distance(inv[ia], inv[ib]);
        out.dw_prime_fwd = std::max(out.dw_prime_fwd, std::abs(df - base) / base);
        out.dw_prime_inv = std::max(out.dw_prime_inv, std::abs(di - base) / base);
        out.min_ratio = std::min(out.min_ratio, df / base);
        out.max_ratio = std::max(out.max_ratio, df / base);
    }
    return out;
}

PairSample polar_pair_sample(std::size_t count, std::uint64_t seed) {
    if (count == 0) throw precondition_error("polar_pair_sample: empty sample");
    CounterRng rng(seed, 0x9a1a);
    const double ln_r_lo = std::log(1e-16);
    const double ln_s_lo = std::log(1e-9);
    const double ln_s_hi = std::log(1e-2);
    PairSample out;
    out.points.reserve(2 * count);
    out.pairs.reserve(count);
    out.dist.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        double r = std::exp(ln_r_lo * (1.0 - rng.uniform()));
        double phi = 2.0 * M_PI * rng.uniform();
        DiskPoint p{r * std::cos(phi), r * std::sin(phi)};
        double s = std::exp(ln_s_lo + (ln_s_hi - ln_s_lo) * rng.uniform());
        double psi = 2.0 * M_PI * rng.uniform();
        DiskPoint q{p.x + s * std::cos(psi), p.y + s * std::sin(psi)};
        if (q.x * q.x + q.y * q.y > 1.0) {
            // Step radially inward instead; same separation, stays inside.
            double scale = (r - s) / r;
            q = DiskPoint{p.x * scale, p.y * scale};
        }
        double dcur = disk_distance(p, q);
        std::uint32_t ia = std::uint32_t(out.points.size());
        out.points.push_back(p);
        out.points.push_back(q);
        out.pairs.emplace_back(ia, ia + 1);
        out.dist.push_back(dcur);
    }
    return out;
}

PairSample twist_jacobian_probe_pairs(const GammaProfile& prof, int radii,
                                      int angles) {
    if (radii < 1 || angles < 1)
        throw precondition_error("twist_jacobian_probe_pairs: empty grid");
    PairSample out;
    const double ln_lo = std::log(1e-6), ln_hi = std::log(0.9);
    for (int i = 0; i < radii; ++i) {
        double t = radii == 1 ? 0.5 : double(i) / double(radii - 1);
        double r = std::exp(ln_lo + (ln_hi - ln_lo) * t);
        for (int j = 0; j < angles; ++j) {
            double phi = 2.0 * M_PI * double(j) / double(angles);
            DiskPoint p{r * std::cos(phi), r * std::sin(phi)};
            Mat2 m = twist_jacobian(prof, p);
            Mat2 gap{m.a - 1.0, m.b, m.c, m.d - 1.0};
            // Top right-singular vector of the gap via the larger
            // eigenvector of gap^T gap.
            double al = gap.a * gap.a + gap.c * gap.c;
            double be = gap.a * gap.b + gap.c * gap.d;
            double de = gap.b * gap.b + gap.d * gap.d;
            double half = 0.5 * (al - de);
            double lmax = 0.5 * (al + de) + std::hypot(half, be);
            Vec2 v{be, lmax - al};
            if (v.norm() < 1e-18 * std::max(1.0, lmax))
                v = al >= de ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
            v = v * (1.0 / v.norm());
            double step = std::min(1e-6, 1e-5 * r);
            DiskPoint q{p.x + step * v.x, p.y + step * v.y};
            std::uint32_t ia = std::uint32_t(out.points.size());
            out.points.push_back(p);
            out.points.push_back(q);
            out.pairs.emplace_back(ia, ia + 1);
            out.dist.push_back(disk_distance(p, q));
        }
    }
    return out;
}

double dc1_estimate(const MapSystem& f, const MapSystem& g,
                    const PairSample& pairs) {
    if (!f.space.same_space(g.space))
        throw precondition_error("dc1_estimate: maps on different spaces");
    if (pairs.points.empty() || pairs.pairs.empty())
        throw precondition_error("dc1_estimate: empty sample");
    const SpaceKind kind = f.space.kind;
    if (kind != SpaceKind::disk && kind != SpaceKind::interval)
        throw precondition_error(
            "dc1_estimate: needs a linear ambient space (disk or interval)");

    // Pointwise difference f - g as a vector, so its increments can be
    // compared against |x - y|.
    auto diff = [&](const Point& p) -> Vec2 {
        Point fp = f.forward(p), gp = g.forward(p);
        if (kind == SpaceKind::disk) {
            const auto& a = std::get<DiskPoint>(fp);
            const auto& b = std::get<DiskPoint>(gp);
            return Vec2{a.x - b.x, a.y - b.y};
        }
        return Vec2{std::get<IntervalPoint>(fp).t - std::get<IntervalPoint>(gp).t,
                    0.0};
    };

    std::vector<Vec2> d(pairs.points.size());
    double c0 = 0.0;
    for (std::size_t i = 0; i < pairs.points.size(); ++i) {
        d[i] = diff(pairs.points[i]);
        c0 = std::max(c0, d[i].norm());
    }
    double lips = 0.0;
    for (std::size_t i = 0; i < pairs.pairs.size(); ++i) {
        double base = pairs.pair_dist(f.space, i);
        if (!(base > 0.0)) continue;
        auto [ia, ib] = pairs.pairs[i];
        lips = std::max(lips, (d[ia] - d[ib]).norm() / base);
    }
    return c0 + lips;
}

DerivSlopeReport interval_dw_vs_c1(const IntervalDiffeo& f,
                                   const IntervalDiffeo& g, int grid_n) {
    if (grid_n < 3)
        throw precondition_error("interval_dw_vs_c1: grid too small");

    DerivSlopeReport rep;
    double peak_t = 0.0;
    for (int i = 0; i < grid_n; ++i) {
        double t = double(i) / double(grid_n - 1);
        double df = f.derivative(t), dg = g.derivative(t);
        if (!(df > 0.0) || !(dg > 0.0))
            throw precondition_error(
                "interval_dw_vs_c1: maps must be increasing diffeomorphisms");
        rep.c0 = std::max(rep.c0, std::abs(f.forward(t) - g.forward(t)));
        double gap = std::abs(df - dg);
        if (gap > rep.sup_deriv_gap) {
            rep.sup_deriv_gap = gap;
            peak_t = t;
        }
    }
    if (!(rep.c0 < 0.5))
        throw precondition_error(
            "interval_dw_vs_c1: maps too far apart in C0 for the slope "
            "comparison to be meaningful");

    auto slope_gap = [&](double x, double y) {
        double base = y - x;
        return std::abs((f.forward(y) - f.forward(x)) -
                        (g.forward(y) - g.forward(x))) /
               base;
    };
    double dw = 0.0;
    for (int i = 0; i + 1 < grid_n; ++i) {
        double x = double(i) / double(grid_n - 1);
        double y = double(i + 1) / double(grid_n - 1);
        dw = std::max(dw, slope_gap(x, y));
    }
    // Two-scale local pairs at the derivative-gap peak (and at every grid
    // point at the coarser scale) drive the sampled slope sup up to the
    // true derivative gap.
    for (double hstep : {1e-4, 5e-9}) {
        if (peak_t + hstep <= 1.0) dw = std::max(dw, slope_gap(peak_t, peak_t + hstep));
        if (peak_t - hstep >= 0.0) dw = std::max(dw, slope_gap(peak_t - hstep, peak_t));
    }
    for (int i = 0; i < grid_n; ++i) {
        double t = double(i) / double(grid_n - 1);
        double hstep = 1e-4;
        if (t + hstep <= 1.0) dw = std::max(dw, slope_gap(t, t + hstep));
        if (t - hstep >= 0.0) dw = std::max(dw, slope_gap(t - hstep, t));
    }
    rep.dw_prime = dw;
    rep.holds = rep.sup_deriv_gap <= dw + 1e-6;
    return rep;
}

}  // namespace lipexp
