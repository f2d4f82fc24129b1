#include "lipexp/shadowing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lipexp {

namespace {

TorusPoint as_torus(const Point& p) { return std::get<TorusPoint>(p); }

// Minimal lift of q - p into (-1/2, 1/2]^2.  Valid as the "true"
// difference whenever the underlying displacement is known to be < 1/2
// per coordinate.
Vec2 lifted_diff(const TorusPoint& q, const TorusPoint& p) {
    return Vec2{wrap_half(q.x - p.x), wrap_half(q.y - p.y)};
}

TorusPoint shifted(const TorusPoint& p, const Vec2& v) {
    return TorusPoint{wrap01(p.x + v.x), wrap01(p.y + v.y)};
}

// Step defects d_n = x_{n+1} - A x_n, lifted, for n over the whole window.
// Throws when a lift is too large to be trusted.
std::vector<Vec2> step_defects(const ToralAutomorphism& a,
                               const std::vector<TorusPoint>& pts) {
    std::vector<Vec2> d(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        d[i] = lifted_diff(pts[i + 1], a.fwd(pts[i]));
        if (d[i].norm() >= 0.25)
            throw precondition_error(
                "shadowing: step defect too large to lift unambiguously");
    }
    return d;
}

// Correction at window position `center` (index into pts) from one-sided
// truncated geometric sums: the unstable component only sees forward
// defects, the stable component only backward ones.
Vec2 center_correction(const ToralAutomorphism& a, const std::vector<Vec2>& d,
                       std::size_t center, int n_steps) {
    double u = 0.0;
    double wu = 1.0 / a.lambda_u;
    for (int j = 0; j < n_steps; ++j) {
        u += wu * d[center + std::size_t(j)].dot(a.unit_u);
        wu /= a.lambda_u;
    }
    double s = 0.0;
    double ws = 1.0;
    for (int j = 0; j < n_steps; ++j) {
        s -= ws * d[center - 1 - std::size_t(j)].dot(a.unit_s);
        ws *= a.lambda_s;
    }
    return a.unit_u * u + a.unit_s * s;
}

// g-orbit of x over n in [-n_steps, n_steps + extra_fwd].
std::vector<TorusPoint> orbit_of(const MapSystem& g, const TorusPoint& x,
                                 int n_steps, int extra_fwd) {
    std::vector<TorusPoint> pts(std::size_t(2 * n_steps + 1 + extra_fwd));
    pts[std::size_t(n_steps)] = x;
    Point fwd = x;
    for (int n = 1; n <= n_steps + extra_fwd; ++n) {
        fwd = g.forward(fwd);
        pts[std::size_t(n_steps + n)] = as_torus(fwd);
    }
    Point bwd = x;
    for (int n = 1; n <= n_steps; ++n) {
        bwd = g.inverse(bwd);
        pts[std::size_t(n_steps - n)] = as_torus(bwd);
    }
    return pts;
}

}  // namespace

PseudoOrbit make_pseudo_orbit(const MapSystem& f, TorusPoint x0, double delta,
                              int n_steps, std::uint64_t seed) {
    if (f.space.kind != SpaceKind::torus)
        throw precondition_error("make_pseudo_orbit: torus maps only");
    if (!(delta >= 0.0) || n_steps < 1)
        throw precondition_error("make_pseudo_orbit: need delta >= 0, steps >= 1");
    CounterRng rng(seed, 0x0dd17);
    auto noise = [&]() {
        double r = delta * std::sqrt(rng.uniform());
        double th = 2.0 * M_PI * rng.uniform();
        return Vec2{r * std::cos(th), r * std::sin(th)};
    };

    PseudoOrbit po;
    po.n_back = po.n_fwd = n_steps;
    po.delta = delta;
    po.points.resize(std::size_t(2 * n_steps + 1));
    po.points[std::size_t(n_steps)] = x0;
    TorusPoint cur = x0;
    for (int n = 1; n <= n_steps; ++n) {
        cur = shifted(as_torus(f.forward(cur)), noise());
        po.points[std::size_t(n_steps + n)] = cur;
    }
    cur = x0;
    for (int n = 1; n <= n_steps; ++n) {
        cur = as_torus(f.inverse(shifted(cur, noise())));
        po.points[std::size_t(n_steps - n)] = cur;
    }
    return po;
}

ShadowResult shadow_linear(const ToralAutomorphism& a, const PseudoOrbit& po) {
    if (po.length() < 3)
        throw precondition_error("shadow_linear: window too short");
    const std::size_t m = po.points.size();
    std::vector<Vec2> d = step_defects(a, po.points);

    // Eigen components of the defects.
    std::vector<double> du(d.size()), ds(d.size());
    double max_defect = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        du[i] = d[i].dot(a.unit_u);
        ds[i] = d[i].dot(a.unit_s);
        max_defect = std::max(max_defect, d[i].norm());
    }

    // Correction e_n = u_n unit_u + s_n unit_s solving
    // e_{n+1} = A e_n - d_n with u pinned to 0 at the forward end and s at
    // the backward end; dividing by lambda_u keeps the backward recursion
    // contracting.
    std::vector<double> u(m, 0.0), s(m, 0.0);
    for (std::size_t i = m - 1; i-- > 0;) u[i] = (du[i] + u[i + 1]) / a.lambda_u;
    for (std::size_t i = 0; i + 1 < m; ++i) s[i + 1] = a.lambda_s * s[i] - ds[i];

    ShadowResult out;
    out.max_defect = max_defect;
    out.bound = po.delta * (1.0 / (1.0 - a.lambda_s) + 1.0 / (a.lambda_u - 1.0));
    out.correction.resize(m);
    out.orbit.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        Vec2 e = a.unit_u * u[i] + a.unit_s * s[i];
        out.correction[i] = e;
        out.sup_correction = std::max(out.sup_correction, e.norm());
        out.orbit[i] = shifted(po.points[i], e);
    }
    for (std::size_t i = 0; i + 1 < m; ++i) {
        out.residual = std::max(
            out.residual, torus_distance(a.fwd(out.orbit[i]), out.orbit[i + 1]));
    }
    return out;
}

TorusPoint conjugacy_at(const ToralAutomorphism& a, const MapSystem& g,
                        const TorusPoint& x, int n_steps) {
    if (n_steps < 1) throw precondition_error("conjugacy_at: need steps >= 1");
    std::vector<TorusPoint> pts = orbit_of(g, x, n_steps, 0);
    std::vector<Vec2> d = step_defects(a, pts);
    Vec2 e = center_correction(a, d, std::size_t(n_steps), n_steps);
    return shifted(x, e);
}

ConjugacyField build_conjugacy(const ToralAutomorphism& a, const MapSystem& g,
                               int grid_n, int n_steps) {
    if (g.space.kind != SpaceKind::torus)
        throw precondition_error("build_conjugacy: torus maps only");
    if (grid_n < 2 || n_steps < 1)
        throw precondition_error("build_conjugacy: need grid >= 2, steps >= 1");

    ConjugacyField out;
    out.grid_n = grid_n;
    out.n_steps = n_steps;
    const std::size_t cells = std::size_t(grid_n) * std::size_t(grid_n);
    out.grid.resize(cells);
    out.h.resize(cells);
    out.deviation.resize(cells);

    const std::size_t center = std::size_t(n_steps);
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            TorusPoint x{double(i) / grid_n, double(j) / grid_n};
            std::size_t idx = std::size_t(i) * std::size_t(grid_n) + std::size_t(j);
            out.grid[idx] = x;

            // One extra forward point serves both windows: [-N, N] centered
            // at x and [-N+1, N+1] centered at g(x).
            std::vector<TorusPoint> pts = orbit_of(g, x, n_steps, 1);
            std::vector<Vec2> d = step_defects(a, pts);
            Vec2 e0 = center_correction(a, d, center, n_steps);
            Vec2 e1 = center_correction(a, d, center + 1, n_steps);

            TorusPoint hx = shifted(x, e0);
            TorusPoint hgx = shifted(pts[center + 1], e1);
            out.h[idx] = hx;
            double dev = lifted_diff(hx, x).norm();
            out.deviation[idx] = dev;
            out.id_dist = std::max(out.id_dist, dev);
            out.residual =
                std::max(out.residual, torus_distance(a.fwd(hx), hgx));
        }
    }

    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_n; ++i) {
        for (int j = 0; j < grid_n; ++j) {
            std::size_t idx = std::size_t(i) * std::size_t(grid_n) + std::size_t(j);
            std::size_t right =
                std::size_t(i) * std::size_t(grid_n) + std::size_t((j + 1) % grid_n);
            std::size_t down =
                std::size_t((i + 1) % grid_n) * std::size_t(grid_n) + std::size_t(j);
            margin = std::min(margin, torus_distance(out.h[idx], out.h[right]));
            margin = std::min(margin, torus_distance(out.h[idx], out.h[down]));
        }
    }
    out.injectivity_margin = margin;
    return out;
}

PersistenceReport persistence_check(const ToralAutomorphism& a,
                                    const MapSystem& g,
                                    const std::vector<TorusPoint>& anchors,
                                    int n_steps, double eps) {
    if (anchors.empty())
        throw precondition_error("persistence_check: no anchor points");
    if (!(eps > 0.0))
        throw precondition_error("persistence_check: eps must be positive");

    PersistenceReport rep;
    rep.count = anchors.size();
    rep.eps = eps;
    for (const TorusPoint& x : anchors) {
        // Solve h(y) = x by damped-free fixed point y <- y - (h(y) - x);
        // h - id is a small Lipschitz displacement so this contracts.
        TorusPoint y = x;
        for (int it = 0; it < 100; ++it) {
            Vec2 err = lifted_diff(conjugacy_at(a, g, y, n_steps), x);
            y = shifted(y, err * -1.0);
            if (err.norm() < 1e-13) break;
        }
        // Direct verification on the orbit pair.
        double dev = 0.0;
        Point gy = y;
        TorusPoint ax = x;
        for (int n = 1; n <= n_steps; ++n) {
            gy = g.forward(gy);
            ax = a.fwd(ax);
            dev = std::max(dev, torus_distance(as_torus(gy), ax));
        }
        gy = y;
        ax = x;
        for (int n = 1; n <= n_steps; ++n) {
            gy = g.inverse(gy);
            ax = a.inv(ax);
            dev = std::max(dev, torus_distance(as_torus(gy), ax));
        }
        dev = std::max(dev, torus_distance(y, x));
        rep.worst_deviation = std::max(rep.worst_deviation, dev);
        if (dev < eps) ++rep.matched;
    }
    rep.all_ok = rep.matched == rep.count;
    return rep;
}

}  // namespace lipexp
