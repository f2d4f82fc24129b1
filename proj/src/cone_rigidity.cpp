#include "lipexp/cone_rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lipexp {

namespace {

double total_angle(int prongs) { return double(prongs) * M_PI; }

double wrap_angle(double th, double total) {
    th -= total * std::floor(th / total);
    if (th >= total) th -= total;  // guard against floor roundoff
    return th < 0.0 ? 0.0 : th;
}

ConePoint as_cone(const Point& p) { return std::get<ConePoint>(p); }

double consecutive_mesh(int prongs, const std::vector<ConePoint>& pts,
                        bool closed) {
    double mesh = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        mesh = std::max(mesh, cone_distance(prongs, pts[i], pts[i + 1]));
    if (closed && pts.size() > 1)
        mesh = std::max(mesh, cone_distance(prongs, pts.back(), pts.front()));
    return mesh;
}

struct PlanarPt {
    double x = 0.0;
    double y = 0.0;
};

// n/2-power chart: unfolds the cone onto the plane, compressing angles by
// 2/n.  Isometric only radially, but bi-Lipschitz away from nothing: it is
// a global homeomorphism cone -> disk.
PlanarPt unfold(int prongs, const ConePoint& p) {
    double phi = p.theta * 2.0 / double(prongs);
    return {p.r * std::cos(phi), p.r * std::sin(phi)};
}

ConePoint fold(int prongs, const PlanarPt& z) {
    double r = std::hypot(z.x, z.y);
    if (r == 0.0) return ConePoint{0.0, 0.0};
    double phi = std::atan2(z.y, z.x);
    if (phi < 0.0) phi += 2.0 * M_PI;
    return ConePoint{r, wrap_angle(phi * double(prongs) / 2.0, total_angle(prongs))};
}

}  // namespace

double circle_length(int prongs, double r) {
    if (prongs < 2 || !(r >= 0.0))
        throw precondition_error("circle_length: need prongs >= 2 and r >= 0");
    return total_angle(prongs) * r;
}

CurveSample sample_apex_circle(int prongs, double r, int count) {
    if (count < 3)
        throw precondition_error("sample_apex_circle: need at least 3 samples");
    if (!(r > 0.0))
        throw precondition_error("sample_apex_circle: radius must be positive");
    CurveSample c;
    c.closed = true;
    c.points.reserve(std::size_t(count));
    const double total = total_angle(prongs);
    for (int k = 0; k < count; ++k)
        c.points.push_back(ConePoint{r, total * double(k) / double(count)});
    c.mesh = consecutive_mesh(prongs, c.points, true);
    return c;
}

CurveSample sample_regular_circle(int prongs, const ConePoint& center,
                                  double r1, int count) {
    if (count < 3)
        throw precondition_error("sample_regular_circle: need at least 3 samples");
    if (!(r1 > 0.0) || !(r1 < center.r))
        throw precondition_error(
            "sample_regular_circle: need 0 < r1 < center radius");
    CurveSample c;
    c.closed = true;
    c.points.reserve(std::size_t(count));
    const double total = total_angle(prongs);
    // Planar chart centered on the ray through `center`; the disk of
    // radius r1 stays in the sector |psi| <= pi/2 where the chart is
    // isometric, so these are genuine metric circles.
    for (int k = 0; k < count; ++k) {
        double phi = 2.0 * M_PI * double(k) / double(count);
        double zx = center.r + r1 * std::cos(phi);
        double zy = r1 * std::sin(phi);
        double r = std::hypot(zx, zy);
        double psi = std::atan2(zy, zx);
        c.points.push_back(ConePoint{r, wrap_angle(center.theta + psi, total)});
    }
    c.mesh = consecutive_mesh(prongs, c.points, true);
    return c;
}

double curve_length(int prongs, const CurveSample& curve) {
    const auto& pts = curve.points;
    if (pts.size() < 2)
        throw precondition_error("curve_length: need at least 2 points");
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        len += cone_distance(prongs, pts[i], pts[i + 1]);
    if (curve.closed) len += cone_distance(prongs, pts.back(), pts.front());
    return len;
}

ConePoint cone_geodesic_point(int prongs, const ConePoint& p,
                              const ConePoint& q, double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw precondition_error("cone_geodesic_point: t outside [0,1]");
    const double total = total_angle(prongs);
    double dth = q.theta - p.theta;
    dth -= total * std::round(dth / total);  // fold into (-total/2, total/2]
    if (std::abs(dth) <= M_PI) {
        // Geodesic stays inside one flat sector: planar interpolation in
        // the chart aligned with p.
        double bx = q.r * std::cos(dth), by = q.r * std::sin(dth);
        double zx = p.r + t * (bx - p.r);
        double zy = t * by;
        double r = std::hypot(zx, zy);
        if (r == 0.0) return ConePoint{0.0, 0.0};
        double psi = std::atan2(zy, zx);
        return ConePoint{r, wrap_angle(p.theta + psi, total)};
    }
    // Minimizer passes through the apex: two radial segments.
    double len = p.r + q.r;
    double s = t * len;
    if (s <= p.r) return ConePoint{p.r - s, p.theta};
    return ConePoint{s - p.r, wrap_angle(q.theta, total)};
}

CurveSample refine_midpoints(int prongs, const CurveSample& curve) {
    const auto& pts = curve.points;
    if (pts.size() < 2)
        throw precondition_error("refine_midpoints: need at least 2 points");
    CurveSample out;
    out.closed = curve.closed;
    out.points.reserve(2 * pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        out.points.push_back(pts[i]);
        bool last = i + 1 == pts.size();
        if (last && !curve.closed) break;
        const ConePoint& next = last ? pts.front() : pts[i + 1];
        out.points.push_back(cone_geodesic_point(prongs, pts[i], next, 0.5));
    }
    out.mesh = consecutive_mesh(prongs, out.points, out.closed);
    return out;
}

MapSystem cone_rotation_system(int prongs, double alpha) {
    MapSystem m;
    m.space = cone_space(prongs, 1.0);
    m.name = "cone-rot(n=" + std::to_string(prongs) + ")";
    const double total = total_angle(prongs);
    m.forward = [total, alpha](const Point& p) -> Point {
        const auto& c = std::get<ConePoint>(p);
        return ConePoint{c.r, wrap_angle(c.theta + alpha, total)};
    };
    m.inverse = [total, alpha](const Point& p) -> Point {
        const auto& c = std::get<ConePoint>(p);
        return ConePoint{c.r, wrap_angle(c.theta - alpha, total)};
    };
    return m;
}

MapSystem cone_drag_system(int prongs, double target_r, double target_theta) {
    if (!(target_r >= 0.05 && target_r <= 0.19))
        throw precondition_error("cone_drag_system: target radius outside "
                                 "[0.05, 0.19]");
    MapSystem m;
    m.space = cone_space(prongs, 1.0);
    m.name = "cone-drag(n=" + std::to_string(prongs) +
             ",r=" + format_double(target_r) + ",th=" + format_double(target_theta) +
             ")";

    const ConePoint target{target_r, target_theta};
    const PlanarPt pt = unfold(prongs, target);
    const double support = 4.0 * target_r;

    // Bump coefficient: 1 at the planar target, 0 outside radius 4 r_t.
    // Displacement -a(|P - Pt|) * Pt has Lipschitz constant <= 1.5/4, so
    // both the map and the fixed-point inversion are well posed.
    auto coeff = [support](double dd) {
        return smoothstep(1.0 - dd / support);
    };
    auto drag = [pt, coeff](PlanarPt z) {
        double a = coeff(std::hypot(z.x - pt.x, z.y - pt.y));
        return PlanarPt{z.x - a * pt.x, z.y - a * pt.y};
    };
    auto undrag = [pt, coeff](PlanarPt w) {
        PlanarPt z = w;
        for (int it = 0; it < 200; ++it) {
            double a = coeff(std::hypot(z.x - pt.x, z.y - pt.y));
            PlanarPt next{w.x + a * pt.x, w.y + a * pt.y};
            double step = std::hypot(next.x - z.x, next.y - z.y);
            z = next;
            if (step < 1e-15) break;
        }
        return z;
    };

    m.forward = [prongs, drag](const Point& p) -> Point {
        return fold(prongs, drag(unfold(prongs, std::get<ConePoint>(p))));
    };
    m.inverse = [prongs, undrag](const Point& p) -> Point {
        return fold(prongs, undrag(unfold(prongs, std::get<ConePoint>(p))));
    };
    return m;
}

std::vector<MapSystem> cone_stress_family(int prongs, std::size_t count,
                                          std::uint64_t seed) {
    if (count == 0)
        throw precondition_error("cone_stress_family: empty family");
    CounterRng rng(seed, 0xc031);
    std::vector<MapSystem> family;
    family.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        double rt = 0.05 + 0.14 * rng.uniform();
        double th = total_angle(prongs) * rng.uniform();
        family.push_back(cone_drag_system(prongs, rt, th));
    }
    return family;
}

RigidityEstimate rigidity_product(
    const MapSystem& j, const ConePoint& x, double r1, int count,
    const std::vector<std::pair<ConePoint, ConePoint>>& extra_pairs) {
    const int prongs = j.space.cone_prongs;
    if (j.space.kind != SpaceKind::cone)
        throw precondition_error("rigidity_product: cone maps only");
    if (!(x.r > 0.0) || !(r1 > 0.0) || !(r1 < x.r))
        throw precondition_error("rigidity_product: need 0 < r1 < |x|");

    const ConePoint apex{0.0, 0.0};
    ConePoint jx = as_cone(j.forward(x));
    if (cone_distance(prongs, jx, apex) > 1e-6 * r1)
        throw precondition_error(
            "rigidity_product: map does not send the anchor to the apex");

    CurveSample circle = sample_regular_circle(prongs, x, r1, count);
    std::vector<ConePoint> image(circle.points.size());
    for (std::size_t i = 0; i < circle.points.size(); ++i)
        image[i] = as_cone(j.forward(circle.points[i]));

    RigidityEstimate est;
    est.r1 = r1;
    est.samples = circle.points.size();

    // Forward constant from consecutive circle pairs: the max ratio is at
    // least the ratio of polygonal lengths, and the image polygon winds
    // around the apex.
    double lf = 0.0;
    double r2 = std::numeric_limits<double>::infinity();
    const std::size_t n = circle.points.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t k = (i + 1) % n;
        double base = cone_distance(prongs, circle.points[i], circle.points[k]);
        double img = cone_distance(prongs, image[i], image[k]);
        if (base > 0.0) lf = std::max(lf, img / base);
        r2 = std::min(r2, cone_distance(prongs, image[i], apex));
    }
    // Inverse constant from spokes: d(x, z) = r1 while d(j x, j z) is the
    // distance of the image point to the apex.
    double li = r1 / r2;

    for (const auto& [p, q] : extra_pairs) {
        double base = cone_distance(prongs, p, q);
        if (!(base > 0.0)) continue;
        double img = cone_distance(prongs, as_cone(j.forward(p)),
                                   as_cone(j.forward(q)));
        if (img > 0.0) {
            lf = std::max(lf, img / base);
            li = std::max(li, base / img);
        }
    }

    est.lips_fwd = lf;
    est.lips_inv = li;
    est.r2 = r2;
    est.product = lf * li;
    return est;
}

FixSetReport fix_set_stability(int prongs, std::size_t family_size,
                               std::uint64_t seed, double tol) {
    FixSetReport rep;
    rep.prongs = prongs;
    rep.family_size = family_size;
    rep.bound = double(prongs) / 2.0;
    rep.vacuous = prongs == 2;
    rep.min_product = std::numeric_limits<double>::infinity();

    std::vector<MapSystem> family = cone_stress_family(prongs, family_size, seed);
    for (const MapSystem& j : family) {
        // Recover the drag target from the construction: it is the unique
        // preimage of the apex.
        ConePoint x = as_cone(j.inverse(ConePoint{0.0, 0.0}));
        double r1 = 1e-3 * x.r;
        RigidityEstimate est = rigidity_product(j, x, r1, 2048);
        rep.min_product = std::min(rep.min_product, est.product);
    }
    rep.ok = rep.vacuous || rep.min_product >= rep.bound - tol;
    return rep;
}

}  // namespace lipexp
