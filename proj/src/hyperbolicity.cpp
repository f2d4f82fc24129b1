#include "lipexp/hyperbolicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lipexp {

namespace {

// Forward and inverse images of every sample point, computed once so the
// pair loop touches no std::function more than 2n times.
struct ImageTable {
    std::vector<Point> fwd;
    std::vector<Point> bwd;
};

ImageTable apply_both(const MapSystem& f, const std::vector<Point>& pts) {
    ImageTable t;
    t.fwd.reserve(pts.size());
    t.bwd.reserve(pts.size());
    for (const Point& p : pts) {
        t.fwd.push_back(f.forward(p));
        t.bwd.push_back(f.inverse(p));
    }
    return t;
}

}  // namespace

HyperbolicityCertificate check_hyperbolic(const MapSystem& f,
                                          const PairSample& pairs,
                                          double delta) {
    if (!(delta > 0.0))
        throw precondition_error("check_hyperbolic: delta must be positive");
    if (pairs.pairs.empty())
        throw precondition_error("check_hyperbolic: empty pair sample");

    const MetricSpace& sp = f.space;
    ImageTable images = apply_both(f, pairs.points);

    HyperbolicityCertificate cert;
    cert.delta = delta;
    double lambda = std::numeric_limits<double>::infinity();
    std::size_t checked = 0;
    for (std::size_t i = 0; i < pairs.pairs.size(); ++i) {
        double base = pairs.pair_dist(sp, i);
        if (!(base > 0.0) || base >= delta) continue;
        auto [ia, ib] = pairs.pairs[i];
        double dfwd = sp.distance(images.fwd[ia], images.fwd[ib]);
        double dbwd = sp.distance(images.bwd[ia], images.bwd[ib]);
        double ratio = std::max(dfwd, dbwd) / base;
        ++checked;
        if (ratio < lambda) {
            lambda = ratio;
            cert.worst_pair = {pairs.points[ia], pairs.points[ib], ratio};
        }
    }
    if (checked == 0)
        throw precondition_error(
            "check_hyperbolic: no sampled pair is closer than delta");
    cert.lambda = lambda;
    cert.pairs_checked = checked;
    cert.ok = lambda > 1.0;
    return cert;
}

MetricSpace eigen_sup_space(const ToralAutomorphism& a) {
    Vec2 u = a.unit_u;
    Vec2 s = a.unit_s;
    MetricSpace sp;
    sp.name = "torus-eigensup";
    sp.kind = SpaceKind::torus;
    // Eigen-sup norm of the wrap_half representative can exceed the true
    // quotient distance; the cube [-1/2,1/2]^2 maps into the rotated square
    // of circumradius sqrt(2)/2, so the quotient minimum is attained within
    // one extra integer step in each coordinate.
    sp.diameter = std::sqrt(2.0) / 2.0;
    sp.custom_distance = [u, s](const Point& pa, const Point& pb) {
        const auto& ta = std::get<TorusPoint>(pa);
        const auto& tb = std::get<TorusPoint>(pb);
        double dx = wrap_half(ta.x - tb.x);
        double dy = wrap_half(ta.y - tb.y);
        double best = std::numeric_limits<double>::infinity();
        for (int mx = -1; mx <= 1; ++mx) {
            for (int my = -1; my <= 1; ++my) {
                Vec2 d{dx + mx, dy + my};
                double n = std::max(std::abs(d.dot(u)), std::abs(d.dot(s)));
                best = std::min(best, n);
            }
        }
        return best;
    };
    return sp;
}

double adapted_series_metric(const MapSystem& f, const Point& x, const Point& y,
                             int n_terms) {
    if (n_terms < 0)
        throw precondition_error("adapted_series_metric: negative order");
    const MetricSpace& sp = f.space;
    double total = sp.distance(x, y);
    Point fx = x, fy = y, bx = x, by = y;
    for (int n = 1; n <= n_terms; ++n) {
        fx = f.forward(fx);
        fy = f.forward(fy);
        bx = f.inverse(bx);
        by = f.inverse(by);
        double w = std::ldexp(1.0, -n);
        total += w * (sp.distance(fx, fy) + sp.distance(bx, by));
    }
    return total;
}

RobustnessMargin robust_margin(double lambda, double lambda_prime) {
    if (!(lambda > 1.0))
        throw precondition_error("robust_margin: lambda must exceed 1");
    if (!(lambda_prime > 1.0))
        throw precondition_error("robust_margin: lambda_prime must exceed 1");
    if (!(lambda_prime < lambda))
        throw precondition_error(
            "robust_margin: lambda_prime must be strictly below lambda");
    RobustnessMargin m;
    m.lambda = lambda;
    m.lambda_prime = lambda_prime;
    m.epsilon = std::nextafter(lambda - lambda_prime, 0.0);
    return m;
}

CertificateCheck verify_certificate(const MapSystem& f, const MapSystem& g,
                                    const RobustnessMargin& margin,
                                    const HyperbolicityCertificate& cert,
                                    const PairSample& pairs) {
    if (!f.space.same_space(g.space))
        throw precondition_error("verify_certificate: maps on different spaces");
    if (pairs.pairs.empty() || pairs.points.empty())
        throw precondition_error("verify_certificate: empty sample");

    const MetricSpace& sp = f.space;
    ImageTable fi = apply_both(f, pairs.points);
    ImageTable gi = apply_both(g, pairs.points);

    CertificateCheck out;
    out.epsilon = margin.epsilon;

    // d_W between f and g over this sample: C0 part on the points, slope
    // parts on the pairs using the image tables.  The uniform part adds
    // the forward and inverse sups, matching dist_c0.
    double c0f = 0.0, c0b = 0.0;
    for (std::size_t i = 0; i < pairs.points.size(); ++i) {
        c0f = std::max(c0f, sp.distance(fi.fwd[i], gi.fwd[i]));
        c0b = std::max(c0b, sp.distance(fi.bwd[i], gi.bwd[i]));
    }
    double wf = 0.0, wb = 0.0;
    double worst_ratio = std::numeric_limits<double>::infinity();
    std::size_t close = 0, bad = 0;
    for (std::size_t i = 0; i < pairs.pairs.size(); ++i) {
        double base = pairs.pair_dist(sp, i);
        if (!(base > 0.0)) continue;
        auto [ia, ib] = pairs.pairs[i];
        double dff = sp.distance(fi.fwd[ia], fi.fwd[ib]);
        double dgf = sp.distance(gi.fwd[ia], gi.fwd[ib]);
        double dfb = sp.distance(fi.bwd[ia], fi.bwd[ib]);
        double dgb = sp.distance(gi.bwd[ia], gi.bwd[ib]);
        wf = std::max(wf, std::abs(dff - dgf) / base);
        wb = std::max(wb, std::abs(dfb - dgb) / base);
        if (base < cert.delta) {
            ++close;
            double ratio = std::max(dgf, dgb) / base;
            if (ratio < worst_ratio) {
                worst_ratio = ratio;
                out.worst_pair = {pairs.points[ia], pairs.points[ib], ratio};
            }
            if (ratio < margin.lambda_prime) ++bad;
        }
    }
    if (close == 0)
        throw precondition_error(
            "verify_certificate: no sampled pair is closer than delta");

    out.d_w = c0f + c0b + wf + wb;
    out.hypothesis_met = out.d_w < margin.epsilon;
    out.close_pairs = close;
    out.violations = bad;
    out.worst_ratio = worst_ratio;
    out.conclusion_holds = bad == 0;
    out.pass = !out.hypothesis_met || out.conclusion_holds;
    return out;
}

}  // namespace lipexp
