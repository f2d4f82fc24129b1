#include <doctest.h>

#include <cmath>
#include <vector>

#include "lipexp/hyperbolicity.hpp"

using namespace lipexp;

namespace {

// First disagreement depth on the nonnegative side, window+1 if none.
int first_depth_pos(const ShiftWord& x, const ShiftWord& y) {
    for (int n = 0; n <= x.window; ++n)
        if (x.at(n) != y.at(n)) return n;
    return x.window + 1;
}

int first_depth_neg(const ShiftWord& x, const ShiftWord& y) {
    for (int n = 0; n <= x.window; ++n)
        if (x.at(-n) != y.at(-n)) return n;
    return x.window + 1;
}

PairSample two_word_pair(const MetricSpace& sp) {
    auto pts = sp.enumerate_points();
    PairSample ps;
    ps.points.push_back(pts[0]);
    // Flip the central symbol only: distance exactly 1.
    ShiftWord far = std::get<ShiftWord>(pts[0]);
    far.set(0, std::uint8_t((far.at(0) + 1) % far.alphabet));
    ps.points.push_back(far);
    ps.pairs.emplace_back(0, 1);
    ps.dist.push_back(sp.distance(ps.points[0], ps.points[1]));
    return ps;
}

}  // namespace

TEST_CASE("shift doubles every interior pair in one of the two directions") {
    MapSystem f = shift_system(4, 2);
    PairSample ps = exhaustive_pairs(f.space);

    for (std::size_t i = 0; i < ps.size(); ++i) {
        auto [ia, ib] = ps.pairs[i];
        const auto& x = std::get<ShiftWord>(ps.points[ia]);
        const auto& y = std::get<ShiftWord>(ps.points[ib]);
        int kp = first_depth_pos(x, y);
        int km = first_depth_neg(x, y);
        int k = std::min(kp, km);
        CHECK(ps.dist[i] == std::ldexp(1.0, -k));
        if (k < 1 || k > 3) continue;

        double dfwd = shift_distance(std::get<ShiftWord>(f.fwd(ps.points[ia])),
                                     std::get<ShiftWord>(f.fwd(ps.points[ib])));
        double dbwd = shift_distance(std::get<ShiftWord>(f.inv(ps.points[ia])),
                                     std::get<ShiftWord>(f.inv(ps.points[ib])));
        // Whichever side holds the first disagreement gets doubled exactly.
        if (kp == k) CHECK(dfwd == std::ldexp(ps.dist[i], 1));
        if (km == k) CHECK(dbwd == std::ldexp(ps.dist[i], 1));
        CHECK(std::max(dfwd, dbwd) == std::ldexp(ps.dist[i], 1));
    }
}

TEST_CASE("expansion certificate on the exhaustive shift sample") {
    MapSystem f = shift_system(4, 2);
    PairSample ps = exhaustive_pairs(f.space);
    HyperbolicityCertificate cert = check_hyperbolic(f, ps, 0.5);
    CHECK(cert.lambda == 2.0);
    CHECK(cert.ok);
    CHECK(cert.delta == 0.5);
    CHECK(cert.worst_pair.value == 2.0);

    std::size_t close = 0;
    for (double d : ps.dist)
        if (d < 0.5) ++close;
    CHECK(cert.pairs_checked == close);

    HyperbolicityCertificate idc = check_hyperbolic(identity_system(f.space), ps, 0.5);
    CHECK(idc.lambda == 1.0);
    CHECK_FALSE(idc.ok);
}

TEST_CASE("certificate preconditions") {
    MapSystem f = shift_system(3, 2);
    PairSample ps = exhaustive_pairs(f.space);
    CHECK_THROWS_AS(check_hyperbolic(f, ps, -1.0), precondition_error);
    CHECK_THROWS_AS(check_hyperbolic(f, PairSample{}, 0.5), precondition_error);
    PairSample far = two_word_pair(f.space);
    CHECK(far.dist[0] == 1.0);
    CHECK_THROWS_AS(check_hyperbolic(f, far, 0.5), precondition_error);
}

TEST_CASE("eigen-adapted sup metric is expanded by the full eigenvalue") {
    ToralAutomorphism a = cat_matrix();
    MetricSpace es = eigen_sup_space(a);
    MapSystem f = with_space(cat_system(), es);

    CounterRng rng(61);
    for (int i = 0; i < 500; ++i) {
        Point x = TorusPoint{rng.uniform(), rng.uniform()};
        Point y = TorusPoint{rng.uniform(), rng.uniform()};
        Point z = TorusPoint{rng.uniform(), rng.uniform()};
        double xy = es.distance(x, y);
        CHECK(xy == es.distance(y, x));
        CHECK(xy <= es.diameter + 1e-15);
        CHECK(es.distance(x, z) <= xy + es.distance(y, z) + 1e-12);
    }

    PairSample ps = sample_pairs(es, 20000, 67, 0.09, 1e-9);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        auto [ia, ib] = ps.pairs[i];
        double base = ps.dist[i];
        double dfwd = es.distance(f.fwd(ps.points[ia]), f.fwd(ps.points[ib]));
        double dbwd = es.distance(f.inv(ps.points[ia]), f.inv(ps.points[ib]));
        CHECK(std::max(dfwd, dbwd) >= a.lambda_u * base * (1.0 - 1e-12));
    }

    HyperbolicityCertificate cert = check_hyperbolic(f, ps, 0.1);
    CHECK(cert.ok);
    CHECK(cert.lambda >= a.lambda_u * (1.0 - 1e-12));
    CHECK(cert.lambda <= a.lambda_u + 0.02);
}

TEST_CASE("truncated series metric: identity closed form and doubling bound") {
    MapSystem id = identity_system(torus_space());
    CounterRng rng(71);
    for (int i = 0; i < 50; ++i) {
        Point x = TorusPoint{rng.uniform(), rng.uniform()};
        Point y = TorusPoint{rng.uniform(), rng.uniform()};
        double d = torus_space().distance(x, y);
        int n = 10;
        double expect = d * (3.0 - std::ldexp(1.0, 1 - n));
        CHECK(adapted_series_metric(id, x, y, n) == doctest::Approx(expect).epsilon(1e-13));
        CHECK(adapted_series_metric(id, x, y, 0) == d);
    }
    CHECK_THROWS_AS(adapted_series_metric(id, Point{TorusPoint{}}, Point{TorusPoint{}}, -1),
                    precondition_error);

    MapSystem f = cat_system();
    const int n = 8;
    double slack = std::ldexp(f.space.diameter, -n) + 1e-12;
    for (int i = 0; i < 50; ++i) {
        Point x = TorusPoint{rng.uniform(), rng.uniform()};
        Point y = TorusPoint{rng.uniform(), rng.uniform()};
        double dn = adapted_series_metric(f, x, y, n);
        double dfn = adapted_series_metric(f, f.fwd(x), f.fwd(y), n);
        CHECK(dfn <= 2.0 * dn + slack);
    }
}

TEST_CASE("robustness margin arithmetic and guards") {
    RobustnessMargin m = robust_margin(2.0, 1.5);
    CHECK(m.lambda == 2.0);
    CHECK(m.lambda_prime == 1.5);
    CHECK(m.epsilon == std::nextafter(0.5, 0.0));
    CHECK(m.epsilon < 0.5);
    CHECK(m.epsilon > 0.49999999);

    CHECK_THROWS_AS(robust_margin(1.0, 0.5), precondition_error);
    CHECK_THROWS_AS(robust_margin(2.0, 2.0), precondition_error);
    CHECK_THROWS_AS(robust_margin(2.0, 2.5), precondition_error);
    CHECK_THROWS_AS(robust_margin(2.0, 0.9), precondition_error);
}

TEST_CASE("perturbation stays expansive: hypothesis and conclusion both hold") {
    MapSystem f = shift_system(5, 2);
    PairSample ps = exhaustive_pairs(f.space, 0.25);
    HyperbolicityCertificate cert = check_hyperbolic(f, ps, 0.5);
    RobustnessMargin margin = robust_margin(2.0, 1.5);

    auto pert = shift_block_perturbation(5, 2, 99);
    CertificateCheck chk = verify_certificate(f, pert.system, margin, cert, ps);
    CHECK(chk.hypothesis_met);
    CHECK(chk.violations == 0);
    CHECK(chk.conclusion_holds);
    CHECK(chk.pass);
    CHECK(chk.close_pairs == cert.pairs_checked);
    CHECK(chk.worst_ratio == 2.0);
    CHECK(chk.d_w == std::ldexp(3.0, -(pert.tweak.target + 1)));
    CHECK(chk.d_w < 0.4);
}

TEST_CASE("far perturbations fail the hypothesis, keeping the implication vacuous") {
    MapSystem f = shift_system(4, 2);
    PairSample ps = exhaustive_pairs(f.space, 0.25);
    HyperbolicityCertificate cert = check_hyperbolic(f, ps, 0.5);
    RobustnessMargin margin = robust_margin(2.0, 1.5);

    MapSystem id = identity_system(f.space);
    CertificateCheck chk = verify_certificate(f, id, margin, cert, ps);
    CHECK_FALSE(chk.hypothesis_met);
    CHECK(chk.d_w > margin.epsilon);
    CHECK(chk.violations == chk.close_pairs);
    CHECK_FALSE(chk.conclusion_holds);
    CHECK(chk.pass);
    CHECK(chk.worst_ratio < margin.lambda_prime);

    PairSample far = two_word_pair(f.space);
    CHECK_THROWS_AS(verify_certificate(f, id, margin, cert, far), precondition_error);
}
