#include <doctest.h>

#include <cmath>
#include <vector>

#include "lipexp/shadowing.hpp"

using namespace lipexp;

namespace {

TorusPoint translate(const TorusPoint& p, Vec2 v) {
    return TorusPoint{wrap01(p.x + v.x), wrap01(p.y + v.y)};
}

// Pseudo-orbit with an exactly known periodic defect pattern.
PseudoOrbit periodic_defect_orbit(const ToralAutomorphism& a, TorusPoint x0,
                                  const std::vector<Vec2>& pattern, int n_steps) {
    PseudoOrbit po;
    po.n_back = po.n_fwd = n_steps;
    po.delta = 0.0;
    for (const auto& v : pattern) po.delta = std::max(po.delta, v.norm());
    po.points.resize(std::size_t(2 * n_steps + 1));
    po.points[0] = x0;
    for (std::size_t i = 0; i + 1 < po.points.size(); ++i) {
        TorusPoint ax = a.fwd(po.points[i]);
        po.points[i + 1] = translate(ax, pattern[i % pattern.size()]);
    }
    return po;
}

}  // namespace

TEST_CASE("pseudo-orbits respect the defect budget on both sides") {
    MapSystem f = cat_system();
    TorusPoint x0{0.32, 0.71};
    PseudoOrbit po = make_pseudo_orbit(f, x0, 1e-3, 40, 5);
    CHECK(po.length() == 81);
    CHECK(po.at(0).x == x0.x);
    CHECK(po.at(0).y == x0.y);
    for (int n = -po.n_back; n < po.n_fwd; ++n) {
        double defect = torus_distance(std::get<TorusPoint>(f.fwd(po.at(n))), po.at(n + 1));
        CHECK(defect <= 1e-3 * (1.0 + 1e-12));
    }

    PseudoOrbit exact = make_pseudo_orbit(f, x0, 0.0, 10, 5);
    for (int n = -10; n < 10; ++n)
        CHECK(torus_distance(std::get<TorusPoint>(f.fwd(exact.at(n))), exact.at(n + 1)) < 1e-15);

    CHECK_THROWS_AS(make_pseudo_orbit(f, x0, -1.0, 10, 5), precondition_error);
    CHECK_THROWS_AS(make_pseudo_orbit(f, x0, 1e-3, 0, 5), precondition_error);
    CHECK_THROWS_AS(make_pseudo_orbit(shift_system(4, 2), x0, 1e-3, 10, 5),
                    precondition_error);
}

TEST_CASE("shadow solver emits a true orbit within the universal bound") {
    ToralAutomorphism a = cat_matrix();
    MapSystem f = cat_system();
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        PseudoOrbit po = make_pseudo_orbit(f, TorusPoint{0.1, 0.6}, 1e-3, 60, seed);
        ShadowResult res = shadow_linear(a, po);
        CHECK(res.max_defect <= 1e-3 * (1.0 + 1e-12));
        CHECK(res.residual < 1e-10);
        CHECK(res.sup_correction <= res.bound);
        CHECK(res.bound == doctest::Approx(1e-3 * std::sqrt(5.0)).epsilon(1e-12));
        for (std::size_t i = 0; i < res.orbit.size(); ++i) {
            CHECK(torus_distance(res.orbit[i], po.points[i]) ==
                  doctest::Approx(res.correction[i].norm()).epsilon(1e-9));
        }
    }
}

TEST_CASE("periodic defects: solver center matches the geometric series") {
    ToralAutomorphism a = cat_matrix();
    const int n = 40, p = 5;
    CounterRng rng(83);
    std::vector<Vec2> pat;
    for (int k = 0; k < p; ++k) {
        double ang = 2.0 * M_PI * rng.uniform();
        double r = 1e-3 * rng.uniform();
        pat.push_back(Vec2{r * std::cos(ang), r * std::sin(ang)});
    }
    PseudoOrbit po = periodic_defect_orbit(a, TorusPoint{0.2, 0.9}, pat, n);
    ShadowResult res = shadow_linear(a, po);
    CHECK(res.residual < 1e-10);

    // Independent evaluation of the one-sided sums on the infinite periodic
    // extension of the defect pattern.
    auto du = [&](int i) { return pat[std::size_t(((i % p) + p) % p)].dot(a.unit_u); };
    auto ds = [&](int i) { return pat[std::size_t(((i % p) + p) % p)].dot(a.unit_s); };
    const int center = n;  // array index of time zero
    double u = 0.0, wu = 1.0 / a.lambda_u;
    for (int j = 0; j < 160; ++j) {
        u += wu * du(center + j);
        wu /= a.lambda_u;
    }
    double s = 0.0, ws = 1.0;
    for (int j = 0; j < 160; ++j) {
        s -= ws * ds(center - 1 - j);
        ws *= a.lambda_s;
    }
    Vec2 oracle = a.unit_u * u + a.unit_s * s;
    CHECK((res.correction[std::size_t(center)] - oracle).norm() < 1e-12);
}

TEST_CASE("single defect at the forward end: 1-D search recovers the correction") {
    ToralAutomorphism a = cat_matrix();
    const int n = 8;
    const double amp = 1e-3;
    PseudoOrbit po;
    po.n_back = po.n_fwd = n;
    po.delta = amp;
    po.points.assign(std::size_t(2 * n + 1), TorusPoint{0.0, 0.0});
    po.points[std::size_t(2 * n)] =
        TorusPoint{wrap01(amp * a.unit_u.x), wrap01(amp * a.unit_u.y)};

    ShadowResult res = shadow_linear(a, po);
    CHECK(res.residual < 1e-12);
    double u0 = res.correction[std::size_t(n)].dot(a.unit_u);
    // Defect is purely unstable, so the stable component stays zero.
    CHECK(std::abs(res.correction[std::size_t(n)].dot(a.unit_s)) < 1e-15);

    // Brute force: scan true orbits y_k = A^k (delta * unit_u) and minimize
    // the sup deviation from the pseudo-orbit over the whole window.
    double best_obj = 1e18, best_delta = 0.0;
    for (int step = -50000; step <= 50000; ++step) {
        double cand = u0 + 2e-10 * double(step);
        TorusPoint y0{wrap01(cand * a.unit_u.x), wrap01(cand * a.unit_u.y)};
        double obj = torus_distance(y0, po.points[std::size_t(n)]);
        TorusPoint y = y0;
        for (int k = 1; k <= n; ++k) {
            y = a.fwd(y);
            obj = std::max(obj, torus_distance(y, po.points[std::size_t(n + k)]));
        }
        y = y0;
        for (int k = 1; k <= n; ++k) {
            y = a.inv(y);
            obj = std::max(obj, torus_distance(y, po.points[std::size_t(n - k)]));
        }
        if (obj < best_obj) {
            best_obj = obj;
            best_delta = cand;
        }
    }
    CHECK(std::abs(best_delta - u0) < 1e-6);
    CHECK(best_obj <= res.sup_correction + 1e-12);
}

TEST_CASE("window truncation changes the center correction only by the tail") {
    ToralAutomorphism a = cat_matrix();
    MapSystem f = cat_system();
    PseudoOrbit po60 = make_pseudo_orbit(f, TorusPoint{0.44, 0.15}, 1e-3, 60, 31);
    PseudoOrbit po30;
    po30.n_back = po30.n_fwd = 30;
    po30.delta = po60.delta;
    po30.points.assign(po60.points.begin() + 30, po60.points.begin() + 91);

    ShadowResult r60 = shadow_linear(a, po60);
    ShadowResult r30 = shadow_linear(a, po30);
    Vec2 e60 = r60.correction[60];
    Vec2 e30 = r30.correction[30];
    CHECK((e60 - e30).norm() < 1e-12);
}

TEST_CASE("oversized step defects are rejected") {
    ToralAutomorphism a = cat_matrix();
    PseudoOrbit po;
    po.n_back = po.n_fwd = 1;
    po.delta = 0.5;
    po.points = {TorusPoint{0.0, 0.0}, TorusPoint{0.3, 0.3}, TorusPoint{0.0, 0.0}};
    CHECK_THROWS_AS(shadow_linear(a, po), precondition_error);

    PseudoOrbit tiny;
    tiny.points = {TorusPoint{}, TorusPoint{}};
    tiny.n_back = 1;
    tiny.n_fwd = 0;
    CHECK_THROWS_AS(shadow_linear(a, tiny), precondition_error);
}

TEST_CASE("conjugacy with the affine perturbation is the exact translation") {
    ToralAutomorphism a = cat_matrix();
    MapSystem g = cat_affine(0.01, 0.0);
    ConjugacyField cf = build_conjugacy(a, g, 16, 60);

    // (A - I)^-1 (0.01, 0) = (0, 0.01).
    Vec2 w{0.0, 0.01};
    for (std::size_t i = 0; i < cf.grid.size(); ++i)
        CHECK(torus_distance(cf.h[i], translate(cf.grid[i], w)) < 1e-12);
    CHECK(cf.id_dist == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(cf.residual < 1e-12);
    CHECK(cf.injectivity_margin == doctest::Approx(1.0 / 16.0).epsilon(1e-9));

    TorusPoint probe{0.37, 0.81};
    TorusPoint hp = conjugacy_at(a, g, probe, 60);
    CHECK(torus_distance(hp, translate(probe, w)) < 1e-12);

    CHECK_THROWS_AS(build_conjugacy(a, g, 1, 60), precondition_error);
    CHECK_THROWS_AS(build_conjugacy(a, g, 8, 0), precondition_error);
    CHECK_THROWS_AS(build_conjugacy(a, shift_system(4, 2), 8, 10), precondition_error);
}

TEST_CASE("conjugacy with a localized bump stays near the identity") {
    ToralAutomorphism a = cat_matrix();
    MapSystem g = cat_bump(TorusPoint{0.3, 0.4}, 0.2, 0.002);
    ConjugacyField cf = build_conjugacy(a, g, 8, 40);
    CHECK(cf.residual < 1e-8);
    CHECK(cf.id_dist < 0.005);  // defect 0.002 still leaves sqrt(5)*delta room
    CHECK(cf.id_dist > 0.0);
    CHECK(cf.injectivity_margin > 0.1);
}

TEST_CASE("persistence: matched orbits within eps, rejected below the floor") {
    ToralAutomorphism a = cat_matrix();
    MapSystem g = cat_bump(TorusPoint{0.3, 0.4}, 0.2, 0.002);
    std::vector<TorusPoint> anchors = {
        TorusPoint{0.3, 0.4}, TorusPoint{0.05, 0.95}, TorusPoint{0.5, 0.25},
        TorusPoint{0.72, 0.64}, TorusPoint{0.11, 0.33}};

    PersistenceReport ok = persistence_check(a, g, anchors, 30, 0.01);
    CHECK(ok.count == anchors.size());
    CHECK(ok.all_ok);
    CHECK(ok.matched == ok.count);
    CHECK(ok.worst_deviation < 0.01);
    CHECK(ok.worst_deviation > 0.0);

    PersistenceReport bad = persistence_check(a, g, anchors, 30, 1e-4);
    CHECK_FALSE(bad.all_ok);
    CHECK(bad.matched < bad.count);

    CHECK_THROWS_AS(persistence_check(a, g, {}, 30, 0.01), precondition_error);
    CHECK_THROWS_AS(persistence_check(a, g, anchors, 30, 0.0), precondition_error);
}
