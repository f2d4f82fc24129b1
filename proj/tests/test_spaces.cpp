#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <set>
#include <vector>

#include "lipexp/common.hpp"
#include "lipexp/spaces.hpp"

using namespace lipexp;

namespace {

ShiftWord word_of(int window, int alphabet, const char* digits) {
    ShiftWord w;
    w.window = window;
    w.alphabet = alphabet;
    for (int i = 0; i < w.length(); ++i)
        w.set(i - window, std::uint8_t(digits[i] - '0'));
    return w;
}

// Planar chord length written as an explicit embedding, kept deliberately
// different from the law-of-cosines expression in the library.
double planar_chord(double rp, double rq, double sep) {
    return std::hypot(rp - rq * std::cos(sep), rq * std::sin(sep));
}

}  // namespace

TEST_CASE("wrap helpers are exact on dyadic inputs") {
    for (int k = 0; k < 1024; ++k) {
        double v = double(k) / 1024.0;
        CHECK(wrap01(v) == v);
        CHECK(wrap01(v + 3.0) == v);
        CHECK(wrap01(v - 2.0) == v);
    }
    CHECK(wrap_half(0.75) == -0.25);
    CHECK(wrap_half(-0.75) == 0.25);
    CHECK(wrap_half(0.5) == 0.5);
    CHECK(wrap_half(-0.5) == 0.5);
    CHECK(wrap_half(0.0) == 0.0);
    CHECK(wrap_half(3.25) == 0.25);
}

TEST_CASE("torus metric: pinned values, symmetry, triangle inequality") {
    TorusPoint o{0.0, 0.0};
    CHECK(torus_distance(o, TorusPoint{0.5, 0.5}) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(torus_distance(TorusPoint{0.9, 0.2}, TorusPoint{0.1, 0.2}) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(torus_distance(o, o) == 0.0);

    MetricSpace s = torus_space();
    CHECK(s.diameter == doctest::Approx(std::sqrt(0.5)));

    CounterRng rng(41);
    for (int i = 0; i < 500; ++i) {
        TorusPoint a{rng.uniform(), rng.uniform()};
        TorusPoint b{rng.uniform(), rng.uniform()};
        TorusPoint c{rng.uniform(), rng.uniform()};
        double ab = torus_distance(a, b);
        double ba = torus_distance(b, a);
        CHECK(ab == ba);
        CHECK(ab <= s.diameter + 1e-15);
        CHECK(torus_distance(a, c) <= ab + torus_distance(b, c) + 1e-15);
    }
}

TEST_CASE("interval and disk metrics agree with direct arithmetic") {
    CHECK(interval_distance(IntervalPoint{0.25}, IntervalPoint{0.75}) == 0.5);
    CHECK(disk_distance(DiskPoint{0.3, 0.4}, DiskPoint{0.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-15));
    CounterRng rng(42);
    for (int i = 0; i < 200; ++i) {
        DiskPoint a{rng.uniform() - 0.5, rng.uniform() - 0.5};
        DiskPoint b{rng.uniform() - 0.5, rng.uniform() - 0.5};
        CHECK(disk_distance(a, b) == disk_distance(b, a));
    }
}

TEST_CASE("shift metric: disagreement depth, ultrametric inequality, mismatch guard") {
    // Same word -> 0, disagreement at the center -> 1, at depth 2 -> 1/4.
    ShiftWord a = word_of(3, 2, "0101010");
    CHECK(shift_distance(a, a) == 0.0);
    ShiftWord b = a;
    b.set(0, 0);  // center symbol is 1 in this word
    CHECK(shift_distance(a, b) == 1.0);
    ShiftWord c = a;
    c.set(2, 0);
    CHECK(shift_distance(a, c) == 0.25);
    ShiftWord d = a;
    d.set(-1, 1);
    d.set(3, 1);
    CHECK(shift_distance(a, d) == 0.5);

    ShiftWord other = word_of(4, 2, "010101010");
    CHECK_THROWS_AS(shift_distance(a, other), precondition_error);
    ShiftWord alpha = a;
    alpha.alphabet = 3;
    CHECK_THROWS_AS(shift_distance(a, alpha), precondition_error);

    MetricSpace s = shift_space(5, 3);
    CounterRng rng(7);
    for (int i = 0; i < 400; ++i) {
        Point x = s.sample_point(rng);
        Point y = s.sample_point(rng);
        Point z = s.sample_point(rng);
        double xy = s.distance(x, y);
        double yz = s.distance(y, z);
        double xz = s.distance(x, z);
        CHECK(xy == s.distance(y, x));
        // Strong (ultrametric) triangle inequality, exact for powers of two.
        CHECK(xz <= std::max(xy, yz));
    }
}

TEST_CASE("cone metric: chart isometry and the through-apex case") {
    for (int prongs : {2, 3, 5}) {
        const double total = double(prongs) * M_PI;
        CounterRng rng(100 + std::uint64_t(prongs));
        for (int i = 0; i < 400; ++i) {
            double rp = rng.uniform();
            double rq = rng.uniform();
            double sep = rng.uniform() * 0.5 * total;
            ConePoint p{rp, 0.0};
            ConePoint q{rq, sep};
            double got = cone_distance(prongs, p, q);
            if (sep <= M_PI) {
                CHECK(got == doctest::Approx(planar_chord(rp, rq, sep)).epsilon(1e-12));
            } else {
                CHECK(got == rp + rq);
            }
            CHECK(got == cone_distance(prongs, q, p));
        }
        // Continuity at the case seam sep = pi.
        double r1 = 0.7, r2 = 0.4;
        double below = cone_distance(prongs, ConePoint{r1, 0.0}, ConePoint{r2, M_PI - 1e-9});
        CHECK(below == doctest::Approx(r1 + r2).epsilon(1e-8));

        // Triangle inequality on random triples.
        MetricSpace s = cone_space(prongs, 1.0);
        CounterRng rng2(200 + std::uint64_t(prongs));
        for (int i = 0; i < 300; ++i) {
            Point x = s.sample_point(rng2);
            Point y = s.sample_point(rng2);
            Point z = s.sample_point(rng2);
            CHECK(s.distance(x, z) <= s.distance(x, y) + s.distance(y, z) + 1e-12);
        }
    }
}

TEST_CASE("cone metric brackets shortest paths on a dense polar graph") {
    // Local-to-global oracle: build a graph whose edges use only tiny
    // angular separations (locally flat, law of cosines unquestionable),
    // then compare Dijkstra distances with the closed-form metric.
    // Graph paths can only overestimate; mesh anisotropy bounds the excess.
    const int prongs = 3;
    const double total = double(prongs) * M_PI;
    const int nr = 50;
    const int nth = 300;
    const double dr = 1.0 / double(nr);
    const double dth = total / double(nth);

    auto node_id = [&](int i, int j) { return 1 + (i - 1) * nth + j; };
    const int n_nodes = 1 + nr * nth;

    auto edge_len = [&](double r1, double th1, double r2, double th2) {
        double sep = std::abs(th1 - th2);
        if (sep > 0.5 * total) sep = total - sep;
        return std::hypot(r1 - r2 * std::cos(sep), r2 * std::sin(sep));
    };

    auto dijkstra = [&](int src) {
        std::vector<double> dist(std::size_t(n_nodes), 1e18);
        using Entry = std::pair<double, int>;
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
        dist[std::size_t(src)] = 0.0;
        pq.push({0.0, src});
        while (!pq.empty()) {
            auto [d0, u] = pq.top();
            pq.pop();
            if (d0 > dist[std::size_t(u)]) continue;
            auto relax = [&](int v, double w) {
                if (d0 + w < dist[std::size_t(v)]) {
                    dist[std::size_t(v)] = d0 + w;
                    pq.push({d0 + w, v});
                }
            };
            if (u == 0) {
                for (int j = 0; j < nth; ++j) relax(node_id(1, j), dr);
                continue;
            }
            int i = 1 + (u - 1) / nth;
            int j = (u - 1) % nth;
            double r = dr * double(i);
            double th = dth * double(j);
            for (int di = -1; di <= 1; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    if (di == 0 && dj == 0) continue;
                    int i2 = i + di;
                    int j2 = (j + dj + nth) % nth;
                    if (i2 < 1) {
                        if (dj == 0) relax(0, r);
                        continue;
                    }
                    if (i2 > nr) continue;
                    relax(node_id(i2, j2), edge_len(r, th, dr * double(i2), dth * double(j2)));
                }
            }
        }
        return dist;
    };

    CounterRng rng(9001);
    for (int trial = 0; trial < 12; ++trial) {
        int ip = 1 + int(rng.below(nr));
        int jp = int(rng.below(nth));
        int iq = 1 + int(rng.below(nr));
        int jq = int(rng.below(nth));
        ConePoint p{dr * double(ip), dth * double(jp)};
        ConePoint q{dr * double(iq), dth * double(jq)};
        double exact = cone_distance(prongs, p, q);
        double graph = dijkstra(node_id(ip, jp))[std::size_t(node_id(iq, jq))];
        CHECK(exact <= graph + 1e-9);
        CHECK(graph <= 1.15 * exact + 0.08);
    }
}

TEST_CASE("shift enumeration is complete, distinct, and size-guarded") {
    MetricSpace s = shift_space(3, 2);
    CHECK(s.enumerable());
    CHECK(s.enumeration_size() == 128);
    auto pts = s.enumerate_points();
    REQUIRE(pts.size() == 128);
    std::set<std::vector<std::uint8_t>> seen;
    for (const auto& p : pts) {
        const auto& w = std::get<ShiftWord>(p);
        CHECK(w.window == 3);
        CHECK(w.alphabet == 2);
        std::vector<std::uint8_t> key(w.symbols.begin(), w.symbols.begin() + w.length());
        seen.insert(key);
    }
    CHECK(seen.size() == 128);

    CHECK_THROWS_AS(shift_space(12, 5).enumeration_size(), precondition_error);
    CHECK_FALSE(torus_space().enumerable());
    CHECK_THROWS_AS(torus_space().enumerate_points(), precondition_error);
    CHECK_THROWS_AS(exhaustive_pairs(cone_space(3, 1.0)), precondition_error);
}

TEST_CASE("exhaustive shift pairs keep exactly the interior disagreements") {
    MetricSpace s = shift_space(3, 2);
    PairSample ps = exhaustive_pairs(s);
    auto pts = s.enumerate_points();
    REQUIRE(pts.size() == 128);

    // Independent recount: scan depths 0..W-1 symbol by symbol.
    std::size_t expected = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& a = std::get<ShiftWord>(pts[i]);
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const auto& b = std::get<ShiftWord>(pts[j]);
            for (int k = 0; k <= 2; ++k) {
                if (a.at(k) != b.at(k) || a.at(-k) != b.at(-k)) {
                    ++expected;
                    break;
                }
            }
        }
    }
    CHECK(ps.size() == expected);
    CHECK(ps.dist.size() == ps.size());  // small sample -> cached
    for (std::size_t i = 0; i < ps.size(); ++i) {
        double d = s.distance(ps.points[ps.pairs[i].first], ps.points[ps.pairs[i].second]);
        CHECK(ps.dist[i] == d);
        CHECK(d >= 0.25);  // 2^-(W-1)
    }

    PairSample close = exhaustive_pairs(s, 0.25);
    std::size_t expected_close = 0;
    for (std::size_t i = 0; i < close.size(); ++i) CHECK(close.dist[i] == 0.25);
    for (std::size_t i = 0; i < ps.size(); ++i)
        if (ps.dist[i] == 0.25) ++expected_close;
    CHECK(close.size() == expected_close);
}

TEST_CASE("pair sampling is seed-deterministic and respects separation bounds") {
    MetricSpace s = torus_space();
    PairSample a = sample_pairs(s, 300, 77, 0.05, 1e-6);
    PairSample b = sample_pairs(s, 300, 77, 0.05, 1e-6);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.dist[i] == b.dist[i]);
        const auto& pa = std::get<TorusPoint>(a.points[a.pairs[i].first]);
        const auto& pb = std::get<TorusPoint>(b.points[b.pairs[i].first]);
        CHECK(pa.x == pb.x);
        CHECK(pa.y == pb.y);
        CHECK(a.dist[i] <= 0.05);
        CHECK(a.dist[i] >= 1e-6);
    }
    PairSample c = sample_pairs(s, 300, 78, 0.05, 1e-6);
    bool any_diff = false;
    for (std::size_t i = 0; i < c.size(); ++i) any_diff = any_diff || c.dist[i] != a.dist[i];
    CHECK(any_diff);

    MetricSpace sh = shift_space(6, 2);
    PairSample w = sample_pairs(sh, 200, 5, 0.25);
    for (std::size_t i = 0; i < w.size(); ++i) {
        CHECK(w.dist[i] <= 0.25);
        CHECK(w.dist[i] > 0.0);
    }
    CHECK_THROWS_AS(sample_pairs(sh, 10, 5, 0.001), precondition_error);

    auto pts1 = sample_points(s, 50, 9);
    auto pts2 = sample_points(s, 50, 9);
    for (std::size_t i = 0; i < pts1.size(); ++i)
        CHECK(s.distance(pts1[i], pts2[i]) == 0.0);
}

TEST_CASE("space identity comparisons") {
    CHECK(torus_space().same_space(torus_space()));
    CHECK_FALSE(torus_space().same_space(disk_space()));
    CHECK(shift_space(4, 2).same_space(shift_space(4, 2)));
    CHECK_FALSE(shift_space(4, 2).same_space(shift_space(5, 2)));
    CHECK_FALSE(shift_space(4, 2).same_space(shift_space(4, 3)));
    CHECK(cone_space(3, 1.0).same_space(cone_space(3, 1.0)));
    CHECK_FALSE(cone_space(3, 1.0).same_space(cone_space(4, 1.0)));

    MetricSpace plain = torus_space();
    MetricSpace custom = torus_space();
    custom.name = "torus-custom";
    custom.custom_distance = [](const Point& p, const Point& q) {
        return torus_distance(std::get<TorusPoint>(p), std::get<TorusPoint>(q));
    };
    CHECK_FALSE(plain.same_space(custom));
    CHECK(custom.same_space(custom));
}
