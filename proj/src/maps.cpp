#include "lipexp/maps.hpp"

#include <cmath>
#include <sstream>

namespace lipexp {

Vec2 ToralAutomorphism::apply_fwd(Vec2 v) const {
    return {double(fwd_m[0][0]) * v.x + double(fwd_m[0][1]) * v.y,
            double(fwd_m[1][0]) * v.x + double(fwd_m[1][1]) * v.y};
}

Vec2 ToralAutomorphism::apply_inv(Vec2 v) const {
    return {double(inv_m[0][0]) * v.x + double(inv_m[0][1]) * v.y,
            double(inv_m[1][0]) * v.x + double(inv_m[1][1]) * v.y};
}

TorusPoint ToralAutomorphism::fwd(const TorusPoint& p) const {
    Vec2 v = apply_fwd({p.x, p.y});
    return {wrap01(v.x), wrap01(v.y)};
}

TorusPoint ToralAutomorphism::inv(const TorusPoint& p) const {
    Vec2 v = apply_inv({p.x, p.y});
    return {wrap01(v.x), wrap01(v.y)};
}

ToralAutomorphism cat_matrix() {
    ToralAutomorphism a;
    a.fwd_m = {{{2, 1}, {1, 1}}};
    a.inv_m = {{{1, -1}, {-1, 2}}};
    // Symmetric with trace 3, det 1: eigenvalues (3 +- sqrt 5)/2.
    double s5 = std::sqrt(5.0);
    a.lambda_u = 0.5 * (3.0 + s5);
    a.lambda_s = 0.5 * (3.0 - s5);
    double uy = a.lambda_u - 2.0;
    double nrm = std::hypot(1.0, uy);
    a.unit_u = {1.0 / nrm, uy / nrm};
    a.unit_s = {-a.unit_u.y, a.unit_u.x};
    return a;
}

MapSystem identity_system(const MetricSpace& space) {
    MapSystem m;
    m.name = "id";
    m.space = space;
    m.forward = [](const Point& p) { return p; };
    m.inverse = [](const Point& p) { return p; };
    return m;
}

MapSystem cat_system() {
    MapSystem m;
    m.name = "cat";
    m.space = torus_space();
    auto a = cat_matrix();
    m.forward = [a](const Point& p) -> Point { return a.fwd(std::get<TorusPoint>(p)); };
    m.inverse = [a](const Point& p) -> Point { return a.inv(std::get<TorusPoint>(p)); };
    return m;
}

MapSystem torus_rotation(double tx, double ty) {
    MapSystem m;
    m.name = "rot(" + format_double(tx) + "," + format_double(ty) + ")";
    m.space = torus_space();
    m.forward = [tx, ty](const Point& p) -> Point {
        const auto& q = std::get<TorusPoint>(p);
        return TorusPoint{wrap01(q.x + tx), wrap01(q.y + ty)};
    };
    m.inverse = [tx, ty](const Point& p) -> Point {
        const auto& q = std::get<TorusPoint>(p);
        return TorusPoint{wrap01(q.x - tx), wrap01(q.y - ty)};
    };
    return m;
}

MapSystem cat_affine(double cx, double cy) {
    MapSystem m;
    m.name = "cat-affine(" + format_double(cx) + "," + format_double(cy) + ")";
    m.space = torus_space();
    auto a = cat_matrix();
    m.forward = [a, cx, cy](const Point& p) -> Point {
        const auto& q = std::get<TorusPoint>(p);
        Vec2 v = a.apply_fwd({q.x, q.y});
        return TorusPoint{wrap01(v.x + cx), wrap01(v.y + cy)};
    };
    m.inverse = [a, cx, cy](const Point& p) -> Point {
        const auto& q = std::get<TorusPoint>(p);
        Vec2 v = a.apply_inv({q.x - cx, q.y - cy});
        return TorusPoint{wrap01(v.x), wrap01(v.y)};
    };
    return m;
}

MapSystem cat_bump(TorusPoint center, double radius, double amp, Vec2 dir) {
    if (!(radius > 0.0)) throw precondition_error("cat_bump: radius must be positive");
    auto a = cat_matrix();
    // The inverse solve contracts at rate |A^-1| * Lips(phi); keep real
    // margin under 1.  Lips(phi) <= 1.5*amp/radius for the smoothstep hat.
    double contraction = a.lambda_u * 1.5 * std::abs(amp) / radius;
    if (contraction >= 0.9)
        throw precondition_error("cat_bump: invertibility precondition violated "
                                 "(amp too large for radius)");
    double dn = std::hypot(dir.x, dir.y);
    if (!(dn > 0.0)) throw precondition_error("cat_bump: zero direction");
    Vec2 u{dir.x / dn, dir.y / dn};

    auto phi = [center, radius, amp](const TorusPoint& p) {
        return amp * smoothstep(1.0 - torus_distance(p, center) / radius);
    };

    MapSystem m;
    m.name = "cat-bump(" + format_double(center.x) + "," + format_double(center.y) +
             ";r=" + format_double(radius) + ";amp=" + format_double(amp) + ")";
    m.space = torus_space();
    m.forward = [a, phi, u](const Point& p) -> Point {
        const auto& q = std::get<TorusPoint>(p);
        double h = phi(q);
        Vec2 v = a.apply_fwd({q.x, q.y});
        return TorusPoint{wrap01(v.x + h * u.x), wrap01(v.y + h * u.y)};
    };
    m.inverse = [a, phi, u](const Point& p) -> Point {
        const auto& q = std::get<TorusPoint>(p);
        Vec2 w = a.apply_inv({q.x, q.y});
        TorusPoint z{wrap01(w.x), wrap01(w.y)};
        for (int it = 0; it < 200; ++it) {
            double h = phi(z);
            Vec2 v = a.apply_inv({q.x - h * u.x, q.y - h * u.y});
            TorusPoint next{wrap01(v.x), wrap01(v.y)};
            double step = torus_distance(next, z);
            z = next;
            if (step < 1e-14) break;
        }
        return z;
    };
    return m;
}

MapSystem shift_system(int window, int alphabet) {
    MapSystem m;
    m.space = shift_space(window, alphabet);
    m.name = "shift";
    const int w = window;
    // Vacated boundary symbols repeat the edge; downstream computations
    // only trust disagreement indices with |n| <= W-1.
    m.forward = [w](const Point& p) -> Point {
        const auto& x = std::get<ShiftWord>(p);
        ShiftWord y = x;
        for (int n = -w; n < w; ++n) y.set(n, x.at(n + 1));
        y.set(w, x.at(w));
        return y;
    };
    m.inverse = [w](const Point& p) -> Point {
        const auto& x = std::get<ShiftWord>(p);
        ShiftWord y = x;
        for (int n = w; n > -w; --n) y.set(n, x.at(n - 1));
        y.set(-w, x.at(-w));
        return y;
    };
    return m;
}

ShiftBlockSystem shift_block_perturbation(int window, int alphabet,
                                          std::uint64_t seed) {
    if (window < 3)
        throw precondition_error("shift_block_perturbation needs window >= 3");
    CounterRng rng(seed, 0x57a17e);
    BlockTweak t;
    t.target = 2 + int(rng.below(std::uint64_t(window - 2)));
    t.control = -(t.target - 1) + int(rng.below(std::uint64_t(2 * t.target - 1)));
    t.trigger = std::uint8_t(rng.below(std::uint64_t(alphabet)));

    MapSystem base = shift_system(window, alphabet);
    const int m = t.target;
    const int c = t.control;
    const std::uint8_t trig = t.trigger;
    const int a = alphabet;

    auto tweak_fwd = [m, c, trig, a](ShiftWord x) {
        if (x.at(c) == trig) x.set(m, std::uint8_t((x.at(m) + 1) % a));
        return x;
    };
    auto tweak_inv = [m, c, trig, a](ShiftWord x) {
        if (x.at(c) == trig) x.set(m, std::uint8_t((x.at(m) + a - 1) % a));
        return x;
    };

    MapSystem g;
    g.space = base.space;
    g.name = "shift-block(m=" + std::to_string(t.target) +
             ",c=" + std::to_string(t.control) +
             ",s=" + std::to_string(int(t.trigger)) + ")";
    auto base_fwd = base.forward;
    auto base_inv = base.inverse;
    g.forward = [base_fwd, tweak_fwd](const Point& p) -> Point {
        return tweak_fwd(std::get<ShiftWord>(base_fwd(p)));
    };
    g.inverse = [base_inv, tweak_inv](const Point& p) -> Point {
        return base_inv(Point{tweak_inv(std::get<ShiftWord>(p))});
    };
    return {std::move(g), t};
}

IntervalDiffeo interval_identity_diffeo() {
    IntervalDiffeo d;
    d.name = "id";
    d.forward = [](double x) { return x; };
    d.inverse = [](double x) { return x; };
    d.derivative = [](double) { return 1.0; };
    return d;
}

IntervalDiffeo interval_poly_diffeo(double c) {
    if (std::abs(c) > 0.5)
        throw precondition_error("interval_poly_diffeo: |c| must be <= 0.5");
    IntervalDiffeo d;
    d.name = "poly(" + format_double(c) + ")";
    d.forward = [c](double x) { return x + c * x * (1.0 - x); };
    // Stable quadratic root of c*x^2 - (1+c)*x + y = 0 in [0,1].
    d.inverse = [c](double y) {
        double b = 1.0 + c;
        double disc = b * b - 4.0 * c * y;
        return 2.0 * y / (b + std::sqrt(disc));
    };
    d.derivative = [c](double x) { return 1.0 + c * (1.0 - 2.0 * x); };
    return d;
}

MapSystem interval_system(const IntervalDiffeo& d) {
    MapSystem m;
    m.name = d.name;
    m.space = interval_space();
    auto f = d.forward;
    auto fi = d.inverse;
    m.forward = [f](const Point& p) -> Point {
        return IntervalPoint{f(std::get<IntervalPoint>(p).t)};
    };
    m.inverse = [fi](const Point& p) -> Point {
        return IntervalPoint{fi(std::get<IntervalPoint>(p).t)};
    };
    return m;
}

MapSystem compose(const MapSystem& outer, const MapSystem& inner) {
    if (!outer.space.same_space(inner.space))
        throw precondition_error("compose: maps live on different spaces");
    MapSystem m;
    m.name = outer.name + "*" + inner.name;
    m.space = outer.space;
    auto of = outer.forward, inf = inner.forward;
    auto oi = outer.inverse, ini = inner.inverse;
    m.forward = [of, inf](const Point& p) { return of(inf(p)); };
    m.inverse = [oi, ini](const Point& p) { return ini(oi(p)); };
    return m;
}

MapSystem inverted(const MapSystem& f) {
    MapSystem m;
    m.name = "inv(" + f.name + ")";
    m.space = f.space;
    m.forward = f.inverse;
    m.inverse = f.forward;
    return m;
}

MapSystem with_space(const MapSystem& f, const MetricSpace& space) {
    MapSystem m = f;
    m.space = space;
    return m;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_num(const std::string& s) {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

std::vector<double> parse_nums(const std::string& s, std::size_t n) {
    auto parts = split(s, ',');
    if (parts.size() != n)
        throw std::invalid_argument("expected " + std::to_string(n) +
                                    " comma-separated numbers, got '" + s + "'");
    std::vector<double> out;
    for (auto& p : parts) out.push_back(parse_num(p));
    return out;
}

}  // namespace

MapSystem parse_map(const std::string& spec, const MetricSpace& space) {
    auto head_tail = [&]() -> std::pair<std::string, std::string> {
        auto pos = spec.find(':');
        if (pos == std::string::npos) return {spec, ""};
        return {spec.substr(0, pos), spec.substr(pos + 1)};
    };
    auto [head, tail] = head_tail();
    if (head == "interval" && !tail.empty()) {
        auto pos = tail.find(':');
        head = pos == std::string::npos ? tail : tail.substr(0, pos);
        tail = pos == std::string::npos ? "" : tail.substr(pos + 1);
    }

    if (head == "id") return identity_system(space);

    switch (space.kind) {
        case SpaceKind::torus:
            if (head == "cat") return cat_system();
            if (head == "rot") {
                auto v = parse_nums(tail, 2);
                return torus_rotation(v[0], v[1]);
            }
            if (head == "cat-affine") {
                auto v = parse_nums(tail, 2);
                return cat_affine(v[0], v[1]);
            }
            if (head == "cat-bump") {
                auto v = parse_nums(tail, 4);
                return cat_bump(TorusPoint{v[0], v[1]}, v[2], v[3]);
            }
            break;
        case SpaceKind::shift:
            if (head == "shift")
                return shift_system(space.window, space.alphabet);
            if (head == "shift-block") {
                std::uint64_t seed = std::stoull(tail);
                return shift_block_perturbation(space.window, space.alphabet, seed)
                    .system;
            }
            break;
        case SpaceKind::interval:
            if (head == "poly")
                return interval_system(interval_poly_diffeo(parse_num(tail)));
            break;
        default:
            break;
    }
    throw std::invalid_argument("unknown map '" + spec + "' for space " + space.name);
}

}  // namespace lipexp
