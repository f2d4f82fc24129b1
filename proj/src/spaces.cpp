#include "lipexp/spaces.hpp"

#include <algorithm>
#include <cmath>

namespace lipexp {

bool operator==(const ShiftWord& a, const ShiftWord& b) {
    if (a.window != b.window || a.alphabet != b.alphabet) return false;
    for (int n = -a.window; n <= a.window; ++n)
        if (a.at(n) != b.at(n)) return false;
    return true;
}

double torus_distance(const TorusPoint& p, const TorusPoint& q) {
    double dx = wrap_half(p.x - q.x);
    double dy = wrap_half(p.y - q.y);
    return std::hypot(dx, dy);
}

double disk_distance(const DiskPoint& p, const DiskPoint& q) {
    return std::hypot(p.x - q.x, p.y - q.y);
}

double interval_distance(const IntervalPoint& p, const IntervalPoint& q) {
    return std::abs(p.t - q.t);
}

double shift_distance(const ShiftWord& x, const ShiftWord& y) {
    if (x.window != y.window || x.alphabet != y.alphabet)
        throw precondition_error("shift_distance: window/alphabet mismatch");
    const int w = x.window;
    for (int k = 0; k <= w; ++k) {
        if (x.at(k) != y.at(k) || x.at(-k) != y.at(-k))
            return std::ldexp(1.0, -k);
    }
    return 0.0;
}

double cone_distance(int prongs, const ConePoint& p, const ConePoint& q) {
    const double total = double(prongs) * M_PI;
    double sep = std::abs(p.theta - q.theta);
    if (sep > 0.5 * total) sep = total - sep;
    if (sep <= M_PI) {
        double d2 = p.r * p.r + q.r * q.r - 2.0 * p.r * q.r * std::cos(sep);
        return d2 > 0.0 ? std::sqrt(d2) : 0.0;
    }
    return p.r + q.r;
}

namespace {

double finite_dist(const FiniteTable& t, const FinitePoint& p, const FinitePoint& q) {
    return t.at(std::size_t(p.index), std::size_t(q.index));
}

ShiftWord random_word(CounterRng& rng, int window, int alphabet) {
    ShiftWord w;
    w.window = window;
    w.alphabet = alphabet;
    for (int n = -window; n <= window; ++n)
        w.set(n, std::uint8_t(rng.below(std::uint64_t(alphabet))));
    return w;
}

}  // namespace

double MetricSpace::distance(const Point& p, const Point& q) const {
    if (custom_distance) return custom_distance(p, q);
    switch (kind) {
        case SpaceKind::torus:
            return torus_distance(std::get<TorusPoint>(p), std::get<TorusPoint>(q));
        case SpaceKind::disk:
            return disk_distance(std::get<DiskPoint>(p), std::get<DiskPoint>(q));
        case SpaceKind::interval:
            return interval_distance(std::get<IntervalPoint>(p), std::get<IntervalPoint>(q));
        case SpaceKind::shift:
            return shift_distance(std::get<ShiftWord>(p), std::get<ShiftWord>(q));
        case SpaceKind::cone:
            return cone_distance(cone_prongs, std::get<ConePoint>(p), std::get<ConePoint>(q));
        case SpaceKind::finite:
            return finite_dist(*table, std::get<FinitePoint>(p), std::get<FinitePoint>(q));
    }
    throw std::logic_error("unreachable space kind");
}

Point MetricSpace::sample_point(CounterRng& rng) const {
    switch (kind) {
        case SpaceKind::torus:
            return TorusPoint{rng.uniform(), rng.uniform()};
        case SpaceKind::disk: {
            // Rejection from the bounding square keeps the law uniform.
            for (;;) {
                double x = 2.0 * rng.uniform() - 1.0;
                double y = 2.0 * rng.uniform() - 1.0;
                if (x * x + y * y <= 1.0) return DiskPoint{x, y};
            }
        }
        case SpaceKind::interval:
            return IntervalPoint{rng.uniform()};
        case SpaceKind::shift:
            return random_word(rng, window, alphabet);
        case SpaceKind::cone: {
            double r = cone_radius * std::sqrt(rng.uniform());
            double theta = double(cone_prongs) * M_PI * rng.uniform();
            return ConePoint{r, theta};
        }
        case SpaceKind::finite:
            return FinitePoint{std::int32_t(rng.below(table->count))};
    }
    throw std::logic_error("unreachable space kind");
}

bool MetricSpace::enumerable() const {
    return kind == SpaceKind::shift || kind == SpaceKind::finite;
}

std::size_t MetricSpace::enumeration_size() const {
    if (kind == SpaceKind::finite) return table->count;
    if (kind == SpaceKind::shift) {
        std::size_t n = 1;
        for (int i = 0; i < 2 * window + 1; ++i) {
            n *= std::size_t(alphabet);
            if (n > (std::size_t(1) << 24))
                throw precondition_error("shift enumeration too large");
        }
        return n;
    }
    throw precondition_error("space is not enumerable: " + name);
}

std::vector<Point> MetricSpace::enumerate_points() const {
    std::size_t n = enumeration_size();
    std::vector<Point> pts;
    pts.reserve(n);
    if (kind == SpaceKind::finite) {
        for (std::size_t i = 0; i < n; ++i) pts.push_back(FinitePoint{std::int32_t(i)});
        return pts;
    }
    ShiftWord w;
    w.window = window;
    w.alphabet = alphabet;
    const int len = w.length();
    for (std::size_t code = 0; code < n; ++code) {
        std::size_t rest = code;
        for (int i = 0; i < len; ++i) {
            w.symbols[std::size_t(i)] = std::uint8_t(rest % std::size_t(alphabet));
            rest /= std::size_t(alphabet);
        }
        pts.push_back(w);
    }
    return pts;
}

bool MetricSpace::same_space(const MetricSpace& o) const {
    if (kind != o.kind) return false;
    // Remetrized copies only match other copies carrying the same metric.
    if (bool(custom_distance) != bool(o.custom_distance)) return false;
    if (custom_distance && name != o.name) return false;
    switch (kind) {
        case SpaceKind::shift:
            return window == o.window && alphabet == o.alphabet;
        case SpaceKind::cone:
            return cone_prongs == o.cone_prongs && cone_radius == o.cone_radius;
        case SpaceKind::finite:
            return table == o.table;
        default:
            return true;
    }
}

MetricSpace torus_space() {
    MetricSpace s;
    s.name = "torus";
    s.kind = SpaceKind::torus;
    s.diameter = std::sqrt(0.5);
    return s;
}

MetricSpace disk_space() {
    MetricSpace s;
    s.name = "disk";
    s.kind = SpaceKind::disk;
    s.diameter = 2.0;
    return s;
}

MetricSpace interval_space() {
    MetricSpace s;
    s.name = "interval";
    s.kind = SpaceKind::interval;
    s.diameter = 1.0;
    return s;
}

MetricSpace shift_space(int window, int alphabet) {
    if (window < 1 || window > ShiftWord::max_window)
        throw precondition_error("shift window out of range [1," +
                                 std::to_string(ShiftWord::max_window) + "]");
    if (alphabet < 2 || alphabet > 255)
        throw precondition_error("shift alphabet out of range [2,255]");
    MetricSpace s;
    s.name = "shift(W=" + std::to_string(window) + ",A=" + std::to_string(alphabet) + ")";
    s.kind = SpaceKind::shift;
    s.diameter = 1.0;
    s.window = window;
    s.alphabet = alphabet;
    return s;
}

MetricSpace cone_space(int prongs, double radius) {
    if (prongs < 2) throw precondition_error("cone needs at least 2 prongs");
    if (!(radius > 0.0)) throw precondition_error("cone radius must be positive");
    MetricSpace s;
    s.name = "cone(n=" + std::to_string(prongs) + ")";
    s.kind = SpaceKind::cone;
    s.diameter = 2.0 * radius;
    s.cone_prongs = prongs;
    s.cone_radius = radius;
    return s;
}

MetricSpace finite_space(std::string name, std::vector<double> dist_matrix) {
    auto t = std::make_shared<FiniteTable>();
    std::size_t n = 0;
    while (n * n < dist_matrix.size()) ++n;
    if (n * n != dist_matrix.size() || n == 0)
        throw precondition_error("finite_space: matrix must be square and nonempty");
    t->name = name;
    t->count = n;
    t->dist = std::move(dist_matrix);
    MetricSpace s;
    s.name = "finite(" + name + ")";
    s.kind = SpaceKind::finite;
    s.diameter = *std::max_element(t->dist.begin(), t->dist.end());
    s.table = std::move(t);
    return s;
}

namespace {

// Draw a point near `base` so that max_sep filters do not starve.
Point sample_near(const MetricSpace& space, const Point& base, double max_sep,
                  CounterRng& rng) {
    switch (space.kind) {
        case SpaceKind::torus: {
            const auto& p = std::get<TorusPoint>(base);
            double dx = (2.0 * rng.uniform() - 1.0) * max_sep;
            double dy = (2.0 * rng.uniform() - 1.0) * max_sep;
            return TorusPoint{wrap01(p.x + dx), wrap01(p.y + dy)};
        }
        case SpaceKind::disk: {
            const auto& p = std::get<DiskPoint>(base);
            double dx = (2.0 * rng.uniform() - 1.0) * max_sep;
            double dy = (2.0 * rng.uniform() - 1.0) * max_sep;
            double x = p.x + dx, y = p.y + dy;
            if (x * x + y * y > 1.0) return base;  // retry via caller
            return DiskPoint{x, y};
        }
        case SpaceKind::interval: {
            const auto& p = std::get<IntervalPoint>(base);
            double t = p.t + (2.0 * rng.uniform() - 1.0) * max_sep;
            return IntervalPoint{std::clamp(t, 0.0, 1.0)};
        }
        case SpaceKind::cone: {
            const auto& p = std::get<ConePoint>(base);
            double r = p.r + (2.0 * rng.uniform() - 1.0) * max_sep;
            r = std::clamp(r, 0.0, space.cone_radius);
            double dth = (2.0 * rng.uniform() - 1.0) * max_sep / std::max(p.r, 1e-9);
            double total = double(space.cone_prongs) * M_PI;
            double th = p.theta + dth;
            th -= total * std::floor(th / total);
            return ConePoint{r, th};
        }
        case SpaceKind::shift: {
            const auto& p = std::get<ShiftWord>(base);
            // First disagreement at depth k gives distance 2^-k, so pick k
            // with 2^-k <= max_sep and randomize only beyond depth k.
            int kmin = 0;
            while (std::ldexp(1.0, -kmin) > max_sep && kmin <= p.window) ++kmin;
            if (kmin > p.window)
                throw precondition_error("max_sep below shift resolution 2^-W");
            int k = kmin + int(rng.below(std::uint64_t(p.window - kmin + 1)));
            ShiftWord q = p;
            int side = (rng.next() & 1) ? k : -k;
            std::uint8_t step = std::uint8_t(1 + rng.below(std::uint64_t(p.alphabet - 1)));
            q.set(side, std::uint8_t((p.at(side) + step) % p.alphabet));
            for (int n = k + 1; n <= p.window; ++n) {
                q.set(n, std::uint8_t(rng.below(std::uint64_t(p.alphabet))));
                q.set(-n, std::uint8_t(rng.below(std::uint64_t(p.alphabet))));
            }
            if (side == k) q.set(-k, std::uint8_t(rng.below(std::uint64_t(p.alphabet))));
            return q;
        }
        case SpaceKind::finite:
            return space.sample_point(rng);
    }
    throw std::logic_error("unreachable space kind");
}

}  // namespace

PairSample sample_pairs(const MetricSpace& space, std::size_t count,
                        std::uint64_t seed, std::optional<double> max_sep,
                        double min_sep) {
    if (count < 1) throw precondition_error("sample_pairs: count must be >= 1");
    if (max_sep && !(*max_sep > 0.0))
        throw precondition_error("sample_pairs: max_sep must be positive");
    CounterRng rng(seed);
    PairSample out;
    out.points.reserve(2 * count);
    out.pairs.reserve(count);
    out.dist.reserve(count);
    const int retry_limit = 10000;
    for (std::size_t i = 0; i < count; ++i) {
        Point a = space.sample_point(rng);
        double d = 0.0;
        Point b = a;
        bool ok = false;
        for (int attempt = 0; attempt < retry_limit; ++attempt) {
            b = max_sep ? sample_near(space, a, *max_sep, rng) : space.sample_point(rng);
            d = space.distance(a, b);
            if (d >= min_sep && (!max_sep || d <= *max_sep)) {
                ok = true;
                break;
            }
        }
        if (!ok)
            throw precondition_error("sample_pairs: separation constraints "
                                     "unsatisfiable after bounded retries");
        std::uint32_t ia = std::uint32_t(out.points.size());
        out.points.push_back(std::move(a));
        out.points.push_back(std::move(b));
        out.pairs.emplace_back(ia, ia + 1);
        out.dist.push_back(d);
    }
    return out;
}

PairSample exhaustive_pairs(const MetricSpace& space, std::optional<double> max_sep) {
    if (!space.enumerable())
        throw precondition_error("exhaustive_pairs needs an enumerable space, got " +
                                 space.name);
    PairSample out;
    out.points = space.enumerate_points();
    const std::size_t n = out.points.size();
    const std::size_t total = n * (n - 1) / 2;
    // Distances are cached only for samples small enough that the extra
    // array is cheap next to the pair list itself.
    const bool cache = total <= (std::size_t(8) << 20);

    if (space.kind == SpaceKind::shift) {
        std::vector<ShiftWord> words(n);
        for (std::size_t i = 0; i < n; ++i) words[i] = std::get<ShiftWord>(out.points[i]);
        const double interior_floor = std::ldexp(1.0, -(space.window - 1));
        out.pairs.reserve(total);
        if (cache) out.dist.reserve(total);
        for (std::size_t i = 0; i < n; ++i) {
            const ShiftWord& a = words[i];
            for (std::size_t j = i + 1; j < n; ++j) {
                double d = shift_distance(a, words[j]);
                if (d < interior_floor) continue;
                if (max_sep && d > *max_sep) continue;
                out.pairs.emplace_back(std::uint32_t(i), std::uint32_t(j));
                if (cache) out.dist.push_back(d);
            }
        }
        out.pairs.shrink_to_fit();
        return out;
    }

    out.pairs.reserve(total);
    if (cache) out.dist.reserve(total);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double d = space.distance(out.points[i], out.points[j]);
            if (d <= 0.0) continue;
            if (max_sep && d > *max_sep) continue;
            out.pairs.emplace_back(std::uint32_t(i), std::uint32_t(j));
            if (cache) out.dist.push_back(d);
        }
    }
    return out;
}

std::vector<Point> sample_points(const MetricSpace& space, std::size_t count,
                                 std::uint64_t seed) {
    CounterRng rng(seed, 1);
    std::vector<Point> pts;
    pts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) pts.push_back(space.sample_point(rng));
    return pts;
}

}  // namespace lipexp
