#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lipexp/common.hpp"

namespace lipexp {

// Flat torus R^2/Z^2, coordinates reduced into [0,1).
struct TorusPoint {
    double x = 0.0;
    double y = 0.0;
};

// Closed unit disk in the plane.
struct DiskPoint {
    double x = 0.0;
    double y = 0.0;
};

struct IntervalPoint {
    double t = 0.0;
};

// Point on the flat cone of n prongs (total angle n*pi).  r = 0 is the
// apex regardless of theta; theta is kept in [0, n*pi).
struct ConePoint {
    double r = 0.0;
    double theta = 0.0;
};

// Bi-infinite 0/1..A-1 sequence truncated to the window [-W, W].
// symbols[window + n] holds position n.  Window is capped so the whole
// word fits in a fixed array and points stay cheap to copy.
struct ShiftWord {
    static constexpr int max_window = 12;

    std::array<std::uint8_t, 2 * max_window + 1> symbols{};
    std::int32_t window = 0;
    std::int32_t alphabet = 2;

    std::uint8_t at(int n) const { return symbols[std::size_t(window + n)]; }
    void set(int n, std::uint8_t v) { symbols[std::size_t(window + n)] = v; }
    int length() const { return 2 * window + 1; }
};

bool operator==(const ShiftWord& a, const ShiftWord& b);

// Index into a finite metric table.
struct FinitePoint {
    std::int32_t index = 0;
};

using Point = std::variant<TorusPoint, DiskPoint, IntervalPoint, ConePoint,
                           ShiftWord, FinitePoint>;

double torus_distance(const TorusPoint& p, const TorusPoint& q);
double disk_distance(const DiskPoint& p, const DiskPoint& q);
double interval_distance(const IntervalPoint& p, const IntervalPoint& q);

// 2^(-k) with k the smallest |n| where the words disagree; 0 when they
// agree on the whole window.
double shift_distance(const ShiftWord& x, const ShiftWord& y);

// Two-case flat-cone geodesic: planar law of cosines when the angular
// separation (inside total angle n*pi) is <= pi, otherwise through the apex.
double cone_distance(int prongs, const ConePoint& p, const ConePoint& q);

struct FiniteTable {
    std::string name;
    std::size_t count = 0;
    std::vector<double> dist;  // row-major count x count

    double at(std::size_t i, std::size_t j) const { return dist[i * count + j]; }
};

enum class SpaceKind { torus, disk, interval, shift, cone, finite };

struct MetricSpace {
    std::string name;
    SpaceKind kind = SpaceKind::torus;
    double diameter = 0.0;

    // shift parameters
    int window = 0;
    int alphabet = 0;

    // cone parameters
    int cone_prongs = 0;
    double cone_radius = 0.0;

    std::shared_ptr<const FiniteTable> table;

    // When set, overrides the kind-based distance while keeping the same
    // point representation (used for remetrized copies of a space).
    std::function<double(const Point&, const Point&)> custom_distance;

    double distance(const Point& p, const Point& q) const;
    Point sample_point(CounterRng& rng) const;

    // Exact enumeration support (shift and finite spaces).
    bool enumerable() const;
    std::size_t enumeration_size() const;
    std::vector<Point> enumerate_points() const;

    bool same_space(const MetricSpace& o) const;
};

MetricSpace torus_space();
MetricSpace disk_space();
MetricSpace interval_space();
MetricSpace shift_space(int window, int alphabet);
MetricSpace cone_space(int prongs, double radius);
MetricSpace finite_space(std::string name, std::vector<double> dist_matrix);

// Distinct point pairs used to lower-bound suprema.  `dist` caches the
// pair distances when the sample is small enough to afford it; use
// pair_dist to read distances either way.
struct PairSample {
    std::vector<Point> points;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    std::vector<double> dist;

    std::size_t size() const { return pairs.size(); }
    double pair_dist(const MetricSpace& space, std::size_t i) const {
        if (!dist.empty()) return dist[i];
        return space.distance(points[pairs[i].first], points[pairs[i].second]);
    }
};

// Seed-deterministic random pairs.  With max_sep the second point is drawn
// near the first and redrawn until the separation lands in
// [min_sep, max_sep]; gives up after a bounded number of retries.
PairSample sample_pairs(const MetricSpace& space, std::size_t count,
                        std::uint64_t seed,
                        std::optional<double> max_sep = std::nullopt,
                        double min_sep = 1e-12);

// All distinct pairs of an enumerable space.  For shift spaces only pairs
// whose first disagreement is interior (|n| <= W-1) are kept: boundary-only
// disagreements are artifacts of the truncation.
PairSample exhaustive_pairs(const MetricSpace& space,
                            std::optional<double> max_sep = std::nullopt);

// Uniform points, seed-deterministic (convenience for C0-style maxima).
std::vector<Point> sample_points(const MetricSpace& space, std::size_t count,
                                 std::uint64_t seed);

}  // namespace lipexp
