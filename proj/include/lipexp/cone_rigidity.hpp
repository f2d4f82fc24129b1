#pragma once

#include <cstdint>
#include <vector>

#include "lipexp/maps.hpp"

namespace lipexp {

// Length of the metric circle of radius r around the apex of the n-prong
// cone (total cone angle n*pi).
double circle_length(int prongs, double r);

struct CurveSample {
    std::vector<ConePoint> points;
    bool closed = false;
    double mesh = 0.0;  // max distance between consecutive samples
};

CurveSample sample_apex_circle(int prongs, double r, int count);

// Metric circle of radius r1 around a non-apex point; needs r1 < center.r
// so the disk misses the apex and a planar chart is isometric on it.
CurveSample sample_regular_circle(int prongs, const ConePoint& center,
                                  double r1, int count);

// Inscribed polygonal length (lower bound for the true length, converging
// under refinement).
double curve_length(int prongs, const CurveSample& curve);

// Point at parameter t in [0,1] along a minimizing geodesic from p to q.
ConePoint cone_geodesic_point(int prongs, const ConePoint& p,
                              const ConePoint& q, double t);

// Inserts geodesic midpoints between consecutive samples, halving the mesh.
CurveSample refine_midpoints(int prongs, const CurveSample& curve);

// Rotation by alpha (an isometry fixing the apex).
MapSystem cone_rotation_system(int prongs, double alpha);

// Homeomorphism dragging the point at (target_r, target_theta) into the
// apex: unfold the cone by the n/2-power chart, translate a smoothstep
// bump of the plane, fold back.  Displacement is supported well inside the
// unit cone, so the boundary stays fixed.
MapSystem cone_drag_system(int prongs, double target_r, double target_theta);

// Seeded family of drag maps with target radius in [0.05, 0.19].
std::vector<MapSystem> cone_stress_family(int prongs, std::size_t count,
                                          std::uint64_t seed);

// Lower bound for Lip(j) * Lip(j^-1) witnessed by the circle of radius r1
// around a point x that j sends to the apex: the image curve winds around
// the apex, so it is at least as long as the apex circle through its
// closest point.  Throws if j does not send x to the apex.
struct RigidityEstimate {
    double lips_fwd = 0.0;   // max image/preimage distance ratio
    double lips_inv = 0.0;   // max preimage/image distance ratio
    double product = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;         // distance from apex to the sampled image curve
    std::size_t samples = 0;
};

RigidityEstimate rigidity_product(
    const MapSystem& j, const ConePoint& x, double r1, int count,
    const std::vector<std::pair<ConePoint, ConePoint>>& extra_pairs = {});

// Family sweep: every drag map moves the apex, so each must pay the
// rigidity cost n/2 in its Lipschitz product.  The bound carries no
// content for n = 2 (every homeomorphism has product >= 1).
struct FixSetReport {
    int prongs = 0;
    std::size_t family_size = 0;
    double min_product = 0.0;
    double bound = 0.0;  // n / 2
    bool vacuous = false;
    bool ok = false;
};

FixSetReport fix_set_stability(int prongs, std::size_t family_size,
                               std::uint64_t seed, double tol);

}  // namespace lipexp
