#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "lipexp/spaces.hpp"

namespace lipexp {

// A bi-Lipschitz homeomorphism given by forward and inverse evaluators.
struct MapSystem {
    std::string name;
    MetricSpace space;
    std::function<Point(const Point&)> forward;
    std::function<Point(const Point&)> inverse;

    Point fwd(const Point& p) const { return forward(p); }
    Point inv(const Point& p) const { return inverse(p); }
};

// Integer 2x2 matrix with |det| = 1 acting on the torus, plus eigen data.
// Restricted to symmetric matrices so the eigenbasis is orthonormal and
// the stable direction is just the rotated unstable one.
struct ToralAutomorphism {
    std::array<std::array<long, 2>, 2> fwd_m;
    std::array<std::array<long, 2>, 2> inv_m;
    double lambda_u = 0.0;
    double lambda_s = 0.0;
    Vec2 unit_u{};
    Vec2 unit_s{};

    Vec2 apply_fwd(Vec2 v) const;
    Vec2 apply_inv(Vec2 v) const;
    TorusPoint fwd(const TorusPoint& p) const;
    TorusPoint inv(const TorusPoint& p) const;
};

// The default hyperbolic witness [[2,1],[1,1]].
ToralAutomorphism cat_matrix();

MapSystem identity_system(const MetricSpace& space);
MapSystem cat_system();
MapSystem torus_rotation(double tx, double ty);

// x -> Ax + c mod 1.
MapSystem cat_affine(double cx, double cy);

// x -> Ax + phi(x)*dir with phi a smoothstep hat supported in the disk
// around `center`: phi(x) = amp * s(1 - d(x,center)/radius).  The inverse
// is a fixed-point solve; amp/radius must keep the displacement a
// contraction after A^-1 (checked).
MapSystem cat_bump(TorusPoint center, double radius, double amp,
                   Vec2 dir = Vec2{1.0, 0.0});

MapSystem shift_system(int window, int alphabet);

// One seeded block perturbation of the shift: compose the
// shift with the conditional symbol increment described by `BlockTweak`.
struct BlockTweak {
    int target = 2;        // symbol position that gets incremented, in [2, W-1]
    int control = 0;       // trigger position, |control| < target
    std::uint8_t trigger = 0;
};

struct ShiftBlockSystem {
    MapSystem system;
    BlockTweak tweak;
};

ShiftBlockSystem shift_block_perturbation(int window, int alphabet,
                                          std::uint64_t seed);

// Increasing interval diffeomorphism with an analytic derivative, the
// 1-D catalog for derivative-level comparisons.
struct IntervalDiffeo {
    std::string name;
    std::function<double(double)> forward;
    std::function<double(double)> inverse;
    std::function<double(double)> derivative;
};

IntervalDiffeo interval_identity_diffeo();
// x -> x + c*x*(1-x); needs |c| <= 1/2 so the derivative stays positive
// with margin.
IntervalDiffeo interval_poly_diffeo(double c);

MapSystem interval_system(const IntervalDiffeo& d);

MapSystem compose(const MapSystem& outer, const MapSystem& inner);
MapSystem inverted(const MapSystem& f);
MapSystem with_space(const MapSystem& f, const MetricSpace& space);

// CLI-facing catalog lookup.  Accepts: id | cat | rot:tx,ty |
// cat-affine:cx,cy | cat-bump:cx,cy,radius,amp | shift | shift-block:seed |
// interval:id | interval:poly:c.  The space decides which names are valid.
MapSystem parse_map(const std::string& spec, const MetricSpace& space);

}  // namespace lipexp
