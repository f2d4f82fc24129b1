#pragma once

#include <cstdint>

#include "lipexp/maps.hpp"

namespace lipexp {

// Radial rotation-angle profile for the disk twist f(p) = R(gamma(|p|)) p.
// The angle falls from pi (inside radius a) to 0 (outside radius b) with
// |d gamma / d ln r| <= epsilon everywhere, so the twist moves every chord
// ratio by at most a factor 1 + epsilon while staying C0-close to nothing
// smooth: its derivative at the origin is -I.
//
// Built in log-radius coordinates: a C1 ramp over one octave joins the
// plateau pi to the line k - epsilon * ln r, which descends to height
// epsilon * h at ln r = ln d - h and is joined to 0 by a mirrored ramp.
// k = epsilon * ln(epsilon / 2) places the descent so the total drop is
// exactly pi.
struct GammaProfile {
    double epsilon = 0.0;
    double k = 0.0;
    double a = 0.0;  // inner plateau boundary, c / sqrt 2
    double b = 0.0;  // outer plateau boundary, d * sqrt 2
    double c = 0.0;  // exp((k - pi) / epsilon), where the descent starts
    double d = 0.0;  // exp(k / epsilon) = epsilon / 2, where it ends
    double t_a = 0.0, t_c = 0.0, t_d = 0.0;  // log-radius breakpoints
    double h = 0.0;                          // half ramp width, ln(2)/2

    double gamma(double r) const;
    double dgamma(double r) const;    // d gamma / dr
    double log_slope(double r) const; // d gamma / d ln r, |.| <= epsilon
};

GammaProfile gamma_build(double epsilon);

DiskPoint counterexample_apply(const GammaProfile& prof, const DiskPoint& p);
DiskPoint counterexample_unapply(const GammaProfile& prof, const DiskPoint& p);

MapSystem polar_twist_system(double epsilon);

// Derivative of the twist at p: the rotation plus a rank-one shear of
// operator norm |log_slope(|p|)|.  Exactly -identity at the origin.
Mat2 twist_jacobian(const GammaProfile& prof, const DiskPoint& p);

// Operator-norm gap at the origin between the twist derivative and the
// identity derivative; equals 2 for every profile.
double c1_gap(const GammaProfile& prof);

// Chord-ratio statistics of the twist against the identity over a pair
// sample: sup |d(fx,fy) - d(x,y)| / d(x,y) forward and inverse, plus the
// raw ratio extremes.
struct RatioCheck {
    double dw_prime_fwd = 0.0;
    double dw_prime_inv = 0.0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::size_t pairs = 0;
};

RatioCheck dw_prime_ratio_check(const GammaProfile& prof,
                                const PairSample& pairs);

// Pairs tuned for the twist: anchor radii log-uniform in [1e-16, 1] and
// separations log-uniform in [1e-9, 1e-2], so both plateaus and the ramps
// are probed at scales where the profile actually varies.
PairSample polar_pair_sample(std::size_t count, std::uint64_t seed);

// Pairs aligned with the top singular direction of (twist derivative - I)
// on a log-radial grid, with steps small enough that the difference
// quotient reproduces the local operator norm to ~1e-5.
PairSample twist_jacobian_probe_pairs(const GammaProfile& prof, int radii,
                                      int angles);

// C1-style distance estimate sup|f-g| + sampled Lip(f-g) for disk or
// interval systems.
double dc1_estimate(const MapSystem& f, const MapSystem& g,
                    const PairSample& pairs);

// Interval comparison: the slope metric dominates the derivative gap for
// monotone diffeos.  dw_prime is sampled on grid pairs plus two-scale local
// pairs anchored where the derivative gap peaks, so the reported values
// bracket each other tightly.
struct DerivSlopeReport {
    double c0 = 0.0;            // grid sup |f - g|
    double sup_deriv_gap = 0.0; // grid sup |f' - g'|
    double dw_prime = 0.0;
    bool holds = false;         // sup_deriv_gap <= dw_prime + 1e-6
};

DerivSlopeReport interval_dw_vs_c1(const IntervalDiffeo& f,
                                   const IntervalDiffeo& g, int grid_n);

}  // namespace lipexp
