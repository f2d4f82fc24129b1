#pragma once

#include "lipexp/maps.hpp"
#include "lipexp/spaces.hpp"

namespace lipexp {

// Pair that achieved a supremum, with the achieved value.
struct PairWitness {
    Point a;
    Point b;
    double value = 0.0;
};

struct PointWitness {
    Point p;
    double value = 0.0;
};

struct MapMetricReport {
    double c0 = 0.0;
    double w_prime_fwd = 0.0;
    double w_prime_inv = 0.0;
    double w = 0.0;
    double l_prime_fwd = 0.0;
    double l_prime_inv = 0.0;
    double l = 0.0;
    PointWitness c0_fwd_witness;
    PointWitness c0_inv_witness;
    PairWitness w_fwd_witness;
    PairWitness w_inv_witness;
    PairWitness l_fwd_witness;
    PairWitness l_inv_witness;
};

// max_x d(f x, g x) + max_x d(f^-1 x, g^-1 x) over the point list.
double dist_c0(const MapSystem& f, const MapSystem& g,
               const std::vector<Point>& pts);

// max over pairs of |d(f x, f y) - d(g x, g y)| / d(x, y).
double dist_w_prime(const MapSystem& f, const MapSystem& g,
                    const PairSample& pairs);

double dist_w(const MapSystem& f, const MapSystem& g, const PairSample& pairs,
              const std::vector<Point>& pts);

// max over pairs of |log(d(f x, f y) / d(g x, g y))|.  Throws when an
// image pair collapses below roundoff (non-injectivity at sample scale).
double dist_l_prime(const MapSystem& f, const MapSystem& g,
                    const PairSample& pairs);

double dist_l(const MapSystem& f, const MapSystem& g, const PairSample& pairs,
              const std::vector<Point>& pts);

// All of the above in one pass, with witnesses.
MapMetricReport metric_report(const MapSystem& f, const MapSystem& g,
                              const PairSample& pairs,
                              const std::vector<Point>& pts);

// max over pairs of d(f x, f y) / d(x, y): a certified lower bound of
// Lips(f); approaches the true constant on local pairs of smooth maps.
double lips_estimate(const MapSystem& f, const PairSample& pairs);

struct LipschitzNorm {
    double c0_norm = 0.0;     // max displacement d(x, f x)
    double loglips_fwd = 0.0; // log Lips estimate of f, clamped at 0
    double loglips_inv = 0.0; // log Lips estimate of f^-1 on f-image pairs
    double value = 0.0;       // c0_norm + max(loglips_fwd, loglips_inv)
};

// The group norm.  The inverse Lipschitz factor is estimated on the
// f-image of `pairs`, so f and f^-1 are probed along the same underlying
// pairs; that is what makes norm-vs-metric comparisons consistent.
LipschitzNorm norm_l(const MapSystem& f, const PairSample& pairs,
                     const std::vector<Point>& pts);

// |f g^-1| + |g^-1 f| with samples transported through g and f^-1
// respectively; matches dist_l on the same base samples.
double norm_induced_dist(const MapSystem& f, const MapSystem& g,
                         const PairSample& pairs,
                         const std::vector<Point>& pts);

PairSample transported_pairs(const MapSystem& f, const PairSample& pairs);
std::vector<Point> transported_points(const MapSystem& f,
                                      const std::vector<Point>& pts);

// Numerical companion to the statement that d_W and d_L induce the same
// topology: a concrete factor k (from the sampled contraction floor
// rho_min) with d_L <= k * d_W guaranteed on the same samples.
struct EquivalenceReport {
    double d_w = 0.0;
    double d_l = 0.0;
    double rho_min = 0.0;   // smallest image-distance ratio seen
    double k = 0.0;         // max(1, 1/rho_min)
    double delta_cap = 0.0; // min over both maps of 1/Lips - margin
    bool hypothesis_met = false; // d_w < delta_cap
    bool holds = false;          // d_l <= k * d_w (+ roundoff)
};

EquivalenceReport equivalence_check(const MapSystem& f, const MapSystem& g,
                                    const PairSample& pairs,
                                    const std::vector<Point>& pts,
                                    double margin);

}  // namespace lipexp
