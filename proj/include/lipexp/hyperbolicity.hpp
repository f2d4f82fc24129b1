#pragma once

#include "lipexp/map_metrics.hpp"
#include "lipexp/maps.hpp"
#include "lipexp/spaces.hpp"

namespace lipexp {

// Result of checking the expansion property on a pair sample: every pair
// closer than delta must stretch by >= lambda under f or f^-1.  When
// ok is false, worst_pair is the counterexample.
struct HyperbolicityCertificate {
    double delta = 0.0;
    double lambda = 0.0;       // min over close pairs of max(fwd, bwd) ratio
    std::size_t pairs_checked = 0;
    PairWitness worst_pair;    // pair achieving lambda
    bool ok = false;           // lambda > 1
};

HyperbolicityCertificate check_hyperbolic(const MapSystem& f,
                                          const PairSample& pairs,
                                          double delta);

// Torus metric adapted to a symmetric hyperbolic matrix: sup of the
// absolute eigen-coordinates of the difference, minimized over integer
// lifts.  Distances along the unstable eigendirection scale by exactly
// lambda_u under the map.
MetricSpace eigen_sup_space(const ToralAutomorphism& a);

// Truncated series sum_{|n|<=N} d(f^n x, f^n y) / 2^|n|.
double adapted_series_metric(const MapSystem& f, const Point& x, const Point& y,
                             int n_terms);

struct RobustnessMargin {
    double lambda = 0.0;
    double lambda_prime = 0.0;
    double epsilon = 0.0;  // largest double strictly below lambda - lambda_prime
};

RobustnessMargin robust_margin(double lambda, double lambda_prime);

// Desk-scale robust-expansiveness check: if d_W(f, g) < epsilon then every
// sampled pair with dist < cert.delta must expand under g by >=
// lambda_prime.  Hypothesis and conclusion are reported independently;
// pass is the implication.
struct CertificateCheck {
    double d_w = 0.0;
    double epsilon = 0.0;
    bool hypothesis_met = false;
    std::size_t close_pairs = 0;
    std::size_t violations = 0;
    double worst_ratio = 0.0;  // smallest max(fwd,bwd) ratio under g
    PairWitness worst_pair;
    bool conclusion_holds = false;
    bool pass = false;
};

CertificateCheck verify_certificate(const MapSystem& f, const MapSystem& g,
                                    const RobustnessMargin& margin,
                                    const HyperbolicityCertificate& cert,
                                    const PairSample& pairs);

}  // namespace lipexp
