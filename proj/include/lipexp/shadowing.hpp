#pragma once

#include <cstdint>
#include <vector>

#include "lipexp/maps.hpp"

namespace lipexp {

// Finite orbit segment x_n for n in [-n_back, n_fwd] with
// d(f(x_n), x_{n+1}) <= delta at every step.
struct PseudoOrbit {
    std::vector<TorusPoint> points;
    int n_back = 0;
    int n_fwd = 0;
    double delta = 0.0;

    const TorusPoint& at(int n) const {
        return points[std::size_t(n + n_back)];
    }
    int length() const { return n_back + n_fwd + 1; }
};

// Seed-deterministic noisy orbit of f through x0: forward steps add a
// uniform disk-of-radius-delta error after f, backward steps add it before
// applying the inverse, so the defect stays <= delta on both sides.
PseudoOrbit make_pseudo_orbit(const MapSystem& f, TorusPoint x0, double delta,
                              int n_steps, std::uint64_t seed);

// True orbit y_n = A^n y_0 correcting a pseudo-orbit of a hyperbolic
// automorphism.  correction[i] is the lifted displacement y_n - x_n; the
// interior conjugation relation y_{n+1} = A y_n holds by construction, so
// residual only measures floating-point error.
struct ShadowResult {
    std::vector<TorusPoint> orbit;
    std::vector<Vec2> correction;
    double sup_correction = 0.0;  // max_n |correction[n]|
    double bound = 0.0;           // delta * (1/(1-lambda_s) + 1/(lambda_u-1))
    double max_defect = 0.0;      // max_n |x_{n+1} - A x_n| (lifted)
    double residual = 0.0;        // max_n d(A y_n, y_{n+1})
};

ShadowResult shadow_linear(const ToralAutomorphism& a, const PseudoOrbit& po);

// Semiconjugacy estimate h with h o g = A o h, sampled on an n x n grid:
// h(x) is the time-zero point of the A-orbit shadowing the g-orbit of x.
struct ConjugacyField {
    int grid_n = 0;
    int n_steps = 0;
    std::vector<TorusPoint> grid;  // row-major grid anchors x_{ij}
    std::vector<TorusPoint> h;     // h(x_{ij})
    std::vector<double> deviation; // d(h(x), x)
    double id_dist = 0.0;          // max deviation
    double residual = 0.0;         // max_x d(A h(x), h(g x))
    double injectivity_margin = 0.0;  // min over grid-adjacent x, x' of d(h x, h x')
};

ConjugacyField build_conjugacy(const ToralAutomorphism& a, const MapSystem& g,
                               int grid_n, int n_steps);

// Single-point evaluation of the same h.
TorusPoint conjugacy_at(const ToralAutomorphism& a, const MapSystem& g,
                        const TorusPoint& x, int n_steps);

// For each anchor x, solve h(y) = x for y and check that the g-orbit of y
// tracks the A-orbit of x within eps over the window.
struct PersistenceReport {
    std::size_t count = 0;
    std::size_t matched = 0;
    double worst_deviation = 0.0;
    double eps = 0.0;
    bool all_ok = false;
};

PersistenceReport persistence_check(const ToralAutomorphism& a,
                                    const MapSystem& g,
                                    const std::vector<TorusPoint>& anchors,
                                    int n_steps, double eps);

}  // namespace lipexp
