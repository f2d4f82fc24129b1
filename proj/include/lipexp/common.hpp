#pragma once

#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace lipexp {

// Raised when an algorithm's stated hypotheses are not met by the inputs
// (as opposed to a usage error like a bad flag value).
struct precondition_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

// Row-major 2x2 matrix, enough linear algebra for the planar systems here.
struct Mat2 {
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;

    Vec2 apply(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }

    Mat2 mul(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }

    double det() const { return a * d - b * c; }

    // Largest singular value.  For M = [[a,b],[c,d]] the singular values
    // satisfy s^2 = (t +- sqrt(t^2 - 4 det^2)) / 2 with t = sum of squares.
    double op_norm() const {
        double t = a * a + b * b + c * c + d * d;
        double disc = t * t - 4.0 * det() * det();
        if (disc < 0.0) disc = 0.0;
        return std::sqrt(0.5 * (t + std::sqrt(disc)));
    }
};

inline Mat2 mat2_identity() { return {1.0, 0.0, 0.0, 1.0}; }

// Wrap to [0,1).  Inputs are never far outside the unit interval, so the
// double fmod is exact enough; the second fixup handles -0 and 1-ulp cases.
inline double wrap01(double v) {
    double r = v - std::floor(v);
    if (r >= 1.0) r -= 1.0;
    if (r < 0.0) r += 1.0;
    return r;
}

// Signed representative in (-1/2, 1/2].
inline double wrap_half(double v) {
    return v - std::ceil(v - 0.5);
}

// C^1 ramp: 0 for t<=0, 1 for t>=1, slope 0 at both ends.
inline double smoothstep(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * (3.0 - 2.0 * t);
}

inline double smoothstep_deriv(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 6.0 * t * (1.0 - t);
}

// Deterministic counter-based generator (splitmix64 of a seed/counter pair).
// Draw k from stream (seed, index) and you get the same value on every run,
// every platform, regardless of how many threads consumed the stream.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(seed ^ (stream * 0x9e3779b97f4a7c15ull)) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53 random bits.
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n).  Rejection keeps it unbiased.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("below(0)");
        std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
        std::uint64_t v;
        do { v = next(); } while (v >= limit);
        return v % n;
    }

  private:
    std::uint64_t state_;
};

// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::size_t worker_count();

// Splits [0,n) into per-worker chunks, folds each chunk, merges chunk
// results in chunk order.  Reductions used in this project are max/min
// style, so the result is independent of the worker count.
template <typename Acc, typename Fold, typename Merge>
Acc parallel_reduce(std::size_t n, Acc init, Fold fold, Merge merge) {
    std::size_t workers = worker_count();
    if (n == 0) return init;
    if (workers <= 1 || n < 4096) {
        Acc acc = init;
        for (std::size_t i = 0; i < n; ++i) fold(acc, i);
        return acc;
    }
    if (workers > n) workers = n;
    std::vector<Acc> parts(workers, init);
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            std::size_t lo = w * chunk;
            std::size_t hi = std::min(n, lo + chunk);
            try {
                for (std::size_t i = lo; i < hi; ++i) fold(parts[w], i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    Acc acc = init;
    for (auto& p : parts) merge(acc, p);
    return acc;
}

}  // namespace lipexp
