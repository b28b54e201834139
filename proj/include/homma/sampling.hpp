// Deterministic sampling: a low-discrepancy additive-recurrence sequence for
// sample boxes (reproducible verdicts) and a portable uniform wrapper around
// mt19937_64 for the randomized batteries. Double conversion avoids
// std::uniform_real_distribution, whose output is implementation-defined.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace homma {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline double to_unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double first_primes(int i) {
    static constexpr int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    return static_cast<double>(primes[i % 12]);
}

} // namespace detail

// Kronecker/Weyl sequence: dimension j advances by frac(sqrt(p_j)) from a
// seed-derived offset. Quasi-random, deterministic, any dimension.
class QuasiRandomSampler {
public:
    QuasiRandomSampler(int dim, std::uint64_t seed) : dim_(dim), offsets_(dim), alphas_(dim) {
        std::uint64_t s = seed ^ 0xA02BDBF7BB3C0A7ull;
        for (int j = 0; j < dim; ++j) {
            offsets_[j] = detail::to_unit_double(detail::splitmix64(s));
            double ip;
            alphas_[j] = std::modf(std::sqrt(detail::first_primes(j)) + j * 0.003, &ip);
        }
    }

    // next point in [0,1)^dim
    std::vector<double> next() {
        ++index_;
        std::vector<double> p(dim_);
        for (int j = 0; j < dim_; ++j) {
            double ip;
            p[j] = std::modf(offsets_[j] + index_ * alphas_[j], &ip);
        }
        return p;
    }

    std::vector<double> next_in(double lo, double hi) {
        auto p = next();
        for (auto& c : p) c = lo + c * (hi - lo);
        return p;
    }

private:
    int dim_;
    long long index_ = 0;
    std::vector<double> offsets_;
    std::vector<double> alphas_;
};

inline std::vector<std::vector<double>> sample_box(int dim, int count, std::uint64_t seed,
                                                   double lo = 0.5, double hi = 2.0) {
    QuasiRandomSampler s(dim, seed);
    std::vector<std::vector<double>> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) pts.push_back(s.next_in(lo, hi));
    return pts;
}

// Fixed probe set used wherever a verdict needs base points that do not move
// with the user seed (e.g. the intercept-variation probe).
inline std::vector<std::vector<double>> probe_points(int dim, int count = 8) {
    return sample_box(dim, count, 0x9D2C5680u);
}

// Portable pseudo-random draws for the batteries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) {
        return lo + detail::to_unit_double(engine_()) * (hi - lo);
    }

    // uniform over [lo,hi] with |x| >= away_from_zero
    double uniform_away(double lo, double hi, double away_from_zero) {
        for (;;) {
            const double x = uniform(lo, hi);
            if (std::abs(x) >= away_from_zero) return x;
        }
    }

    int index(int count) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(count)); }

    std::vector<double> point(int dim, double lo = 0.5, double hi = 2.0) {
        std::vector<double> p(static_cast<std::size_t>(dim));
        for (auto& c : p) c = uniform(lo, hi);
        return p;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace homma
