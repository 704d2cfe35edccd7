#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include "polyscatter/types.hpp"

namespace testing {

using polyscatter::Complex;

inline double rel_err(Complex got, Complex want) { return std::abs(got - want) / std::abs(want); }

/// Seeded generator for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
    Complex cnormal() { return {normal(), normal()}; }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
    /// Point in the closed upper half-plane with |z| in [lo, hi].
    Complex upper(double lo, double hi) { return std::polar(log_uniform(lo, hi), uniform(0.0, polyscatter::kPi)); }

private:
    std::mt19937_64 eng_;
};

}  // namespace testing
