#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "appmin/rng.hpp"
#include "appmin/types.hpp"

namespace appmin::sampling {

enum class SamplerKind { pseudo_random, scrambled_halton };

SamplerKind parse_sampler_kind(const std::string& name);
std::string to_string(SamplerKind kind);

/// Standard base-b radical inverse of index (digits of index reversed
/// behind the radix point). Requires base >= 2 and index >= 1.
double radical_inverse(std::uint64_t index, std::uint32_t base);

/// Radical inverse with each base-b digit passed through `perm` first.
double scrambled_radical_inverse(std::uint64_t index, std::uint32_t base,
                                 const std::vector<std::uint32_t>& perm);

/// Seed-derived permutation of {0, ..., base-1} with perm[0] == 0.
/// Applied digit-wise before radical inversion (RR2-style digit scramble).
std::vector<std::uint32_t> scramble_permutation(std::uint32_t base, std::uint64_t seed);

/// First `count` primes in increasing order.
std::vector<std::uint32_t> first_primes(std::size_t count);

/// Inverse of the standard normal CDF. Absolute error below 1e-9 on
/// [1e-12, 1 - 1e-12]; throws for u outside (0, 1).
double inverse_normal_cdf(double u);

struct SampleBatch {
    PointMatrix points;  // d x n, one sample per column
    Point mean_used;
    double variance_used = 0.0;
    // Halton index of the first column; 0 for the pseudo-random kind.
    std::uint64_t first_index = 0;

    Eigen::Index size() const { return points.cols(); }
};

/// Single-owner stream of Gaussian sample points. The Halton kind never
/// hands out the same underlying sequence index twice; indices start at 1.
class SamplerStream {
public:
    SamplerStream(SamplerKind kind, std::uint64_t seed, int dim);

    SamplerKind kind() const { return kind_; }
    std::uint64_t seed() const { return seed_; }
    int dim() const { return dim_; }
    std::uint64_t next_index() const { return next_index_; }

    /// Next d-dimensional point of the scrambled Halton sequence in (0,1)^d.
    /// Advances the index by one.
    Point next_uniform_halton();

    /// Next standard-normal vector (before scaling and shifting).
    Point next_standard_normal();

private:
    SamplerKind kind_;
    std::uint64_t seed_;
    int dim_;
    std::uint64_t next_index_ = 1;
    Rng rng_;
    std::normal_distribution<double> normal_;
    std::vector<std::uint32_t> bases_;
    std::vector<std::vector<std::uint32_t>> perms_;
};

/// n points from N(mean, variance * I_d), drawn from `stream`.
SampleBatch gaussian_batch(SamplerStream& stream, const Point& mean, double variance, int n);

}  // namespace appmin::sampling
