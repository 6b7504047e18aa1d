#include "appmin/sampling.hpp"

#include <cmath>
#include <numbers>

namespace appmin::sampling {

SamplerKind parse_sampler_kind(const std::string& name)
{
    if (name == "pseudo_random")
        return SamplerKind::pseudo_random;
    if (name == "scrambled_halton" || name == "halton")
        return SamplerKind::scrambled_halton;
    throw Error("unknown sampler '" + name + "'");
}

std::string to_string(SamplerKind kind)
{
    return kind == SamplerKind::pseudo_random ? "pseudo_random" : "scrambled_halton";
}

double radical_inverse(std::uint64_t index, std::uint32_t base)
{
    if (base < 2)
        throw Error("radical_inverse: base must be at least 2");
    const double inv_base = 1.0 / base;
    double scale = inv_base;
    double result = 0.0;
    while (index > 0) {
        result += static_cast<double>(index % base) * scale;
        index /= base;
        scale *= inv_base;
    }
    return result;
}

double scrambled_radical_inverse(std::uint64_t index, std::uint32_t base,
                                 const std::vector<std::uint32_t>& perm)
{
    if (base < 2)
        throw Error("radical_inverse: base must be at least 2");
    if (perm.size() != base)
        throw Error("digit permutation size does not match base");
    const double inv_base = 1.0 / base;
    double scale = inv_base;
    double result = 0.0;
    while (index > 0) {
        result += static_cast<double>(perm[index % base]) * scale;
        index /= base;
        scale *= inv_base;
    }
    return result;
}

std::vector<std::uint32_t> scramble_permutation(std::uint32_t base, std::uint64_t seed)
{
    std::vector<std::uint32_t> perm(base);
    for (std::uint32_t i = 0; i < base; ++i)
        perm[i] = i;
    // Fisher-Yates over {1, ..., base-1}; written out so the result does not
    // depend on the standard library's shuffle.
    Rng rng(mix_seed(seed, mix_seed(base, stream_tag::halton_scramble)));
    for (std::uint32_t i = base - 1; i >= 2; --i) {
        const std::uint32_t j = 1 + static_cast<std::uint32_t>(rng() % i);
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

std::vector<std::uint32_t> first_primes(std::size_t count)
{
    std::vector<std::uint32_t> primes;
    primes.reserve(count);
    for (std::uint32_t c = 2; primes.size() < count; ++c) {
        bool prime = true;
        for (std::uint32_t p : primes) {
            if (p * p > c)
                break;
            if (c % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime)
            primes.push_back(c);
    }
    return primes;
}

double inverse_normal_cdf(double u)
{
    if (!(u > 0.0 && u < 1.0))
        throw Error("inverse_normal_cdf: argument must lie in (0, 1)");

    // Acklam's rational approximation (relative error ~1e-9) followed by one
    // Halley step against erfc, which brings it to near machine precision.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (u < p_low) {
        const double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
            / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    else if (u <= 1.0 - p_low) {
        const double q = u - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q
            / (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    else {
        const double q = std::sqrt(-2.0 * std::log1p(-u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5])
            / ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // Refine on the tail that is closer to zero so that the CDF residual is
    // computed without cancellation.
    const double sqrt2pi = std::sqrt(2.0 * std::numbers::pi);
    if (u <= 0.5) {
        const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - u;
        const double step = e * sqrt2pi * std::exp(0.5 * x * x);
        x -= step / (1.0 + 0.5 * x * step);
    }
    else {
        const double e = 0.5 * std::erfc(x / std::numbers::sqrt2) - (1.0 - u);
        const double step = -e * sqrt2pi * std::exp(0.5 * x * x);
        x -= step / (1.0 + 0.5 * x * step);
    }
    return x;
}

SamplerStream::SamplerStream(SamplerKind kind, std::uint64_t seed, int dim)
    : kind_(kind), seed_(seed), dim_(dim), rng_(mix_seed(seed, stream_tag::sampler))
{
    if (dim < 1)
        throw Error("sampler dimension must be positive");
    if (kind_ == SamplerKind::scrambled_halton) {
        bases_ = first_primes(static_cast<std::size_t>(dim));
        perms_.reserve(bases_.size());
        for (std::uint32_t base : bases_)
            perms_.push_back(scramble_permutation(base, seed));
    }
}

Point SamplerStream::next_uniform_halton()
{
    if (kind_ != SamplerKind::scrambled_halton)
        throw Error("stream is not a Halton stream");
    Point u(dim_);
    const std::uint64_t index = next_index_++;
    for (int j = 0; j < dim_; ++j)
        u[j] = scrambled_radical_inverse(index, bases_[j], perms_[j]);
    return u;
}

Point SamplerStream::next_standard_normal()
{
    Point z(dim_);
    if (kind_ == SamplerKind::pseudo_random) {
        for (int j = 0; j < dim_; ++j)
            z[j] = normal_(rng_);
        ++next_index_;
    }
    else {
        const Point u = next_uniform_halton();
        for (int j = 0; j < dim_; ++j)
            z[j] = inverse_normal_cdf(u[j]);
    }
    return z;
}

SampleBatch gaussian_batch(SamplerStream& stream, const Point& mean, double variance, int n)
{
    if (!(variance > 0.0) || !std::isfinite(variance))
        throw Error("gaussian_batch: variance must be positive and finite");
    if (n < 1)
        throw Error("gaussian_batch: n must be at least 1");
    if (mean.size() != stream.dim())
        throw Error("gaussian_batch: mean dimension does not match stream");

    SampleBatch batch;
    batch.mean_used = mean;
    batch.variance_used = variance;
    batch.first_index = stream.kind() == SamplerKind::scrambled_halton ? stream.next_index() : 0;
    batch.points.resize(stream.dim(), n);

    const double sigma = std::sqrt(variance);
    for (int i = 0; i < n; ++i)
        batch.points.col(i) = mean + sigma * stream.next_standard_normal();
    return batch;
}

}  // namespace appmin::sampling
