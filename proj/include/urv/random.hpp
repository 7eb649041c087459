#ifndef URV_RANDOM_HPP
#define URV_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <numbers>

#include "matrix.hpp"
#include "qr.hpp"

namespace urv {

//
// (seed, stream) names one reproducible sequence. Distinct streams under the
// same seed are independent draws within one experiment.
//
struct RngSeed
{
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

namespace detail {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t golden_gamma = 0x9e3779b97f4a7c15ULL;

} // namespace detail

//
// Counter-based generator: word i of stream (seed, stream) is
//
//   mix64(key + (i + 1) * golden_gamma),  key = mix64(seed ^ mix64(stream + golden_gamma))
//
// i.e. a SplitMix64 sequence whose starting state is derived from the pair.
// Standard normal number i uses words 2i and 2i+1 through the Box-Muller
// cosine branch:
//
//   u1 = ((w0 >> 11) + 1) * 2^-53   in (0, 1]
//   u2 =  (w1 >> 11)      * 2^-53   in [0, 1)
//   z  = sqrt(-2 ln u1) * cos(2 pi u2)
//
// Because every value is a pure function of its index, any prefix of a draw
// equals a shorter draw of the same stream.
//
class GaussianStream
{
public:
    explicit GaussianStream(RngSeed s)
        : key_(detail::mix64(s.seed ^ detail::mix64(s.stream + detail::golden_gamma)))
    {
    }

    std::uint64_t word(std::uint64_t i) const { return detail::mix64(key_ + (i + 1) * detail::golden_gamma); }

    double normal(std::uint64_t i) const
    {
        constexpr double two53 = 0x1.0p-53;
        const double u1 = static_cast<double>((word(2 * i) >> 11) + 1) * two53;
        const double u2 = static_cast<double>(word(2 * i + 1) >> 11) * two53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t key_;
};

// Stream tag derived from a parent seed, for sub-draws inside one generator.
inline RngSeed derive(RngSeed s, std::uint64_t tag)
{
    return {s.seed, detail::mix64(s.stream ^ detail::mix64(tag + detail::golden_gamma))};
}

// i.i.d. standard normal entries, filled in column-major order: entry (i, j)
// is normal number i + j*m of the stream, so G(:, 0:l) of an m x n draw is
// bit-identical to an m x l draw under the same seed.
inline Matrix gaussian_matrix(Index m, Index n, RngSeed seed)
{
    detail::require(m >= 1 && n >= 1, "gaussian_matrix: dimensions must be positive");
    GaussianStream g(seed);
    Matrix out(m, n);
    double* p = out.data();
    for (Index e = 0; e < m * n; ++e) {
        p[e] = g.normal(static_cast<std::uint64_t>(e));
    }
    return out;
}

// Haar-distributed orthogonal matrix: Q of the Gaussian's QR with diag(R) >= 0.
inline Matrix haar_orthogonal(Index n, RngSeed seed)
{
    detail::require(n >= 1, "haar_orthogonal: n must be positive");
    return householder_qr(gaussian_matrix(n, n, seed)).q;
}

} // namespace urv

#endif // URV_RANDOM_HPP
