#ifndef SGN_RNG_HPP_
#define SGN_RNG_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>

#include <Eigen/Core>

namespace sgn {

/// SplitMix64 finalizer. Used to expand seeds and to derive independent
/// stream seeds from a master seed.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
    return z ^ (z >> 31);
}

constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
    state += UINT64_C(0x9E3779B97F4A7C15);
    return splitmix64_mix(state);
}

/// Derives a stream seed from a master seed and a path of integer keys,
/// e.g. derive_seed(master, {cell, replication, stream}). Different paths
/// give statistically independent seeds; the result depends only on the
/// inputs, never on call order.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = splitmix64_mix(master ^ UINT64_C(0x6A09E667F3BCC909));
    std::uint64_t depth = 0;
    for (std::uint64_t key : path) {
        ++depth;
        h = splitmix64_mix(h ^ splitmix64_mix(key + depth * UINT64_C(0x9E3779B97F4A7C15)));
    }
    return h;
}

/// xoshiro256** generator. The whole state is four words so it can be
/// checkpointed and restored exactly.
class Rng {
public:
    using result_type = std::uint64_t;
    using State = std::array<std::uint64_t, 4>;

    explicit Rng(std::uint64_t seed = 0) noexcept { reseed(seed); }

    static Rng from_state(const State& s) noexcept {
        Rng r;
        r.s_ = s;
        return r;
    }

    void reseed(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open0() noexcept { return 1.0 - uniform(); }

    /// Standard normal via Box-Muller. Consumes exactly two words per call.
    double normal() noexcept {
        const double u1 = uniform_open0();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    const State& state() const noexcept { return s_; }

    friend bool operator==(const Rng& a, const Rng& b) noexcept { return a.s_ == b.s_; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    State s_{};
};

/// Fills a vector with i.i.d. N(0,1) draws. `v` must already be sized.
template <class Derived>
void fill_normal(Rng& rng, Eigen::MatrixBase<Derived>& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
}

/// Uniform draw on the unit sphere of R^dim.
template <int Dim>
Eigen::Matrix<double, Dim, 1> unit_sphere(Rng& rng, Eigen::Index dim = Dim) {
    Eigen::Matrix<double, Dim, 1> u(dim);
    double norm = 0.0;
    do {
        fill_normal(rng, u);
        norm = u.norm();
    } while (norm < 1e-300);
    return u / norm;
}

}  // namespace sgn

#endif  // SGN_RNG_HPP_
