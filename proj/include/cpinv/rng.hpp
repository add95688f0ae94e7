#ifndef CPINV_RNG_HPP
#define CPINV_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace cpinv {

/**
 * Counter-based generator: the k-th draw of stream s under seed is a fixed
 * mixing function of (seed, s, k). Streams never share state, so each worker
 * owns one and results do not depend on scheduling.
 */
class CounterRng
{
    public:
        using result_type = std::uint64_t;

        CounterRng(std::uint64_t seed, std::uint64_t stream)
            : key_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ULL)))
        {
        }

        static constexpr result_type min() { return 0; }
        static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

        result_type operator()()
        {
            return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL);
        }

        /// Uniform on [0, 1) with 53 random bits.
        double uniform()
        {
            return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
        }

        /// Standard normal via Box-Muller; spare value is cached.
        double normal()
        {
            if (has_spare_) {
                has_spare_ = false;
                return spare_;
            }
            double u1 = uniform();
            while (u1 <= 0.0)
                u1 = uniform();
            const double u2 = uniform();
            const double r = std::sqrt(-2.0 * std::log(u1));
            const double theta = 2.0 * std::numbers::pi * u2;
            spare_ = r * std::sin(theta);
            has_spare_ = true;
            return r * std::cos(theta);
        }

        std::uint64_t counter() const { return counter_; }

    private:
        static constexpr std::uint64_t mix(std::uint64_t z)
        {
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }

        std::uint64_t key_;
        std::uint64_t counter_ = 0;
        double spare_ = 0.0;
        bool has_spare_ = false;
};

} // namespace cpinv

#endif
