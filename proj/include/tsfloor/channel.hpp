#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tsfloor/util.hpp"

namespace tsfloor {

/// AWGN/BPSK channel description: L^ch = 2 y / sigma^2 with
/// sigma^2 = 1 / (2 R 10^(EbN0/10)).
struct ChannelSpec {
    double ebn0_db = 0.0;
    double rate = 0.5;

    double sigma2() const { return 1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0)); }
    double sigma() const { return std::sqrt(sigma2()); }
    double llr_scale() const { return 2.0 / sigma2(); }
    double llr_mean() const { return 2.0 / sigma2(); }      // all-zero codeword, +1 symbols
    double llr_variance() const { return 4.0 / sigma2(); }

    void validate() const { require(sigma2() > 0.0, "channel: sigma^2 must be positive"); }
};

/// Counter-based generator: the k-th output is a pure function of (seed, k),
/// so parallel workers drawing disjoint counter ranges reproduce the exact
/// stream of a serial run.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : base_(seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1))) {}

    std::uint64_t next_u64() { return mix(base_ + 0x9E3779B97F4A7C15ULL * ++ctr_); }

    double next_unit() {  // (0, 1]
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal pairs via Box-Muller.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_unit();
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t base_;
    std::uint64_t ctr_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Channel LLRs for the all-zero codeword (+1 symbols): y = 1 + n.
inline void draw_channel_llrs(const ChannelSpec& ch, CounterRng& rng, std::vector<double>& out) {
    const double sigma = ch.sigma();
    const double scale = ch.llr_scale();
    for (double& x : out) x = scale * (1.0 + sigma * rng.next_normal());
}

}  // namespace tsfloor
