#include "gsf/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace gsf {

double log_sum_exp(std::span<const double> logs) {
    double mx = kNegInf;
    for (double l : logs) mx = std::max(mx, l);
    if (mx == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double l : logs) {
        if (l == kNegInf) continue;
        acc += std::exp(l - mx);
    }
    return mx + std::log(acc);
}

SignedLog signed_log_sum(std::span<const SignedLog> terms) {
    double mx = kNegInf;
    for (const auto& t : terms)
        if (t.sign != 0) mx = std::max(mx, t.log_abs);
    if (mx == kNegInf) return {};
    double acc = 0.0;
    for (const auto& t : terms) {
        if (t.sign == 0) continue;
        acc += static_cast<double>(t.sign) * std::exp(t.log_abs - mx);
    }
    if (acc == 0.0) return {};
    return {acc > 0 ? 1 : -1, mx + std::log(std::abs(acc))};
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                       std::uint64_t c) {
    std::uint64_t s = seed;
    std::uint64_t h = splitmix64(s);
    s ^= a + 0x9e3779b97f4a7c15ULL;
    h ^= splitmix64(s);
    s ^= b + 0xd1b54a32d192ed03ULL;
    h ^= splitmix64(s);
    s ^= c + 0x2545f4914f6cdd1dULL;
    h ^= splitmix64(s);
    return h;
}

Rng::Rng(std::uint64_t seed) {
    // expand the seed so nearby seeds give unrelated streams
    std::uint64_t s = seed;
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s)),
                      static_cast<std::uint32_t>(splitmix64(s))};
    eng_.seed(seq);
}

std::uint32_t Rng::next_below(std::uint32_t n) {
    std::uint64_t x = eng_();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
        std::uint64_t t = (0ULL - n) % n;
        while (lo < t) {
            x = eng_();
            m = static_cast<__uint128_t>(x) * n;
            lo = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint32_t>(m >> 64);
}

}  // namespace gsf
