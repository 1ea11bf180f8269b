#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>

namespace gsf {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(sum_i exp(logs[i])), stable; -inf entries are skipped.
double log_sum_exp(std::span<const double> logs);

// A real number carried as sign * exp(log_abs). sign == 0 encodes exact zero.
struct SignedLog {
    int sign = 0;
    double log_abs = kNegInf;
};

// Sum of signed-log terms, returned in the same representation.
SignedLog signed_log_sum(std::span<const SignedLog> terms);

// SplitMix64 step.
std::uint64_t splitmix64(std::uint64_t& state);

// Derives an independent 64-bit seed from a base seed and up to three stream
// labels, so that parallel layout cannot change which chain sees which stream.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0);

// mt19937_64 wrapper with portable uniform draws (the distributions in
// <random> are implementation-defined, which would break byte-identical
// reruns across standard libraries).
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0,1), 53-bit resolution
    double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform integer in [0,n), Lemire's multiply-shift with rejection
    std::uint32_t next_below(std::uint32_t n);

  private:
    std::mt19937_64 eng_;
};

}  // namespace gsf
