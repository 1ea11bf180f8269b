#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "gsf/graph.hpp"
#include "gsf/noise.hpp"

namespace gsf {

inline constexpr int kDefaultEnumerationCap = 20;

// n-site Pauli operator in the binary symplectic representation; the overall
// sign is not tracked (it never enters the fidelity sum).
// Site decode: (x,z) = (0,0) I, (1,0) X, (1,1) Y, (0,1) Z.
struct PauliString {
    std::vector<std::uint8_t> xbits;
    std::vector<std::uint8_t> zbits;

    int n() const { return static_cast<int>(xbits.size()); }
    char site(int i) const;  // 'I', 'X', 'Y' or 'Z'
};

struct WeightTriple {
    int mx = 0;
    int my = 0;
    int mz = 0;
    auto operator<=>(const WeightTriple&) const = default;
};

// N_F: number of stabilizers per (mx,my,mz) Pauli content.
class WeightHistogram {
  public:
    explicit WeightHistogram(int n) : n_(n) {}

    void add(const WeightTriple& t, std::uint64_t count = 1) { bins_[t] += count; }
    std::uint64_t count(const WeightTriple& t) const;
    const std::map<WeightTriple, std::uint64_t>& bins() const { return bins_; }

    int n() const { return n_; }
    std::uint64_t total() const;
    bool consistent() const;  // total == 2^n

    // "mx,my,mz,count" rows
    void write_csv(std::ostream& out) const;
    static WeightHistogram read_csv(std::istream& in, int n);

  private:
    int n_;
    std::map<WeightTriple, std::uint64_t> bins_;
};

// The stabilizer S_ell = prod_i g_i^{ell_i} with g_i = X_i prod_{j in N(i)} Z_j:
// xbits_i = ell_i, zbits_j = parity of sum_{i in N(j)} ell_i.
PauliString stabilizer_from_bits(const Graph& g, std::span<const std::uint8_t> ell);

WeightTriple weight_of(const PauliString& ps);

// Histogram over all 2^n stabilizers; Gray-code enumeration with incremental
// updates, O(2^n * max_degree). Throws when g.n() exceeds the cap.
WeightHistogram enumerate_weights(const Graph& g, int cap = kDefaultEnumerationCap);

// Exact fidelity sum over the weight histogram, accumulated in log space.
double fidelity_exact(const Graph& g, const NoiseModel& noise,
                      int cap = kDefaultEnumerationCap);
double log_fidelity_exact(const Graph& g, const NoiseModel& noise,
                          int cap = kDefaultEnumerationCap);

// Evaluates the fidelity sum for a given histogram directly in probability
// space (used by fidelity_exact; also the fallback when the spin mapping is
// undefined, e.g. p = 0).
double log_fidelity_from_weights(const WeightHistogram& hist, const NoiseModel& noise);

// Closed form for the complete graph under depolarizing noise:
// F = [(1-2p/3)^n + (2p/3)^n + (1-4p/3)^n] / 2.
double fidelity_complete_closed_form(int n, double p);
double log_fidelity_complete_closed_form(int n, double p);

}  // namespace gsf
