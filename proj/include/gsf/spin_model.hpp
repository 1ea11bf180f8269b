#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gsf/graph.hpp"
#include "gsf/noise.hpp"
#include "gsf/pauli.hpp"

namespace gsf {

// Classical +-1 spin configuration; spin i encodes generator bit ell_i via
// s_i = 2*ell_i - 1.
struct SpinConfig {
    std::vector<std::int8_t> spins;

    int n() const { return static_cast<int>(spins.size()); }
    static SpinConfig all_down(int n) { return {std::vector<std::int8_t>(n, -1)}; }
    static SpinConfig from_bits(std::span<const std::uint8_t> ell);
};

// Per-configuration counts of X/Y/Z/I sites; mx+my+mz+mi == n.
struct TermCounts {
    int mx = 0;
    int my = 0;
    int mz = 0;
    int mi = 0;
};

// Parameters of the mapped spin system. beta*j_mu = ln((1-p)/p_mu) with the
// normalization jx = 1 (except at the infinite-temperature point, where all
// couplings are degenerate and beta = 0 with j = 1 by convention).
struct CouplingParams {
    double beta = 0.0;
    double jx = 1.0;
    double jy = 1.0;
    double jz = 1.0;
    double c = 0.0;                // energy offset -(n/beta) ln(1-p); +inf at beta = 0
    double log_one_minus_p = 0.0;  // beta*c == -n * log_one_minus_p
    int n = 0;
    bool ferromagnetic = true;  // all beta*j_mu > 0

    bool uniform_couplings(double tol = 1e-12) const;
};

// Throws when any p_mu = 0 or p in {0,1} (infinite/zero-temperature mapping),
// and when the jx = 1 normalization is degenerate (p_x = 1-p with unequal
// ratios).
CouplingParams coupling_from_noise(const NoiseModel& noise, int n);

// beta(p) = ln(3(1-p)/p) for depolarizing noise, and its inverse.
double depolarizing_beta(double p);
double depolarizing_p_from_beta(double beta);

// Counts of X/Y/Z/I sites for a spin configuration: site i contributes X/Y
// when s_i = +1 (even/odd number of up neighbors) and I/Z when s_i = -1.
TermCounts term_counts(const Graph& g, const SpinConfig& cfg);

// jx*mx + jy*my + jz*mz for the configuration.
double energy(const Graph& g, const SpinConfig& cfg, const CouplingParams& cp);

// energy(after flipping s_i) - energy(before), touching only i and N(i).
double local_energy_delta(const Graph& g, const SpinConfig& cfg, int site,
                          const CouplingParams& cp);

// Spin-route histogram: term_counts over all 2^n configurations (Gray-code
// order with incremental updates). Must equal enumerate_weights(g) exactly.
WeightHistogram enumerate_term_histogram(const Graph& g, int cap = kDefaultEnumerationCap);

// Partition-function evaluation of the fidelity from a weight histogram via
// the coupling mapping; falls back to the direct probability form where the
// mapping is undefined. With require_consistent, rejects histograms whose
// total is not 2^n.
double fidelity_from_histogram(const WeightHistogram& hist, const NoiseModel& noise,
                               bool require_consistent = true);
double log_fidelity_from_histogram(const WeightHistogram& hist, const NoiseModel& noise,
                                   bool require_consistent = true);

// <H> and Var(H) of the mapped system at the histogram's couplings, computed
// in log space (exact thermal moments for enumerable graphs).
struct ThermalMoments {
    double mean_energy = 0.0;
    double var_energy = 0.0;
};
ThermalMoments histogram_thermal_moments(const WeightHistogram& hist,
                                         const CouplingParams& cp);

}  // namespace gsf
