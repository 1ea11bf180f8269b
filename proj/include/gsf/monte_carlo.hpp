#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "gsf/graph.hpp"
#include "gsf/noise.hpp"
#include "gsf/spin_model.hpp"

namespace gsf {

struct MCConfig {
    long sweeps = 100000;  // measurement sweeps (one sweep = n proposed flips)
    long burn_in = 20000;  // discarded sweeps before the first measurement
    long thin = 2;         // sweeps between energy measurements
    int bins = 32;         // error-analysis bins
    std::uint64_t seed = 1;

    void validate() const;
};

struct ObservableEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long n_samples = 0;
};

struct ChainResult {
    std::vector<double> energy_samples;
    double acceptance_rate = 0.0;
    SpinConfig final_state;
};

// Metropolis single-spin-flip chain. Proposals pick a uniform site and accept
// with min(1, e^{-beta dE}) using the local energy delta; the running energy
// is re-synced against a full recompute every 1000 sweeps (drift beyond 1e-8
// throws). Initial state defaults to all spins -1. `stream` selects an
// independent RNG stream for the same seed; `on_sample` (when set) receives
// the up-spin indicator bits at every measurement.
ChainResult run_chain(const Graph& g, const CouplingParams& cp, const MCConfig& mc,
                      std::uint64_t stream = 0, const SpinConfig* initial = nullptr,
                      const std::function<void(std::span<const std::uint8_t>)>& on_sample = {});

struct MCObservables {
    ObservableEstimate energy;
    ObservableEstimate specific_heat;  // beta^2 Var(E), from per-bin fluctuations
};

MCObservables estimate_observables(std::span<const double> samples, double beta, int bins);

// Equilibrated measurement at one temperature. A cold-start (all -1) chain
// doubles its burn-in geometrically until two half-series agree on <E> within
// 2 sigma; a hot-start (random) companion runs the same protocol. Agreeing
// chains are pooled; disagreement selects the hot branch and raises the
// metastability flag.
struct EquilibratedPoint {
    double beta = 0.0;
    ObservableEstimate energy;
    ObservableEstimate specific_heat;
    bool equilibrated = true;  // at least one protocol reached half-chain agreement
    bool metastable = false;   // cold/hot branches inconsistent
    double acceptance_rate = 0.0;
    std::vector<double> samples;  // samples behind the estimate (kept on request)
};

EquilibratedPoint estimate_at_beta(const Graph& g, double beta, double jx, double jy,
                                   double jz, const MCConfig& mc,
                                   bool keep_samples = false);

struct MCIntegrationRow {
    double p = 0.0;
    double beta = 0.0;
    double log_fidelity = 0.0;
    double err_log_fidelity = 0.0;
    ObservableEstimate energy;         // total (not per qubit)
    ObservableEstimate specific_heat;  // total
    bool metastable = false;
    bool equilibrated = true;
    std::vector<double> samples;
};

// Fidelity via thermodynamic integration anchored at beta = 0 where
// Z' = 2^n exactly: ln Z'(b) = n ln 2 - int_0^b <E> dbeta, and
// ln F = n ln(1-p) + ln Z'(beta(p)). The beta grid starts from the mapped
// noise points and is refined (interval bisection) until the trapezoid
// Richardson error estimate drops below 1e-3 * n or the MC noise floor.
// Points are grouped by coupling direction; each group integrates along its
// own ray. Rows are returned in input order.
std::vector<MCIntegrationRow> fidelity_by_integration(const Graph& g,
                                                      std::span<const NoiseModel> noise_points,
                                                      const MCConfig& mc,
                                                      bool keep_samples = false);

}  // namespace gsf
