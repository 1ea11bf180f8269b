#include "gsf/spin_model.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gsf/numeric.hpp"

namespace gsf {

SpinConfig SpinConfig::from_bits(std::span<const std::uint8_t> ell) {
    SpinConfig cfg;
    cfg.spins.reserve(ell.size());
    for (auto b : ell) cfg.spins.push_back(b ? +1 : -1);
    return cfg;
}

bool CouplingParams::uniform_couplings(double tol) const {
    return std::abs(jx - jy) <= tol && std::abs(jy - jz) <= tol;
}

double depolarizing_beta(double p) {
    if (p <= 0.0 || p > 0.75)
        throw std::invalid_argument("depolarizing_beta: p must be in (0, 3/4]");
    return std::log(3.0 * (1.0 - p) / p);
}

double depolarizing_p_from_beta(double beta) {
    return 3.0 / (std::exp(beta) + 3.0);
}

CouplingParams coupling_from_noise(const NoiseModel& noise, int n) {
    const double p = noise.p();
    if (noise.px <= 0.0 || noise.py <= 0.0 || noise.pz <= 0.0 || p >= 1.0)
        throw std::invalid_argument(
            "coupling_from_noise: mapping undefined at infinite/zero temperature "
            "(requires 0 < p_mu and p < 1); use an exact solver instead");

    const double bjx = std::log((1.0 - p) / noise.px);
    const double bjy = std::log((1.0 - p) / noise.py);
    const double bjz = std::log((1.0 - p) / noise.pz);

    CouplingParams cp;
    cp.n = n;
    cp.log_one_minus_p = std::log1p(-p);
    cp.ferromagnetic = bjx > 0 && bjy > 0 && bjz > 0;

    constexpr double eps = 1e-14;
    if (std::abs(bjx) <= eps) {
        // p_x = 1-p: the jx = 1 normalization cannot fix beta
        if (std::abs(bjy) > eps || std::abs(bjz) > eps)
            throw std::invalid_argument(
                "coupling_from_noise: ln((1-p)/p_x) = 0 while other couplings are "
                "nonzero; the jx = 1 normalization is degenerate for this channel");
        // infinite-temperature point (depolarizing p = 3/4)
        cp.beta = 0.0;
        cp.jx = cp.jy = cp.jz = 1.0;
        cp.c = std::numeric_limits<double>::infinity();
        return cp;
    }
    cp.beta = bjx;
    cp.jx = 1.0;
    cp.jy = bjy / cp.beta;
    cp.jz = bjz / cp.beta;
    cp.c = -(static_cast<double>(n) / cp.beta) * cp.log_one_minus_p;
    return cp;
}

namespace {

// Site classes, indexed by (u << 1) | parity_of_up_neighbors:
// 00 -> I, 01 -> Z, 10 -> X, 11 -> Y.
inline int site_class(bool up, bool odd_up_neighbors) {
    return (static_cast<int>(up) << 1) | static_cast<int>(odd_up_neighbors);
}

inline bool odd_up_neighbors(const Graph& g, const SpinConfig& cfg, int site) {
    int ups = 0;
    for (int j : g.neighbors(site)) ups += cfg.spins[j] > 0;
    return ups & 1;
}

void check_size(const Graph& g, const SpinConfig& cfg, const char* who) {
    if (cfg.n() != g.n())
        throw std::invalid_argument(std::string(who) + ": configuration size " +
                                    std::to_string(cfg.n()) + " != graph size " +
                                    std::to_string(g.n()));
}

}  // namespace

TermCounts term_counts(const Graph& g, const SpinConfig& cfg) {
    check_size(g, cfg, "term_counts");
    TermCounts tc;
    for (int i = 0; i < g.n(); ++i) {
        switch (site_class(cfg.spins[i] > 0, odd_up_neighbors(g, cfg, i))) {
            case 0: ++tc.mi; break;
            case 1: ++tc.mz; break;
            case 2: ++tc.mx; break;
            case 3: ++tc.my; break;
        }
    }
    return tc;
}

double energy(const Graph& g, const SpinConfig& cfg, const CouplingParams& cp) {
    const TermCounts tc = term_counts(g, cfg);
    return cp.jx * tc.mx + cp.jy * tc.my + cp.jz * tc.mz;
}

double local_energy_delta(const Graph& g, const SpinConfig& cfg, int site,
                          const CouplingParams& cp) {
    check_size(g, cfg, "local_energy_delta");
    if (site < 0 || site >= g.n())
        throw std::invalid_argument("local_energy_delta: site " + std::to_string(site) +
                                    " out of range");
    const double value[4] = {0.0, cp.jz, cp.jx, cp.jy};

    // site's own term: u flips, its neighbor parity does not
    const bool up = cfg.spins[site] > 0;
    const bool par = odd_up_neighbors(g, cfg, site);
    double delta = value[site_class(!up, par)] - value[site_class(up, par)];

    // each neighbor's term: its up-neighbor parity flips
    for (int j : g.neighbors(site)) {
        const bool upj = cfg.spins[j] > 0;
        const bool parj = odd_up_neighbors(g, cfg, j);
        delta += value[site_class(upj, !parj)] - value[site_class(upj, parj)];
    }
    return delta;
}

WeightHistogram enumerate_term_histogram(const Graph& g, int cap) {
    const int n = g.n();
    if (n > cap)
        throw std::invalid_argument("enumerate_term_histogram: n=" + std::to_string(n) +
                                    " exceeds the enumeration cap " + std::to_string(cap) +
                                    "; use the Monte Carlo solver for large graphs");

    WeightHistogram hist(n);
    std::vector<std::uint8_t> up(n, 0), par(n, 0);
    int counts[4] = {n, 0, 0, 0};  // per-class site counts; all-down is all-I

    auto reclass = [&](int s, std::uint8_t new_up, std::uint8_t new_par) {
        --counts[(up[s] << 1) | par[s]];
        up[s] = new_up;
        par[s] = new_par;
        ++counts[(up[s] << 1) | par[s]];
    };

    hist.add({0, 0, 0});  // all spins down: I on every site
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < total; ++k) {
        const int i = std::countr_zero(k);  // Gray-code step flips spin i
        reclass(i, up[i] ^ 1, par[i]);
        for (int j : g.neighbors(i)) reclass(j, up[j], par[j] ^ 1);
        hist.add({counts[2], counts[3], counts[1]});
    }
    return hist;
}

namespace {

void check_histogram(const WeightHistogram& hist, bool require_consistent) {
    if (require_consistent && !hist.consistent())
        throw std::invalid_argument(
            "weight histogram inconsistent: total count " + std::to_string(hist.total()) +
            " != 2^" + std::to_string(hist.n()));
}

bool mapping_defined(const NoiseModel& noise) {
    const double p = noise.p();
    return noise.px > 0 && noise.py > 0 && noise.pz > 0 && p < 1.0;
}

}  // namespace

double log_fidelity_from_histogram(const WeightHistogram& hist, const NoiseModel& noise,
                                   bool require_consistent) {
    check_histogram(hist, require_consistent);
    if (!mapping_defined(noise))
        return log_fidelity_from_weights(hist, noise);

    // Z = sum_bins e^{-beta(E+c)} N_F with e^{-beta c} = (1-p)^n
    const CouplingParams cp = coupling_from_noise(noise, hist.n());
    std::vector<double> terms;
    terms.reserve(hist.bins().size());
    for (const auto& [t, c] : hist.bins()) {
        const double e = cp.jx * t.mx + cp.jy * t.my + cp.jz * t.mz;
        terms.push_back(-cp.beta * e + std::log(static_cast<double>(c)));
    }
    return hist.n() * cp.log_one_minus_p + log_sum_exp(terms);
}

double fidelity_from_histogram(const WeightHistogram& hist, const NoiseModel& noise,
                               bool require_consistent) {
    return std::exp(log_fidelity_from_histogram(hist, noise, require_consistent));
}

ThermalMoments histogram_thermal_moments(const WeightHistogram& hist,
                                         const CouplingParams& cp) {
    std::vector<double> logs;
    std::vector<double> energies;
    logs.reserve(hist.bins().size());
    energies.reserve(hist.bins().size());
    for (const auto& [t, c] : hist.bins()) {
        const double e = cp.jx * t.mx + cp.jy * t.my + cp.jz * t.mz;
        energies.push_back(e);
        logs.push_back(-cp.beta * e + std::log(static_cast<double>(c)));
    }
    const double lz = log_sum_exp(logs);
    double e1 = 0.0, e2 = 0.0;
    for (size_t i = 0; i < logs.size(); ++i) {
        const double w = std::exp(logs[i] - lz);
        e1 += w * energies[i];
        e2 += w * energies[i] * energies[i];
    }
    return {e1, std::max(0.0, e2 - e1 * e1)};
}

}  // namespace gsf
