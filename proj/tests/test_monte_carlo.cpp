#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "gsf/graph.hpp"
#include "gsf/monte_carlo.hpp"
#include "gsf/spin_model.hpp"
#include "gsf/transfer_matrix.hpp"
#include "oracles.hpp"

using namespace gsf;

namespace {

MCConfig quick_config(long sweeps, long burn, long thin, int bins, std::uint64_t seed) {
    MCConfig mc;
    mc.sweeps = sweeps;
    mc.burn_in = burn;
    mc.thin = thin;
    mc.bins = bins;
    mc.seed = seed;
    return mc;
}

}  // namespace

TEST_SUITE("monte-carlo") {

TEST_CASE("config validation") {
    CHECK_THROWS_AS(quick_config(10, 0, 1, 1, 1).validate(), std::invalid_argument);
    CHECK_THROWS_AS(quick_config(10, 0, 1, 32, 1).validate(), std::invalid_argument);
    CHECK_THROWS_AS(quick_config(100, 0, 0, 4, 1).validate(), std::invalid_argument);
    CHECK_NOTHROW(quick_config(100, 0, 1, 4, 1).validate());
}

TEST_CASE("fixed seed reproduces the sample series exactly") {
    const Graph g = build_ring(20);
    const CouplingParams cp = coupling_from_noise(NoiseModel::depolarizing(0.5), 20);
    const MCConfig mc = quick_config(2000, 200, 1, 4, 42);
    const ChainResult a = run_chain(g, cp, mc, 3);
    const ChainResult b = run_chain(g, cp, mc, 3);
    CHECK(a.energy_samples == b.energy_samples);
    CHECK(a.acceptance_rate == b.acceptance_rate);

    const ChainResult c = run_chain(g, cp, mc, 4);  // different stream
    CHECK(a.energy_samples != c.energy_samples);
}

TEST_CASE("beta = 0 accepts every proposal") {
    const Graph g = build_ring(12);
    const CouplingParams cp = coupling_from_noise(NoiseModel::depolarizing(0.75), 12);
    REQUIRE(cp.beta == 0.0);
    const ChainResult r = run_chain(g, cp, quick_config(2000, 100, 1, 4, 9));
    CHECK(r.acceptance_rate == 1.0);
}

TEST_CASE("beta = 0 energy matches the exhaustive infinite-temperature average") {
    const Graph g = build_ring(10);
    const CouplingParams cp = coupling_from_noise(NoiseModel::depolarizing(0.75), 10);
    const ChainResult r = run_chain(g, cp, quick_config(40000, 1000, 2, 16, 5));
    const auto est = estimate_observables(r.energy_samples, 0.0, 16);

    CouplingParams flat = cp;  // beta = 0 weights: plain average over configs
    const auto exact = oracle::exhaustive_thermal_moments(g, flat);
    CHECK(exact.mean == doctest::Approx(0.75 * 10).epsilon(1e-12));
    CHECK(std::abs(est.energy.mean - exact.mean) <= 3.0 * est.energy.std_error);
}

TEST_CASE("deep ferromagnetic regime stays near the ground state") {
    const Graph g = build_ring(50);
    const CouplingParams cp = coupling_from_noise(NoiseModel::depolarizing(0.01), 50);
    const ChainResult r = run_chain(g, cp, quick_config(20000, 2000, 2, 8, 17));
    const auto est = estimate_observables(r.energy_samples, cp.beta, 8);
    CHECK(est.energy.mean / 50.0 < 0.05);
    const double e_transfer = observables_1d(50, 0.01).energy_per_qubit;
    CHECK(std::abs(est.energy.mean / 50.0 - e_transfer) < 1e-3);
}

TEST_CASE("estimate_observables: constant series has zero specific heat") {
    const std::vector<double> flat(256, 3.5);
    const auto est = estimate_observables(flat, 1.2, 8);
    CHECK(est.energy.mean == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(est.energy.std_error == 0.0);
    CHECK(est.specific_heat.mean == 0.0);
    CHECK(est.specific_heat.std_error == 0.0);

    CHECK_THROWS_AS(estimate_observables(std::vector<double>(7, 0.0), 1.0, 4),
                    std::invalid_argument);
}

TEST_CASE("rejects invalid beta and mismatched initial state") {
    const Graph g = build_ring(8);
    CouplingParams cp = coupling_from_noise(NoiseModel::depolarizing(0.5), 8);
    const MCConfig mc = quick_config(100, 0, 1, 4, 1);
    cp.beta = -0.5;
    CHECK_THROWS_AS(run_chain(g, cp, mc), std::invalid_argument);
    cp.beta = 0.5;
    const SpinConfig wrong = SpinConfig::all_down(5);
    CHECK_THROWS_AS(run_chain(g, cp, mc, 0, &wrong), std::invalid_argument);
}

TEST_CASE("stationary distribution matches Boltzmann (chi-square)") {
    const Graph g = build_ring(6);
    const NoiseModel nm = NoiseModel::depolarizing(0.6);  // beta = ln 2
    const CouplingParams cp = coupling_from_noise(nm, 6);
    const auto expected = oracle::boltzmann_distribution(g, cp);

    std::vector<long> counts(64, 0);
    long total = 0;
    auto observer = [&](std::span<const std::uint8_t> up) {
        std::uint64_t id = 0;
        for (size_t i = 0; i < up.size(); ++i) id |= static_cast<std::uint64_t>(up[i]) << i;
        ++counts[id];
        ++total;
    };
    run_chain(g, cp, quick_config(600000, 2000, 6, 8, 31), 0, nullptr, observer);

    double chi2 = 0.0;
    double min_expected = 1e9;
    for (int c = 0; c < 64; ++c) {
        const double e = expected[c] * static_cast<double>(total);
        min_expected = std::min(min_expected, e);
        chi2 += (counts[c] - e) * (counts[c] - e) / e;
    }
    CHECK(min_expected > 20.0);  // chi-square applicability
    // 63 degrees of freedom: mean 63, sd sqrt(126)
    CHECK(chi2 < 63.0 + 3.0 * std::sqrt(126.0));
}

TEST_CASE("equilibrated estimate at one beta agrees with exhaustive averages") {
    const Graph g = build_2d_regular(4, 3, 4);  // n = 12
    for (double p : {0.3, 0.55}) {
        CAPTURE(p);
        const CouplingParams cp = coupling_from_noise(NoiseModel::depolarizing(p), g.n());
        const auto pt = estimate_at_beta(g, cp.beta, 1.0, 1.0, 1.0,
                                         quick_config(40000, 2000, 2, 16, 23));
        const auto exact = oracle::exhaustive_thermal_moments(g, cp);
        CHECK(std::abs(pt.energy.mean - exact.mean) <=
              3.0 * pt.energy.std_error + 1e-9);
        CHECK(std::abs(pt.specific_heat.mean - cp.beta * cp.beta * exact.var) <=
              3.0 * pt.specific_heat.std_error + 1e-9);
        CHECK(pt.equilibrated);
        CHECK_FALSE(pt.metastable);
    }
}

TEST_CASE("thermodynamic integration reproduces the transfer matrix on a ring") {
    const Graph g = build_ring(40);
    std::vector<NoiseModel> grid;
    for (double p : {0.15, 0.35, 0.55, 0.7}) grid.push_back(NoiseModel::depolarizing(p));
    const auto rows =
        fidelity_by_integration(g, grid, quick_config(20000, 2000, 2, 16, 77));
    REQUIRE(rows.size() == grid.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        CAPTURE(rows[i].p);
        const Fidelity1d ref = fidelity_1d(40, rows[i].p);
        const double f_mc = std::exp(rows[i].log_fidelity / 40.0);
        const double f_err = f_mc * rows[i].err_log_fidelity / 40.0;
        CHECK(std::abs(f_mc - ref.per_qubit) <= std::max(3.0 * f_err, 5e-3));
        CHECK(f_mc >= (1.0 - rows[i].p) - 3.0 * f_err - 5e-3);

        const double e_ref = observables_1d(40, rows[i].p).energy_per_qubit;
        CHECK(std::abs(rows[i].energy.mean / 40.0 - e_ref) <=
              std::max(3.0 * rows[i].energy.std_error / 40.0, 5e-3));
    }
}

TEST_CASE("integration endpoint p = 3/4 is the exact anchor") {
    const Graph g = build_ring(16);
    const std::vector<NoiseModel> grid{NoiseModel::depolarizing(0.75)};
    const auto rows = fidelity_by_integration(g, grid, quick_config(1000, 100, 1, 4, 1));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].beta == 0.0);
    CHECK(rows[0].err_log_fidelity == 0.0);
    CHECK(std::exp(rows[0].log_fidelity / 16.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rows[0].energy.mean == doctest::Approx(0.75 * 16).epsilon(1e-12));
    CHECK(rows[0].specific_heat.mean == 0.0);
}

TEST_CASE("integration rejects non-ferromagnetic channels") {
    const Graph g = build_ring(8);
    const std::vector<NoiseModel> grid{NoiseModel::iid(0.5, 0.2, 0.2)};
    CHECK_THROWS_AS(fidelity_by_integration(g, grid, quick_config(100, 0, 1, 4, 1)),
                    std::invalid_argument);
}

TEST_CASE("general IID triples integrate along their own coupling ray") {
    const Graph g = build_ring(12);
    const NoiseModel nm = NoiseModel::iid(0.12, 0.2, 0.3);
    const std::vector<NoiseModel> grid{nm};
    const auto rows =
        fidelity_by_integration(g, grid, quick_config(40000, 2000, 2, 16, 13));
    REQUIRE(rows.size() == 1);
    const double f_exact = fidelity_exact(g, nm);
    const double log_err = rows[0].err_log_fidelity;
    CHECK(std::abs(rows[0].log_fidelity - std::log(f_exact)) <=
          std::max(3.0 * log_err, 0.02 * 12));
}

}  // TEST_SUITE
