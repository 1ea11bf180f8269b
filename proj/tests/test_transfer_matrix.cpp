#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>

#include "gsf/graph.hpp"
#include "gsf/pauli.hpp"
#include "gsf/spin_model.hpp"
#include "gsf/transfer_matrix.hpp"
#include "oracles.hpp"

using namespace gsf;

namespace {

// determinant of the deflated 3x3, re-derived locally
double deflated_det(const Matrix4& t) {
    double m[3][3];
    const int rows[3] = {0, 1, 3};
    for (int r = 0; r < 3; ++r) {
        m[r][0] = t[rows[r]][0] + t[rows[r]][2];
        m[r][1] = t[rows[r]][1];
        m[r][2] = t[rows[r]][3];
    }
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double det4(const Matrix4& t) {
    // expansion by minors; fine for a 4x4 sanity check
    double det = 0.0;
    for (int c = 0; c < 4; ++c) {
        double m[3][3];
        for (int r = 1; r < 4; ++r) {
            int cc = 0;
            for (int k = 0; k < 4; ++k) {
                if (k == c) continue;
                m[r - 1][cc++] = t[r][k];
            }
        }
        const double minor = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        det += (c % 2 == 0 ? 1.0 : -1.0) * t[0][c] * minor;
    }
    return det;
}

}  // namespace

TEST_SUITE("transfer") {

TEST_CASE("matrix entries at beta = ln 3 and the row-duplication structure") {
    const Matrix4 t = build_transfer_matrix(std::log(3.0));
    CHECK(t[1][0] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(t[0][0] == doctest::Approx(1.0 / 9.0).epsilon(1e-14));
    CHECK(t[3][3] == 1.0);
    for (int c = 0; c < 4; ++c) CHECK(t[0][c] == t[2][c]);

    // full entry pattern from the two-site block Hamiltonian
    const double e1 = 1.0 / 3.0, e2 = 1.0 / 9.0;
    const Matrix4 expected = {{{e2, e2, e1, e2},
                               {e1, e1, e2, e1},
                               {e2, e2, e1, e2},
                               {e2, e2, e1, 1.0}}};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(t[r][c] == doctest::Approx(expected[r][c]).epsilon(1e-14));
}

TEST_CASE("entries approach 1 as beta -> 0") {
    const Matrix4 t = build_transfer_matrix(1e-12);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(t[r][c] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("construction rejects invalid beta") {
    CHECK_THROWS_AS(build_transfer_matrix(0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_transfer_matrix(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(build_transfer_matrix(std::nan("")), std::invalid_argument);
}

TEST_CASE("the full matrix is singular (zero mode from the duplicated row)") {
    for (double beta : {0.1, 0.7, 1.5, 3.0}) {
        const Matrix4 t = build_transfer_matrix(beta);
        CHECK(std::abs(det4(t)) < 1e-12);
    }
}

TEST_CASE("spectrum: beta -> 0 degenerates to {4, 0, 0}") {
    // near the triple degeneracy the cubic roots carry the usual cbrt(eps)
    // conditioning; the small eigenvalues are zero only to ~1e-5
    const TransferSpectrum sp = spectrum(build_transfer_matrix(1e-10), 1e-10);
    CHECK(sp.lambdas[0] == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(std::abs(sp.lambdas[1]) < 2e-5);
    CHECK(std::abs(sp.lambdas[2]) < 2e-5);
    CHECK(sp.lambdas[0] + sp.lambdas[1] + sp.lambdas[2] == doctest::Approx(4.0).epsilon(1e-5));
}

TEST_CASE("Perron root is positive, simple and dominant") {
    for (double p = 0.02; p < 0.75; p += 0.04) {
        const double beta = depolarizing_beta(p);
        const TransferSpectrum sp = spectrum(build_transfer_matrix(beta), beta);
        CHECK(sp.lambdas[0] > 0.0);
        CHECK(sp.lambdas[0] > std::abs(sp.lambdas[1]));
        CHECK(std::abs(sp.lambdas[1]) >= std::abs(sp.lambdas[2]));
    }
}

TEST_CASE("eigenvalue sum and product reproduce trace and determinant") {
    for (double beta : {0.3, 0.9, 1.8, 3.5}) {
        const Matrix4 t = build_transfer_matrix(beta);
        const TransferSpectrum sp = spectrum(t, beta);
        const double tr = t[0][0] + t[1][1] + t[3][3] + t[0][2];  // deflated trace
        CHECK(sp.lambdas[0] + sp.lambdas[1] + sp.lambdas[2] ==
              doctest::Approx(tr).epsilon(1e-10));
        CHECK(sp.lambdas[0] * sp.lambdas[1] * sp.lambdas[2] ==
              doctest::Approx(deflated_det(t)).epsilon(1e-10));
    }
}

TEST_CASE("fidelity agrees with exact enumeration for n <= 12") {
    for (long n : {4L, 6L, 8L, 10L, 12L}) {
        const Graph g = build_ring(static_cast<int>(n));
        for (double p = 0.05; p <= 0.71; p += 0.05) {
            CAPTURE(n);
            CAPTURE(p);
            const double exact = fidelity_exact(g, NoiseModel::depolarizing(p));
            const Fidelity1d f = fidelity_1d(n, p);
            CHECK(std::abs(std::exp(f.log_total) - exact) < 1e-10);
            CHECK(f.per_qubit ==
                  doctest::Approx(std::pow(exact, 1.0 / n)).epsilon(1e-10));
        }
    }
}

TEST_CASE("endpoints and near-maximally-mixed behavior") {
    CHECK(fidelity_1d(1000, 0.0).per_qubit == 1.0);
    CHECK(fidelity_1d(1000, 0.75).per_qubit == 0.5);
    CHECK(fidelity_1d(1000, 0.7499).per_qubit == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(fidelity_1d_thermodynamic(0.7499) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("large-n fidelity exceeds 1-p in the noise-dominated regime") {
    CHECK(fidelity_1d(1000, 0.5).per_qubit > 0.5);
    CHECK(fidelity_1d(1000, 0.6).per_qubit > 0.4 + 0.09);
}

TEST_CASE("odd or tiny n is rejected") {
    CHECK_THROWS_AS(fidelity_1d(7, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(fidelity_1d(2, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(observables_1d(999, 0.3), std::invalid_argument);
}

TEST_CASE("thermodynamic limit consistency at n = 10^4") {
    for (double p = 0.1; p <= 0.74; p += 0.08) {
        CAPTURE(p);
        CHECK(std::abs(fidelity_1d(10000, p).per_qubit - fidelity_1d_thermodynamic(p)) <
              1e-6);
    }
}

TEST_CASE("finite-difference observables match exact moments for small rings") {
    for (long n : {8L, 12L}) {
        const Graph g = build_ring(static_cast<int>(n));
        const WeightHistogram hist = enumerate_weights(g);
        for (double p : {0.15, 0.4, 0.6}) {
            CAPTURE(n);
            CAPTURE(p);
            const CouplingParams cp =
                coupling_from_noise(NoiseModel::depolarizing(p), static_cast<int>(n));
            const ThermalMoments tm = histogram_thermal_moments(hist, cp);
            const Observables1d obs = observables_1d(n, p);
            CHECK(obs.energy_per_qubit == doctest::Approx(tm.mean_energy / n).epsilon(1e-6));
            CHECK(obs.specific_heat_per_qubit ==
                  doctest::Approx(cp.beta * cp.beta * tm.var_energy / n).epsilon(1e-5));
        }
    }
}

TEST_CASE("1D observable curves: smooth crossover, no transition") {
    const long n = 1000;
    double prev_e = -1.0;
    double max_jump = 0.0, prev_f = 1.0;
    double peak_c = 0.0, peak_p = 0.0;
    for (int i = 1; i <= 73; ++i) {
        const double p = 0.01 * i;
        const Observables1d obs = observables_1d(n, p);
        CHECK(obs.energy_per_qubit > prev_e);  // monotone increase
        prev_e = obs.energy_per_qubit;
        if (obs.specific_heat_per_qubit > peak_c) {
            peak_c = obs.specific_heat_per_qubit;
            peak_p = p;
        }
        const double f = fidelity_1d(n, p).per_qubit;
        max_jump = std::max(max_jump, std::abs(f - prev_f));
        prev_f = f;
    }
    CHECK(peak_p > 0.40);
    CHECK(peak_p < 0.60);
    CHECK(peak_c < 2.0);       // broad, non-divergent
    CHECK(max_jump < 0.012);   // grid-Lipschitz proxy: no fidelity jump
    CHECK(observables_1d(n, 0.001).energy_per_qubit < 1e-3);
}

}  // TEST_SUITE
