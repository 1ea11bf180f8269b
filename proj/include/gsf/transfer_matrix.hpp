#pragma once

#include <array>

namespace gsf {

using Matrix4 = std::array<std::array<double, 4>, 4>;

// The three nonzero eigenvalues of the 1D transfer matrix, sorted by
// descending absolute value; lambdas[0] is the positive, simple Perron root.
struct TransferSpectrum {
    std::array<double, 3> lambdas{};
    double beta = 0.0;
};

// Two-site transfer matrix of the 1D cluster chain in the pair basis
// (1,1),(1,-1),(-1,1),(-1,-1); entries in {e^{-2b}, e^{-b}, 1}, rows 1 and 3
// identical (hence one exactly-zero eigenvalue).
Matrix4 build_transfer_matrix(double beta);

// Nonzero eigenvalues via exact deflation of the duplicated row to a 3x3
// matrix and a closed-form cubic solve with Newton polish. Throws when the
// cubic acquires a complex pair beyond tolerance (construction bug).
TransferSpectrum spectrum(const Matrix4& t, double beta);

struct Fidelity1d {
    double per_qubit = 0.0;
    double log_total = 0.0;
};

// F^{1/n} = (1-p) (lambda1^{n/2} + lambda2^{n/2} + lambda3^{n/2})^{1/n} for the
// ring of n sites under depolarizing noise. n must be even and >= 4.
// p = 0 and p = 3/4 short-circuit to the exact limits.
Fidelity1d fidelity_1d(long n, double p);

// Thermodynamic limit: F^{1/n} -> (1-p) sqrt(lambda1).
double fidelity_1d_thermodynamic(double p);

struct Observables1d {
    double energy_per_qubit = 0.0;
    double specific_heat_per_qubit = 0.0;
};

// E = -d ln Z'/d beta and C = -beta^2 dE/d beta with Z' = sum_k lambda_k^{n/2},
// by central differences in beta with one Richardson level.
Observables1d observables_1d(long n, double p);

}  // namespace gsf
