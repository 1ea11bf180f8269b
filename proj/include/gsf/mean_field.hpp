#pragma once

#include <optional>

namespace gsf {

// Field and constant coefficients of the mean-field Hamiltonian
// H_MF = B(<s>) sum_i s_i + D(<s>) for the hypercubic cluster states,
// k = 2*dimension in {2,4,6}:
//   B = 1/4 - (k/4) s^{k-1} + ((k+1)/4) s^k
//   D/n = 3/4 + ((k-1)/4) s^k - (k/4) s^{k+1}
struct MeanFieldCoefficients {
    double b = 0.0;
    double d_per_qubit = 0.0;
};
MeanFieldCoefficients mf_coefficients(int k, double s);

struct MeanFieldSolution {
    double magnetization = 0.0;          // selected root of s = -tanh(beta B(s))
    double b = 0.0;                      // B at the solution
    double d_per_qubit = 0.0;            // D/n at the solution
    double free_energy_per_qubit = 0.0;  // D/n - ln(2 cosh(beta B))/beta (offset c omitted)
    double fidelity_per_qubit = 0.0;     // (1-p) e^{-beta D/n} 2 cosh(beta B)
    int branch_count = 0;                // number of self-consistent roots found
};

// All roots of s + tanh(beta B(s)) on [-1,1] by sign-change scan plus
// bisection; the branch with minimal free energy is selected.
MeanFieldSolution solve_self_consistent(int k, double beta);

// F_MF^{1/n} at depolarizing strength p (a lower bound on the true fidelity).
double mf_fidelity(int k, double p);

// Depolarizing strength where the selected branch swaps (free-energy crossing
// of coexisting branches), located to 1e-5; nullopt when no swap exists (1D).
std::optional<double> locate_mf_singularity(int k);

}  // namespace gsf
