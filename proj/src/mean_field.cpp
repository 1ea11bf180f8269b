#include "gsf/mean_field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsf/spin_model.hpp"

namespace gsf {

namespace {

void check_k(int k) {
    if (k != 2 && k != 4 && k != 6)
        throw std::invalid_argument(
            "mean field: k must be 2, 4 or 6 (1D/2D/3D cluster state), got k=" +
            std::to_string(k));
}

double self_consistency_residual(int k, double beta, double s) {
    return s + std::tanh(beta * mf_coefficients(k, s).b);
}

double free_energy_per_qubit(int k, double beta, double s) {
    const auto [b, dn] = mf_coefficients(k, s);
    // ln(2 cosh x) evaluated without overflow
    const double x = beta * b;
    const double ln2cosh = std::abs(x) + std::log1p(std::exp(-2.0 * std::abs(x)));
    return dn - ln2cosh / beta;
}

}  // namespace

MeanFieldCoefficients mf_coefficients(int k, double s) {
    check_k(k);
    const double sk1 = std::pow(s, k - 1);
    const double sk = sk1 * s;
    MeanFieldCoefficients co;
    co.b = 0.25 - 0.25 * k * sk1 + 0.25 * (k + 1) * sk;
    co.d_per_qubit = 0.75 + 0.25 * (k - 1) * sk - 0.25 * k * sk * s;
    return co;
}

MeanFieldSolution solve_self_consistent(int k, double beta) {
    check_k(k);
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw std::invalid_argument("mean field: beta must be positive and finite");

    constexpr int kScanPoints = 10000;
    constexpr double kTol = 1e-12;

    std::vector<double> roots;
    double prev_s = -1.0;
    double prev_r = self_consistency_residual(k, beta, prev_s);
    if (prev_r == 0.0) roots.push_back(prev_s);
    for (int i = 1; i <= kScanPoints; ++i) {
        const double s = -1.0 + 2.0 * static_cast<double>(i) / kScanPoints;
        const double r = self_consistency_residual(k, beta, s);
        if (r == 0.0) {
            roots.push_back(s);
        } else if (prev_r * r < 0.0) {
            double lo = prev_s, hi = s, rlo = prev_r;
            while (hi - lo > kTol) {
                const double mid = 0.5 * (lo + hi);
                const double rm = self_consistency_residual(k, beta, mid);
                if (rlo * rm <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    rlo = rm;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        prev_s = s;
        prev_r = r;
    }
    if (roots.empty())
        throw std::runtime_error(
            "mean field: no self-consistent root found (residual has no sign change)");

    MeanFieldSolution sol;
    sol.branch_count = static_cast<int>(roots.size());
    double best_f = 0.0;
    bool first = true;
    for (double s : roots) {
        const double f = free_energy_per_qubit(k, beta, s);
        if (first || f < best_f) {
            first = false;
            best_f = f;
            sol.magnetization = s;
        }
    }
    const auto co = mf_coefficients(k, sol.magnetization);
    sol.b = co.b;
    sol.d_per_qubit = co.d_per_qubit;
    sol.free_energy_per_qubit = best_f;
    const double p = depolarizing_p_from_beta(beta);
    sol.fidelity_per_qubit = (1.0 - p) * std::exp(-beta * co.d_per_qubit) *
                             2.0 * std::cosh(beta * co.b);
    return sol;
}

double mf_fidelity(int k, double p) {
    if (p <= 0.0 || p >= 0.75)
        throw std::invalid_argument("mf_fidelity: p must be in (0, 3/4)");
    return solve_self_consistent(k, depolarizing_beta(p)).fidelity_per_qubit;
}

std::optional<double> locate_mf_singularity(int k) {
    check_k(k);
    constexpr double kPMin = 0.02;
    constexpr double kPMax = 0.7499;
    constexpr int kGrid = 1500;
    constexpr double kJump = 0.3;  // magnetization jump marking a branch swap

    auto mag = [k](double p) {
        return solve_self_consistent(k, depolarizing_beta(p)).magnetization;
    };

    double lo = kPMin;
    double mag_lo = mag(lo);
    double hi = 0.0;
    bool found = false;
    for (int i = 1; i <= kGrid; ++i) {
        const double p = kPMin + (kPMax - kPMin) * static_cast<double>(i) / kGrid;
        const double m = mag(p);
        if (std::abs(m - mag_lo) > kJump) {
            hi = p;
            found = true;
            break;
        }
        lo = p;
        mag_lo = m;
    }
    if (!found) return std::nullopt;

    while (hi - lo > 1e-5) {
        const double mid = 0.5 * (lo + hi);
        if (std::abs(mag(mid) - mag_lo) > kJump) {
            hi = mid;
        } else {
            lo = mid;
            mag_lo = mag(lo);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace gsf
