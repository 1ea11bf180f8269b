#include "gsf/transfer_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gsf/numeric.hpp"
#include "gsf/spin_model.hpp"

namespace gsf {

namespace {

// h(s_prev, s, s_next) = (1+s)/2 + (1-s)(1 - s_prev s_next)/4
double pair_energy(int a, int b, int c, int d) {
    auto h = [](int sp, int s, int sn) {
        return 0.5 * (1 + s) + 0.25 * (1 - s) * (1 - sp * sn);
    };
    return h(a, b, c) + h(b, c, d);
}

}  // namespace

Matrix4 build_transfer_matrix(double beta) {
    if (!std::isfinite(beta) || beta <= 0.0)
        throw std::invalid_argument("build_transfer_matrix: beta must be positive and finite");
    static constexpr int basis[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
    Matrix4 t{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            t[r][c] = std::exp(
                -beta * pair_energy(basis[r][0], basis[r][1], basis[c][0], basis[c][1]));
    return t;
}

namespace {

// Rows 1 and 3 of T are identical, so every nonzero-eigenvalue eigenvector has
// v0 = v2; restricting to that subspace gives the 3x3 matrix below whose
// spectrum is exactly the nonzero spectrum of T.
std::array<std::array<double, 3>, 3> deflate(const Matrix4& t) {
    std::array<std::array<double, 3>, 3> m{};
    constexpr int rows[3] = {0, 1, 3};
    for (int r = 0; r < 3; ++r) {
        m[r][0] = t[rows[r]][0] + t[rows[r]][2];
        m[r][1] = t[rows[r]][1];
        m[r][2] = t[rows[r]][3];
    }
    return m;
}

struct Cubic {  // x^3 - a2 x^2 + a1 x - a0
    double a2, a1, a0;
    double eval(double x) const { return ((x - a2) * x + a1) * x - a0; }
    double deriv(double x) const { return (3.0 * x - 2.0 * a2) * x + a1; }
};

std::array<double, 3> solve_real_cubic(const Cubic& cu) {
    // depressed form t^3 + p t + q with x = t + a2/3
    const double b = -cu.a2, c = cu.a1, d = -cu.a0;
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const double shift = -b / 3.0;

    std::array<double, 3> roots{};
    const double disc = -4.0 * p * p * p - 27.0 * q * q;
    if (p < 0.0) {
        // trig method; clamping absorbs roundoff at (near-)degenerate roots
        const double r = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (p * r);
        if (disc < 0.0) {
            // genuine complex pair: imaginary part from Cardano
            const double s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
            const double u = std::cbrt(-q / 2.0 + s);
            const double v = std::cbrt(-q / 2.0 - s);
            const double imag = std::abs(u - v) * std::sqrt(3.0) / 2.0;
            if (imag > 1e-8 * std::max(1.0, std::abs(shift) + r))
                throw std::runtime_error(
                    "transfer spectrum: complex eigenvalue pair (|Im| = " +
                    std::to_string(imag) + "); transfer matrix construction is broken");
        }
        arg = std::clamp(arg, -1.0, 1.0);
        const double phi = std::acos(arg);
        for (int k = 0; k < 3; ++k)
            roots[k] = shift + r * std::cos((phi - 2.0 * M_PI * k) / 3.0);
    } else {
        // p >= 0: at most one real root unless everything is degenerate
        const double s2 = q * q / 4.0 + p * p * p / 27.0;
        const double s = std::sqrt(std::max(0.0, s2));
        const double u = std::cbrt(-q / 2.0 + s);
        const double v = std::cbrt(-q / 2.0 - s);
        const double imag = std::abs(u - v) * std::sqrt(3.0) / 2.0;
        if (imag > 1e-8 * std::max(1.0, std::abs(shift)))
            throw std::runtime_error(
                "transfer spectrum: complex eigenvalue pair (|Im| = " + std::to_string(imag) +
                "); transfer matrix construction is broken");
        roots = {shift + u + v, shift - (u + v) / 2.0, shift - (u + v) / 2.0};
    }

    for (double& x : roots) {  // one Newton polish step
        const double df = cu.deriv(x);
        if (df != 0.0) x -= cu.eval(x) / df;
    }
    return roots;
}

double log_zp(const TransferSpectrum& sp, long n) {
    // ln sum_k lambda_k^{n/2} with sign tracking for negative eigenvalues
    const long half = n / 2;
    std::array<SignedLog, 3> terms{};
    for (int k = 0; k < 3; ++k) {
        const double lam = sp.lambdas[k];
        if (lam == 0.0) continue;
        int sign = (lam < 0.0 && (half & 1)) ? -1 : +1;
        terms[k] = {sign, half * std::log(std::abs(lam))};
    }
    const SignedLog sum = signed_log_sum(terms);
    if (sum.sign <= 0)
        throw std::runtime_error("transfer matrix: nonpositive partition sum (numerical failure)");
    return sum.log_abs;
}

void check_fidelity_args(long n, double p) {
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("transfer matrix solver: n must be even and >= 4, got n=" +
                                    std::to_string(n));
    if (p < 0.0 || p > 0.75)
        throw std::invalid_argument("transfer matrix solver: p must be in [0, 3/4]");
}

}  // namespace

TransferSpectrum spectrum(const Matrix4& t, double beta) {
    const auto m = deflate(t);
    const double a2 = m[0][0] + m[1][1] + m[2][2];
    const double a1 = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] -
                      m[0][2] * m[2][0] + m[1][1] * m[2][2] - m[1][2] * m[2][1];
    const double a0 = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                      m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                      m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);

    auto roots = solve_real_cubic({a2, a1, a0});
    std::sort(roots.begin(), roots.end(),
              [](double a, double b) { return std::abs(a) > std::abs(b); });
    if (roots[0] <= 0.0)
        throw std::runtime_error("transfer spectrum: leading eigenvalue not positive");
    return {roots, beta};
}

Fidelity1d fidelity_1d(long n, double p) {
    check_fidelity_args(n, p);
    if (p == 0.0) return {1.0, 0.0};
    if (p == 0.75) return {0.5, -static_cast<double>(n) * std::log(2.0)};

    const double beta = depolarizing_beta(p);
    const auto sp = spectrum(build_transfer_matrix(beta), beta);
    const double lz = log_zp(sp, n);
    const double log_total = n * std::log1p(-p) + lz;
    return {(1.0 - p) * std::exp(lz / static_cast<double>(n)), log_total};
}

double fidelity_1d_thermodynamic(double p) {
    if (p < 0.0 || p > 0.75)
        throw std::invalid_argument("transfer matrix solver: p must be in [0, 3/4]");
    if (p == 0.0) return 1.0;
    if (p == 0.75) return 0.5;
    const double beta = depolarizing_beta(p);
    const auto sp = spectrum(build_transfer_matrix(beta), beta);
    return (1.0 - p) * std::sqrt(sp.lambdas[0]);
}

Observables1d observables_1d(long n, double p) {
    check_fidelity_args(n, p);
    if (p == 0.0) return {0.0, 0.0};
    // beta = 0: every configuration equally likely, <H>/n = 3/4, C = 0
    if (p == 0.75) return {0.75, 0.0};

    const double beta = depolarizing_beta(p);
    auto f = [n](double b) { return log_zp(spectrum(build_transfer_matrix(b), b), n); };

    const double h = 1e-4 * std::max(1.0, beta);
    if (beta <= 2.0 * h)
        throw std::runtime_error(
            "observables_1d: finite-difference step underflow near beta = 0 (p ~ 3/4); "
            "evaluate the p = 3/4 limit exactly instead");

    auto d1 = [&](double step) { return (f(beta + step) - f(beta - step)) / (2.0 * step); };
    auto d2 = [&](double step) {
        return (f(beta + step) - 2.0 * f(beta) + f(beta - step)) / (step * step);
    };
    // one Richardson level on the central stencils
    const double dlz = (4.0 * d1(h / 2.0) - d1(h)) / 3.0;
    const double d2lz = (4.0 * d2(h / 2.0) - d2(h)) / 3.0;

    const double e_total = -dlz;
    const double c_total = beta * beta * d2lz;
    return {e_total / static_cast<double>(n), c_total / static_cast<double>(n)};
}

}  // namespace gsf
