#include "gsf/monte_carlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "gsf/numeric.hpp"

namespace gsf {

void MCConfig::validate() const {
    if (sweeps < 1 || burn_in < 0 || thin < 1)
        throw std::invalid_argument("MCConfig: sweeps >= 1, burn_in >= 0, thin >= 1 required");
    if (bins < 2) throw std::invalid_argument("MCConfig: bins must be >= 2");
    if (sweeps / thin < 2L * bins)
        throw std::invalid_argument("MCConfig: needs at least 2*bins energy samples "
                                    "(sweeps/thin >= 2*bins)");
}

namespace {

constexpr long kResyncInterval = 1000;  // sweeps between full energy recomputes

// Single chain state. Site k is encoded as state[k] = (u<<1)|par where u is
// the up-spin indicator and par the parity of up spins among its neighbors;
// the class value table {I,Z,X,Y} -> {0,jz,jx,jy} turns flips into O(degree)
// table lookups.
class Chain {
  public:
    Chain(const Graph& g, double beta, double jx, double jy, double jz,
          std::uint64_t rng_seed)
        : g_(g),
          n_(g.n()),
          beta_(beta),
          rng_(rng_seed),
          uniform_(jx == jy && jy == jz),
          j_(jx) {
        value_[0] = 0.0;
        value_[1] = jz;
        value_[2] = jx;
        value_[3] = jy;
        for (int s = 0; s < 4; ++s) {
            site_delta_[s] = value_[s ^ 2] - value_[s];
            nbr_delta_[s] = value_[s ^ 1] - value_[s];
        }
        if (uniform_) {
            const int span = g_.max_degree() + 1;
            lut_off_ = span;
            lut_.resize(2 * span + 1);
            for (int k = -span; k <= span; ++k)
                lut_[k + span] = std::min(1.0, std::exp(-beta_ * j_ * k));
        }
        set_all_down();
    }

    void set_all_down() {
        state_.assign(n_, 0);
        energy_ = 0.0;
        rebuild();
    }

    void set_spins(std::span<const std::int8_t> spins) {
        state_.assign(n_, 0);
        for (int i = 0; i < n_; ++i) state_[i] = spins[i] > 0 ? 2 : 0;
        rebuild();
    }

    void set_random() {
        state_.assign(n_, 0);
        for (int i = 0; i < n_; ++i) state_[i] = (rng_.next_u64() & 1) ? 2 : 0;
        rebuild();
    }

    // one sweep = n proposals; returns the number of accepted flips
    long sweep() {
        return uniform_ ? sweep_impl<true>() : sweep_impl<false>();
    }

    // runs `sweeps` full sweeps with periodic resync; returns accepted count
    long run(long sweeps) {
        long acc = 0;
        for (long s = 1; s <= sweeps; ++s) {
            acc += sweep();
            if (s % kResyncInterval == 0) resync();
        }
        return acc;
    }

    double energy() const { return energy_; }
    int n() const { return n_; }

    void fill_up_bits(std::vector<std::uint8_t>& out) const {
        out.resize(n_);
        for (int i = 0; i < n_; ++i) out[i] = state_[i] >> 1;
    }

    SpinConfig spin_config() const {
        SpinConfig cfg;
        cfg.spins.resize(n_);
        for (int i = 0; i < n_; ++i) cfg.spins[i] = (state_[i] & 2) ? +1 : -1;
        return cfg;
    }

    void resync() {
        const double tracked = energy_;
        rebuild();
        if (std::abs(tracked - energy_) > 1e-8)
            throw std::runtime_error(
                "monte carlo: incremental energy drifted from full recompute by " +
                std::to_string(std::abs(tracked - energy_)) +
                " (local energy delta bug)");
    }

  private:
    template <bool Uniform>
    long sweep_impl() {
        const int* adj = g_.csr_adjacency().data();
        const int* off = g_.csr_offsets().data();
        std::uint8_t* st = state_.data();
        long accepted = 0;
        for (int t = 0; t < n_; ++t) {
            const int i = static_cast<int>(rng_.next_below(static_cast<std::uint32_t>(n_)));
            const int begin = off[i], end = off[i + 1];
            double accept_prob;
            double de;
            if constexpr (Uniform) {
                int k = site_delta_int(st[i]);
                for (int e = begin; e < end; ++e) k += nbr_delta_int(st[adj[e]]);
                accept_prob = lut_[k + lut_off_];
                de = j_ * k;
            } else {
                de = site_delta_[st[i]];
                for (int e = begin; e < end; ++e) de += nbr_delta_[st[adj[e]]];
                accept_prob = de <= 0.0 ? 1.0 : std::exp(-beta_ * de);
            }
            if (accept_prob >= 1.0 || rng_.next_unit() < accept_prob) {
                st[i] ^= 2;
                for (int e = begin; e < end; ++e) st[adj[e]] ^= 1;
                energy_ += de;
                ++accepted;
            }
        }
        return accepted;
    }

    static int site_delta_int(std::uint8_t s) {
        // value/j = {0,1,1,1}: flip of u changes the site term by +-1 or 0
        static constexpr int d[4] = {+1, 0, -1, 0};
        return d[s];
    }
    static int nbr_delta_int(std::uint8_t s) {
        static constexpr int d[4] = {+1, -1, 0, 0};
        return d[s];
    }

    void rebuild() {
        for (int i = 0; i < n_; ++i) {
            int ups = 0;
            for (int j : g_.neighbors(i)) ups += state_[j] >> 1;
            state_[i] = static_cast<std::uint8_t>((state_[i] & 2) | (ups & 1));
        }
        double e = 0.0;
        for (int i = 0; i < n_; ++i) e += value_[state_[i]];
        energy_ = e;
    }

    const Graph& g_;
    int n_;
    double beta_;
    Rng rng_;
    bool uniform_;
    double j_;
    double value_[4];
    double site_delta_[4];
    double nbr_delta_[4];
    std::vector<double> lut_;
    int lut_off_ = 0;
    std::vector<std::uint8_t> state_;
    double energy_ = 0.0;
};

}  // namespace

ChainResult run_chain(const Graph& g, const CouplingParams& cp, const MCConfig& mc,
                      std::uint64_t stream, const SpinConfig* initial,
                      const std::function<void(std::span<const std::uint8_t>)>& on_sample) {
    mc.validate();
    if (!std::isfinite(cp.beta) || cp.beta < 0.0)
        throw std::invalid_argument("run_chain: beta must be finite and >= 0");

    Chain chain(g, cp.beta, cp.jx, cp.jy, cp.jz, mix_seed(mc.seed, 0x636861696eULL, stream));
    if (initial) {
        if (initial->n() != g.n())
            throw std::invalid_argument("run_chain: initial state size mismatch");
        chain.set_spins(initial->spins);
    }

    long accepted = chain.run(mc.burn_in);

    ChainResult res;
    res.energy_samples.reserve(static_cast<size_t>(mc.sweeps / mc.thin));
    std::vector<std::uint8_t> up_bits;
    for (long s = 1; s <= mc.sweeps; ++s) {
        accepted += chain.sweep();
        if (s % kResyncInterval == 0) chain.resync();
        if (s % mc.thin == 0) {
            res.energy_samples.push_back(chain.energy());
            if (on_sample) {
                chain.fill_up_bits(up_bits);
                on_sample(up_bits);
            }
        }
    }
    const double proposals =
        static_cast<double>(mc.burn_in + mc.sweeps) * static_cast<double>(g.n());
    res.acceptance_rate = proposals > 0 ? static_cast<double>(accepted) / proposals : 1.0;
    res.final_state = chain.spin_config();
    return res;
}

MCObservables estimate_observables(std::span<const double> samples, double beta, int bins) {
    if (bins < 2) throw std::invalid_argument("estimate_observables: bins must be >= 2");
    const long m = static_cast<long>(samples.size()) / bins;
    if (m < 2)
        throw std::invalid_argument("estimate_observables: needs at least 2*bins samples, got " +
                                    std::to_string(samples.size()));

    std::vector<double> e_bin(bins), c_bin(bins);
    for (int b = 0; b < bins; ++b) {
        double s1 = 0.0, s2 = 0.0;
        for (long i = b * m; i < (b + 1) * m; ++i) {
            s1 += samples[i];
            s2 += samples[i] * samples[i];
        }
        const double mean = s1 / m;
        const double var = std::max(0.0, s2 / m - mean * mean);
        e_bin[b] = mean;
        c_bin[b] = beta * beta * var;
    }

    auto reduce = [&](const std::vector<double>& v) {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= bins;
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        return ObservableEstimate{mean, std::sqrt(ss / (static_cast<double>(bins) * (bins - 1))),
                                  m * bins};
    };
    return {reduce(e_bin), reduce(c_bin)};
}

namespace {

constexpr int kMaxBurnDoublings = 5;

struct ProtocolResult {
    MCObservables obs;
    bool equilibrated = false;
    double acceptance_rate = 0.0;
    std::vector<double> samples;
};

// Measures with geometric burn-in doubling until the two halves of the
// measurement series agree on <E> within 2 sigma.
ProtocolResult run_protocol(const Graph& g, double beta, double jx, double jy, double jz,
                            const MCConfig& mc, std::uint64_t rng_seed, bool hot_start) {
    Chain chain(g, beta, jx, jy, jz, rng_seed);
    if (hot_start) chain.set_random();

    long accepted = chain.run(mc.burn_in);
    long proposals = mc.burn_in;

    ProtocolResult res;
    const long n_samples = mc.sweeps / mc.thin;
    const int half_bins = std::max(2, mc.bins / 2);
    for (int attempt = 0;; ++attempt) {
        res.samples.clear();
        res.samples.reserve(static_cast<size_t>(n_samples));
        for (long s = 1; s <= mc.sweeps; ++s) {
            accepted += chain.sweep();
            if (s % kResyncInterval == 0) chain.resync();
            if (s % mc.thin == 0) res.samples.push_back(chain.energy());
        }
        proposals += mc.sweeps;

        const long half = static_cast<long>(res.samples.size()) / 2;
        const auto first =
            estimate_observables({res.samples.data(), static_cast<size_t>(half)}, beta, half_bins);
        const auto second = estimate_observables(
            {res.samples.data() + half, static_cast<size_t>(half)}, beta, half_bins);
        const double gap = std::abs(first.energy.mean - second.energy.mean);
        const double sigma = std::hypot(first.energy.std_error, second.energy.std_error);
        if (gap <= 2.0 * sigma) {
            res.equilibrated = true;
            break;
        }
        if (attempt >= kMaxBurnDoublings) break;
        const long extra = mc.burn_in << (attempt + 1);
        accepted += chain.run(extra);
        proposals += extra;
    }
    res.obs = estimate_observables(res.samples, beta, mc.bins);
    res.acceptance_rate =
        static_cast<double>(accepted) / (static_cast<double>(proposals) * g.n());
    return res;
}

double infinite_temperature_energy(const Graph& g, double jx, double jy, double jz) {
    // independent uniform spins: P(X)=P(Y)=P(Z)=1/4 per site with neighbors,
    // isolated sites are X with probability 1/2
    double e = 0.0;
    for (int i = 0; i < g.n(); ++i)
        e += g.degree(i) > 0 ? 0.25 * (jx + jy + jz) : 0.5 * jx;
    return e;
}

}  // namespace

EquilibratedPoint estimate_at_beta(const Graph& g, double beta, double jx, double jy,
                                   double jz, const MCConfig& mc, bool keep_samples) {
    mc.validate();
    if (!std::isfinite(beta) || beta < 0.0)
        throw std::invalid_argument("estimate_at_beta: beta must be finite and >= 0");

    EquilibratedPoint pt;
    pt.beta = beta;
    if (beta == 0.0) {
        // exact anchor: every configuration equally likely
        pt.energy = {infinite_temperature_energy(g, jx, jy, jz), 0.0, 0};
        pt.specific_heat = {0.0, 0.0, 0};
        pt.acceptance_rate = 1.0;
        return pt;
    }

    const std::uint64_t beta_bits = std::bit_cast<std::uint64_t>(beta);
    auto cold = run_protocol(g, beta, jx, jy, jz, mc,
                             mix_seed(mc.seed, beta_bits, 1), /*hot_start=*/false);
    auto hot = run_protocol(g, beta, jx, jy, jz, mc,
                            mix_seed(mc.seed, beta_bits, 2), /*hot_start=*/true);

    pt.equilibrated = cold.equilibrated || hot.equilibrated;
    const double gap = std::abs(cold.obs.energy.mean - hot.obs.energy.mean);
    const double sigma = std::hypot(cold.obs.energy.std_error, hot.obs.energy.std_error);
    const bool agree = gap <= 3.0 * sigma;

    if ((cold.equilibrated == hot.equilibrated) && (agree || !cold.equilibrated)) {
        // pool the two independent chains (also when both are tunneling: the
        // union samples the two-phase mixture)
        std::vector<double> pooled;
        pooled.reserve(cold.samples.size() + hot.samples.size());
        pooled.insert(pooled.end(), cold.samples.begin(), cold.samples.end());
        pooled.insert(pooled.end(), hot.samples.begin(), hot.samples.end());
        const auto est = estimate_observables(pooled, beta, 2 * mc.bins);
        pt.energy = est.energy;
        pt.specific_heat = est.specific_heat;
        pt.metastable = !agree;
        pt.acceptance_rate = 0.5 * (cold.acceptance_rate + hot.acceptance_rate);
        if (keep_samples) pt.samples = std::move(pooled);
        return pt;
    }

    // branches disagree: keep the one continuous with the beta = 0 anchor
    // (prefer hot), flag the point as metastable
    const ProtocolResult& pick =
        (hot.equilibrated || !cold.equilibrated) ? hot : cold;
    pt.energy = pick.obs.energy;
    pt.specific_heat = pick.obs.specific_heat;
    pt.metastable = true;
    pt.acceptance_rate = pick.acceptance_rate;
    if (keep_samples) pt.samples = pick.samples;
    return pt;
}

namespace {

struct RayPoint {
    size_t input_index;
    double p;
    double beta;
};

struct Ray {  // one coupling direction: integrate along beta with J fixed
    double jx = 1.0, jy = 1.0, jz = 1.0;
    std::vector<RayPoint> points;
};

}  // namespace

std::vector<MCIntegrationRow> fidelity_by_integration(const Graph& g,
                                                      std::span<const NoiseModel> noise_points,
                                                      const MCConfig& mc, bool keep_samples) {
    mc.validate();
    if (noise_points.empty()) return {};
    const int n = g.n();

    // group points by coupling direction (jy, jz) after the jx = 1 normalization
    std::map<std::pair<long long, long long>, Ray> rays;
    for (size_t idx = 0; idx < noise_points.size(); ++idx) {
        const auto& noise = noise_points[idx];
        const CouplingParams cp = coupling_from_noise(noise, n);
        // negative couplings only; the beta = 0 boundary is the exact anchor
        if (cp.beta < 0.0 || (cp.beta > 0.0 && (cp.jy < 0.0 || cp.jz < 0.0)))
            throw std::invalid_argument(
                "fidelity_by_integration: channel maps to a non-ferromagnetic system "
                "(some p_mu > 1-p); use an exact solver");
        auto quantize = [](double x) { return std::llround(x * 1e9); };
        auto& ray = rays[{quantize(cp.jy), quantize(cp.jz)}];
        ray.jx = cp.jx;
        ray.jy = cp.jy;
        ray.jz = cp.jz;
        ray.points.push_back({idx, noise.p(), cp.beta});
    }

    std::vector<MCIntegrationRow> rows(noise_points.size());
    for (auto& [key, ray] : rays) {
        // knots: 0 plus all target betas, then adaptive bisection refinement
        std::map<double, EquilibratedPoint> knots;
        auto ensure = [&](double b) -> EquilibratedPoint& {
            auto it = knots.find(b);
            if (it == knots.end())
                it = knots.emplace(b, estimate_at_beta(g, b, ray.jx, ray.jy, ray.jz, mc,
                                                       keep_samples))
                         .first;
            return it->second;
        };

        double beta_max = 0.0;
        ensure(0.0);
        for (const auto& pt : ray.points) {
            ensure(pt.beta);
            beta_max = std::max(beta_max, pt.beta);
        }

        const double total_tol = 1e-3 * n;
        if (beta_max > 0.0) {
            constexpr int kMaxDepth = 6;
            constexpr double kMinWidth = 5e-4;
            double unresolved = 0.0;

            struct Interval {
                double a, b;
                int depth;
            };
            std::vector<Interval> stack;
            {
                auto it = knots.begin();
                auto prev = it++;
                for (; it != knots.end(); ++prev, ++it)
                    stack.push_back({prev->first, it->first, 0});
            }
            while (!stack.empty()) {
                const auto [a, b, depth] = stack.back();
                stack.pop_back();
                const double mid = 0.5 * (a + b);
                const auto& ea = ensure(a);
                const auto& eb = ensure(b);
                const auto& em = ensure(mid);
                const double len = b - a;
                // Richardson estimate for the trapezoid error on [a,b]
                const double err = len *
                                   std::abs(ea.energy.mean + eb.energy.mean -
                                            2.0 * em.energy.mean) /
                                   12.0;
                const double noise_floor =
                    len / 4.0 *
                    std::sqrt(ea.energy.std_error * ea.energy.std_error +
                              4.0 * em.energy.std_error * em.energy.std_error +
                              eb.energy.std_error * eb.energy.std_error);
                const double share = total_tol * len / beta_max;
                if (err <= std::max(share, 1.5 * noise_floor)) continue;
                if (depth >= kMaxDepth || len < kMinWidth) {
                    unresolved += err;
                    continue;
                }
                stack.push_back({a, mid, depth + 1});
                stack.push_back({mid, b, depth + 1});
            }
            if (unresolved > total_tol)
                throw std::runtime_error(
                    "fidelity_by_integration: integration grid failed to resolve the "
                    "energy curve (estimated error " + std::to_string(unresolved) +
                    " > " + std::to_string(total_tol) + "); raise sweeps or refine the p grid");
        }

        // composite trapezoid with exact error propagation over knot SEs
        std::vector<double> bs, means, ses;
        for (const auto& [b, est] : knots) {
            bs.push_back(b);
            means.push_back(est.energy.mean);
            ses.push_back(est.energy.std_error);
        }
        auto integral_to = [&](double target, double& var_out) {
            double integral = 0.0;
            std::vector<double> weights(bs.size(), 0.0);
            for (size_t i = 0; i + 1 < bs.size() && bs[i] < target; ++i) {
                const double hi = std::min(bs[i + 1], target);
                const double w = 0.5 * (hi - bs[i]);
                integral += w * (means[i] + means[i + 1]);
                weights[i] += w;
                weights[i + 1] += w;
            }
            var_out = 0.0;
            for (size_t i = 0; i < bs.size(); ++i)
                var_out += weights[i] * weights[i] * ses[i] * ses[i];
            return integral;
        };

        for (const auto& pt : ray.points) {
            MCIntegrationRow row;
            row.p = pt.p;
            row.beta = pt.beta;
            double var = 0.0;
            const double integral = integral_to(pt.beta, var);
            const double log_zp = n * std::log(2.0) - integral;
            row.log_fidelity = n * std::log1p(-pt.p) + log_zp;
            row.err_log_fidelity = std::sqrt(var);
            const auto& est = knots.at(pt.beta);
            row.energy = est.energy;
            row.specific_heat = est.specific_heat;
            row.metastable = est.metastable;
            row.equilibrated = est.equilibrated;
            if (keep_samples) row.samples = est.samples;
            rows[pt.input_index] = std::move(row);
        }
    }
    return rows;
}

}  // namespace gsf
