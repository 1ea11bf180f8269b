#include "gsf/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gsf/mean_field.hpp"
#include "gsf/pauli.hpp"
#include "gsf/transfer_matrix.hpp"

namespace gsf {

std::string to_string(Method m) {
    switch (m) {
        case Method::exact: return "exact";
        case Method::spin_exact: return "spin-exact";
        case Method::transfer: return "transfer";
        case Method::mc: return "mc";
        case Method::mf: return "mf";
        case Method::closed_form: return "closed-form";
    }
    return "?";
}

Method method_from_string(const std::string& s) {
    if (s == "exact") return Method::exact;
    if (s == "spin-exact") return Method::spin_exact;
    if (s == "transfer") return Method::transfer;
    if (s == "mc") return Method::mc;
    if (s == "mf") return Method::mf;
    if (s == "closed-form") return Method::closed_form;
    throw std::invalid_argument(
        "unknown method '" + s +
        "' (expected exact|spin-exact|transfer|mc|mf|closed-form)");
}

namespace {

[[noreturn]] void config_error(const std::string& msg) {
    throw std::invalid_argument("config: " + msg);
}

}  // namespace

Graph RunConfig::build_graph() const {
    if (graph_kind == "1d-cluster") return build_ring(n);
    if (graph_kind == "2d-regular") return build_2d_regular(d, nx, ny);
    if (graph_kind == "3d-regular") return build_3d_stack(d - 2, nx, ny, nz);
    if (graph_kind == "complete") return build_complete(n);
    config_error("unknown graph kind '" + graph_kind +
                 "' (expected 1d-cluster|2d-regular|3d-regular|complete)");
}

std::vector<NoiseModel> RunConfig::noise_points() const {
    if (!explicit_noise.empty()) return explicit_noise;
    std::vector<NoiseModel> pts;
    pts.reserve(p_steps);
    for (int i = 0; i < p_steps; ++i) {
        const double p = p_steps == 1
                             ? p_min
                             : p_min + (p_max - p_min) * static_cast<double>(i) / (p_steps - 1);
        pts.push_back(NoiseModel::depolarizing(p));
    }
    return pts;
}

void RunConfig::validate() const {
    // graph arguments
    if (graph_kind == "1d-cluster" || graph_kind == "complete") {
        if (n <= 0) config_error("--graph " + graph_kind + " requires --n");
    } else if (graph_kind == "2d-regular") {
        if (d == 0 || nx == 0 || ny == 0)
            config_error("--graph 2d-regular requires --d, --nx and --ny");
    } else if (graph_kind == "3d-regular") {
        if (d == 0 || nx == 0 || ny == 0 || nz == 0)
            config_error("--graph 3d-regular requires --d, --nx, --ny and --nz");
        if (d < 5 || d > 8)
            config_error("--graph 3d-regular: total degree --d must be in 5..8 "
                         "(layer degree d-2)");
    } else {
        config_error("unknown graph kind '" + graph_kind +
                     "' (expected 1d-cluster|2d-regular|3d-regular|complete)");
    }
    Graph g = build_graph();  // builder preconditions (parity, sizes) checked here

    // method/graph compatibility
    switch (method) {
        case Method::transfer:
            if (graph_kind != "1d-cluster")
                config_error("method=transfer supports only --graph 1d-cluster");
            break;
        case Method::mf:
            if (!(graph_kind == "1d-cluster" || (graph_kind == "2d-regular" && d == 4) ||
                  (graph_kind == "3d-regular" && d == 6)))
                config_error("method=mf supports only cluster-state graphs "
                             "(1d-cluster, 2d-regular d=4, 3d-regular d=6)");
            break;
        case Method::closed_form:
            if (graph_kind != "complete")
                config_error("method=closed-form supports only --graph complete");
            break;
        case Method::exact:
        case Method::spin_exact:
            if (g.n() > enumeration_cap)
                config_error("method=" + to_string(method) + " enumerates 2^n states; n=" +
                             std::to_string(g.n()) + " exceeds the cap " +
                             std::to_string(enumeration_cap) + " (use method=mc)");
            break;
        case Method::mc:
            break;
    }

    // noise specification
    const bool have_grid = p_steps > 0 || p_min >= 0.0 || p_max >= 0.0;
    const bool have_triples = !explicit_noise.empty();
    if (have_grid && have_triples)
        config_error("give either a depolarizing grid (--p-min/--p-max/--p-steps) or "
                     "explicit --px/--py/--pz triples, not both");
    if (!have_grid && !have_triples)
        config_error("no noise given: use --p-min/--p-max/--p-steps or --px/--py/--pz");
    if (have_triples) {
        if (method != Method::exact && method != Method::spin_exact && method != Method::mc)
            config_error("explicit --px/--py/--pz triples are supported by "
                         "exact, spin-exact and mc only");
        for (const auto& nm : explicit_noise)
            if (nm.px < 0 || nm.py < 0 || nm.pz < 0 || nm.p() > 1.0)
                config_error("invalid noise triple (components >= 0, px+py+pz <= 1)");
    } else {
        if (p_steps < 1) config_error("--p-steps must be >= 1");
        if (p_min < 0.0 || p_max > 0.75 || p_min > p_max)
            config_error("depolarizing grid requires 0 <= p-min <= p-max <= 0.75");
        if (p_steps == 1 && p_min != p_max)
            config_error("--p-steps 1 requires p-min == p-max");
        if (method == Method::mc && p_min <= 0.0)
            config_error("method=mc requires p > 0 (the p = 0 limit is exact: F = 1)");
        if (method == Method::mf && (p_min <= 0.0 || p_max >= 0.75))
            config_error("method=mf requires 0 < p < 3/4 (open interval)");
    }

    if (!dump_samples_path.empty() && method != Method::mc)
        config_error("--dump-samples applies to method=mc only");
    if (method == Method::mc) mc.validate();
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double beta_or_inf(const NoiseModel& noise) {
    if (noise.p() == 0.0) return std::numeric_limits<double>::infinity();
    try {
        return coupling_from_noise(noise, 1).beta;
    } catch (const std::invalid_argument&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

[[noreturn]] void solver_context(Method m, double p, const std::exception& e) {
    throw std::runtime_error("solver (method=" + to_string(m) + ", p=" + fmt(p) +
                             "): " + e.what());
}

// shared by exact and spin-exact: fidelity plus exact thermal moments
void fill_enumerated_rows(std::vector<SweepRow>& rows, const WeightHistogram& hist,
                          const std::vector<NoiseModel>& noise, const Graph& g, Method m,
                          bool via_spin_mapping) {
    const int n = g.n();
    for (const auto& nm : noise) {
        SweepRow row;
        row.p = nm.p();
        row.beta = beta_or_inf(nm);
        row.method = m;
        row.graph_descriptor = g.descriptor();
        try {
            row.log_fidelity = via_spin_mapping ? log_fidelity_from_histogram(hist, nm)
                                                : log_fidelity_from_weights(hist, nm);
        } catch (const std::exception& e) {
            solver_context(m, row.p, e);
        }
        row.fidelity_per_qubit = std::exp(row.log_fidelity / n);
        if (row.p == 0.0) {
            // zero-temperature limit: unique zero-energy ground state
            row.energy_per_qubit = 0.0;
            row.specific_heat_per_qubit = 0.0;
        } else {
            try {
                const CouplingParams cp = coupling_from_noise(nm, n);
                const ThermalMoments tm = histogram_thermal_moments(hist, cp);
                row.energy_per_qubit = tm.mean_energy / n;
                row.specific_heat_per_qubit = cp.beta * cp.beta * tm.var_energy / n;
            } catch (const std::invalid_argument&) {
                // mapping undefined for this channel: leave the columns empty
            }
        }
        rows.push_back(std::move(row));
    }
}

}  // namespace

SweepResult run_sweep(const RunConfig& cfg) {
    cfg.validate();
    const Graph g = cfg.build_graph();
    const std::vector<NoiseModel> noise = cfg.noise_points();
    const int n = g.n();

    SweepResult out;
    out.metadata.push_back(std::string("graphstate-fidelity v") + kVersion);
    out.metadata.push_back("method: " + to_string(cfg.method));
    out.metadata.push_back("graph: " + g.descriptor());
    out.metadata.push_back("n: " + std::to_string(n));
    if (cfg.explicit_noise.empty()) {
        out.metadata.push_back("noise: depolarizing grid p in [" + fmt(cfg.p_min) + ", " +
                               fmt(cfg.p_max) + "], points=" + std::to_string(cfg.p_steps));
    } else {
        out.metadata.push_back("noise: explicit iid triples, points=" +
                               std::to_string(cfg.explicit_noise.size()));
    }
    out.metadata.push_back(
        "layout-variants: d3=brick d4=square d5=square+altdiag d6=tri d7=tri+altdiag "
        "d8=unionjack; odd d requires even nx; indexing row-major (x fastest)");

    switch (cfg.method) {
        case Method::exact: {
            const WeightHistogram hist = enumerate_weights(g, cfg.enumeration_cap);
            fill_enumerated_rows(out.rows, hist, noise, g, cfg.method, false);
            break;
        }
        case Method::spin_exact: {
            const WeightHistogram hist = enumerate_term_histogram(g, cfg.enumeration_cap);
            fill_enumerated_rows(out.rows, hist, noise, g, cfg.method, true);
            break;
        }
        case Method::transfer: {
            for (const auto& nm : noise) {
                SweepRow row;
                row.p = nm.p();
                row.beta = beta_or_inf(nm);
                row.method = cfg.method;
                row.graph_descriptor = g.descriptor();
                try {
                    const Fidelity1d f = fidelity_1d(n, row.p);
                    const Observables1d obs = observables_1d(n, row.p);
                    row.fidelity_per_qubit = f.per_qubit;
                    row.log_fidelity = f.log_total;
                    row.energy_per_qubit = obs.energy_per_qubit;
                    row.specific_heat_per_qubit = obs.specific_heat_per_qubit;
                } catch (const std::exception& e) {
                    solver_context(cfg.method, row.p, e);
                }
                out.rows.push_back(std::move(row));
            }
            break;
        }
        case Method::mc: {
            const bool keep = !cfg.dump_samples_path.empty();
            std::vector<MCIntegrationRow> mc_rows;
            try {
                mc_rows = fidelity_by_integration(g, noise, cfg.mc, keep);
            } catch (const std::exception& e) {
                throw std::runtime_error("solver (method=mc): " + std::string(e.what()));
            }
            std::string metastable, nonequilibrated;
            for (auto& mr : mc_rows) {
                SweepRow row;
                row.p = mr.p;
                row.beta = mr.beta;
                row.method = cfg.method;
                row.graph_descriptor = g.descriptor();
                row.seed = cfg.mc.seed;
                row.log_fidelity = mr.log_fidelity;
                row.fidelity_per_qubit = std::exp(mr.log_fidelity / n);
                row.err_fidelity = row.fidelity_per_qubit * mr.err_log_fidelity / n;
                row.energy_per_qubit = mr.energy.mean / n;
                row.err_energy = mr.energy.std_error / n;
                row.specific_heat_per_qubit = mr.specific_heat.mean / n;
                row.err_specific_heat = mr.specific_heat.std_error / n;
                if (mr.metastable) metastable += (metastable.empty() ? "" : ",") + fmt(mr.p);
                if (!mr.equilibrated)
                    nonequilibrated += (nonequilibrated.empty() ? "" : ",") + fmt(mr.p);
                if (keep) out.sample_dump.push_back(std::move(mr.samples));
                out.rows.push_back(std::move(row));
            }
            out.metadata.push_back("mc-config: sweeps=" + std::to_string(cfg.mc.sweeps) +
                                   " burn-in=" + std::to_string(cfg.mc.burn_in) +
                                   " thin=" + std::to_string(cfg.mc.thin) +
                                   " bins=" + std::to_string(cfg.mc.bins) +
                                   " seed=" + std::to_string(cfg.mc.seed));
            out.metadata.push_back(
                "mc-protocol: metropolis single-flip; cold+hot starts, half-chain "
                "agreement at 2 sigma with geometric burn-in doubling (max 5); "
                "thermodynamic integration anchored at beta=0, trapezoid tolerance 1e-3*n; "
                "rng mt19937-64 with splitmix64 streams keyed by (seed, beta, chain)");
            out.metadata.push_back("mc-metastable-points: [" + metastable + "]");
            out.metadata.push_back("mc-nonequilibrated-points: [" + nonequilibrated + "]");
            break;
        }
        case Method::mf: {
            const int k = cfg.graph_kind == "1d-cluster" ? 2
                          : cfg.graph_kind == "2d-regular" ? 4
                                                           : 6;
            out.metadata.push_back("mf: k=" + std::to_string(k) +
                                   " (hypercubic cluster state), minimizing branch");
            for (const auto& nm : noise) {
                SweepRow row;
                row.p = nm.p();
                row.beta = beta_or_inf(nm);
                row.method = cfg.method;
                row.graph_descriptor = g.descriptor();
                try {
                    row.fidelity_per_qubit = mf_fidelity(k, row.p);
                } catch (const std::exception& e) {
                    solver_context(cfg.method, row.p, e);
                }
                row.log_fidelity = n * std::log(row.fidelity_per_qubit);
                out.rows.push_back(std::move(row));
            }
            break;
        }
        case Method::closed_form: {
            for (const auto& nm : noise) {
                SweepRow row;
                row.p = nm.p();
                row.beta = beta_or_inf(nm);
                row.method = cfg.method;
                row.graph_descriptor = g.descriptor();
                try {
                    row.log_fidelity = log_fidelity_complete_closed_form(n, row.p);
                } catch (const std::exception& e) {
                    solver_context(cfg.method, row.p, e);
                }
                row.fidelity_per_qubit = std::exp(row.log_fidelity / n);
                out.rows.push_back(std::move(row));
            }
            break;
        }
    }

    // non-ferromagnetic couplings are valid inputs for the exact solvers but
    // the ground state is no longer all-down; record them
    if (!cfg.explicit_noise.empty()) {
        std::string flagged;
        for (const auto& nm : cfg.explicit_noise) {
            const double q = 1.0 - nm.p();
            if (nm.px > q || nm.py > q || nm.pz > q)
                flagged += (flagged.empty() ? "" : ",") + fmt(nm.p());
        }
        if (!flagged.empty())
            out.metadata.push_back("nonferromagnetic-couplings-at-p: [" + flagged + "]");
    }
    return out;
}

namespace {

void write_cell(std::ostream& out, const std::optional<double>& v) {
    if (v) out << fmt(*v);
}

}  // namespace

void write_csv(const std::vector<SweepRow>& rows, const std::vector<std::string>& metadata,
               std::ostream& out) {
    for (const auto& line : metadata) out << "# " << line << '\n';
    out << "p,beta,fidelity_per_qubit,log_fidelity,energy_per_qubit,"
           "specific_heat_per_qubit,err_fidelity,err_energy,err_specific_heat,"
           "method,graph_descriptor,seed\n";
    for (const auto& r : rows) {
        out << fmt(r.p) << ',' << fmt(r.beta) << ',' << fmt(r.fidelity_per_qubit) << ','
            << fmt(r.log_fidelity) << ',';
        write_cell(out, r.energy_per_qubit);
        out << ',';
        write_cell(out, r.specific_heat_per_qubit);
        out << ',' << fmt(r.err_fidelity) << ',' << fmt(r.err_energy) << ','
            << fmt(r.err_specific_heat) << ',' << to_string(r.method) << ','
            << r.graph_descriptor << ',';
        if (r.seed) out << *r.seed;
        out << '\n';
    }
}

void write_csv_file(const std::vector<SweepRow>& rows,
                    const std::vector<std::string>& metadata, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: keep '\n' endings everywhere
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    write_csv(rows, metadata, out);
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_sample_dump(const std::vector<std::vector<double>>& samples,
                       const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open sample dump file: " + path);
    std::uint64_t count = 0;
    for (const auto& s : samples) count += s.size();
    char header[8];
    for (int i = 0; i < 8; ++i) header[i] = static_cast<char>((count >> (8 * i)) & 0xff);
    out.write(header, 8);
    static_assert(sizeof(double) == 8);
    for (const auto& s : samples)
        out.write(reinterpret_cast<const char*>(s.data()),
                  static_cast<std::streamsize>(s.size() * sizeof(double)));
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace gsf
