#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gsf/graph.hpp"
#include "gsf/monte_carlo.hpp"
#include "gsf/noise.hpp"

namespace gsf {

inline constexpr const char* kVersion = "1.0.0";

enum class Method { exact, spin_exact, transfer, mc, mf, closed_form };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

// One (p, observables) record; the CSV column order follows the field order.
struct SweepRow {
    double p = 0.0;
    double beta = 0.0;  // +inf at p = 0
    double fidelity_per_qubit = 0.0;
    double log_fidelity = 0.0;
    std::optional<double> energy_per_qubit;
    std::optional<double> specific_heat_per_qubit;
    double err_fidelity = 0.0;
    double err_energy = 0.0;
    double err_specific_heat = 0.0;
    Method method = Method::exact;
    std::string graph_descriptor;
    std::optional<std::uint64_t> seed;
};

struct RunConfig {
    std::string graph_kind;  // 1d-cluster | 2d-regular | 3d-regular | complete
    int n = 0;
    int nx = 0, ny = 0, nz = 0;
    int d = 0;  // 2d: degree 3..8; 3d: total degree 5..8

    Method method = Method::exact;

    // depolarizing grid (p_steps points, inclusive endpoints) ...
    double p_min = -1.0, p_max = -1.0;
    int p_steps = 0;
    // ... or explicit IID triples (exact, spin-exact and mc only)
    std::vector<NoiseModel> explicit_noise;

    MCConfig mc;
    std::string output_path;        // empty: stdout
    std::string dump_samples_path;  // mc only
    int enumeration_cap = kDefaultEnumerationCap;

    void validate() const;      // throws std::invalid_argument naming the rule
    Graph build_graph() const;  // builder preconditions re-checked by builders
    std::vector<NoiseModel> noise_points() const;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> metadata;              // preamble lines, no '#' prefix
    std::vector<std::vector<double>> sample_dump;   // per-row MC samples (on request)
};

SweepResult run_sweep(const RunConfig& cfg);

// '#'-prefixed metadata preamble, header line, then rows with 12 significant
// digits; absent fields stay empty.
void write_csv(const std::vector<SweepRow>& rows, const std::vector<std::string>& metadata,
               std::ostream& out);
void write_csv_file(const std::vector<SweepRow>& rows,
                    const std::vector<std::string>& metadata, const std::string& path);

// little-endian f64 array with an 8-byte length header
void write_sample_dump(const std::vector<std::vector<double>>& samples,
                       const std::string& path);

}  // namespace gsf
