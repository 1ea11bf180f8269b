#include "gsf/pauli.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gsf/numeric.hpp"

namespace gsf {

namespace {

NoiseModel checked(const NoiseModel& noise) {
    if (noise.px < 0 || noise.py < 0 || noise.pz < 0 || noise.p() > 1.0 + 1e-15)
        throw std::invalid_argument("noise model: components must be >= 0 with px+py+pz <= 1");
    return noise;
}

}  // namespace

NoiseModel NoiseModel::depolarizing(double p) {
    if (p < 0.0 || p > 0.75)
        throw std::invalid_argument("depolarizing noise requires 0 <= p <= 3/4, got p=" +
                                    std::to_string(p));
    return {p / 3.0, p / 3.0, p / 3.0};
}

NoiseModel NoiseModel::iid(double px, double py, double pz) {
    return checked({px, py, pz});
}

bool NoiseModel::is_depolarizing(double tol) const {
    return std::abs(px - py) <= tol && std::abs(py - pz) <= tol;
}

char PauliString::site(int i) const {
    const int code = (xbits[i] << 1) | zbits[i];
    return "IZXY"[code];
}

std::uint64_t WeightHistogram::count(const WeightTriple& t) const {
    auto it = bins_.find(t);
    return it == bins_.end() ? 0 : it->second;
}

std::uint64_t WeightHistogram::total() const {
    std::uint64_t tot = 0;
    for (const auto& [t, c] : bins_) tot += c;
    return tot;
}

bool WeightHistogram::consistent() const {
    return n_ < 64 && total() == (std::uint64_t{1} << n_);
}

void WeightHistogram::write_csv(std::ostream& out) const {
    out << "mx,my,mz,count\n";
    for (const auto& [t, c] : bins_)
        out << t.mx << ',' << t.my << ',' << t.mz << ',' << c << '\n';
}

WeightHistogram WeightHistogram::read_csv(std::istream& in, int n) {
    WeightHistogram hist(n);
    std::string line;
    if (!std::getline(in, line) || line.rfind("mx,my,mz,count", 0) != 0)
        throw std::invalid_argument("weight histogram csv: missing header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        WeightTriple t;
        std::uint64_t c;
        char comma;
        if (!(ls >> t.mx >> comma >> t.my >> comma >> t.mz >> comma >> c))
            throw std::invalid_argument("weight histogram csv: bad row: " + line);
        hist.add(t, c);
    }
    return hist;
}

PauliString stabilizer_from_bits(const Graph& g, std::span<const std::uint8_t> ell) {
    const int n = g.n();
    if (static_cast<int>(ell.size()) != n)
        throw std::invalid_argument("stabilizer_from_bits: bit vector length " +
                                    std::to_string(ell.size()) + " != n=" + std::to_string(n));
    PauliString ps;
    ps.xbits.assign(ell.begin(), ell.end());
    ps.zbits.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        if (!ell[i]) continue;
        for (int j : g.neighbors(i)) ps.zbits[j] ^= 1;
    }
    return ps;
}

WeightTriple weight_of(const PauliString& ps) {
    WeightTriple w;
    for (int i = 0; i < ps.n(); ++i) {
        const int code = (ps.xbits[i] << 1) | ps.zbits[i];
        w.mx += code == 2;
        w.my += code == 3;
        w.mz += code == 1;
    }
    return w;
}

WeightHistogram enumerate_weights(const Graph& g, int cap) {
    const int n = g.n();
    if (n > cap)
        throw std::invalid_argument("enumerate_weights: n=" + std::to_string(n) +
                                    " exceeds the enumeration cap " + std::to_string(cap) +
                                    "; use the Monte Carlo solver for large graphs");

    WeightHistogram hist(n);
    std::vector<std::uint8_t> x(n, 0), z(n, 0);
    WeightTriple w;  // running counts for the current stabilizer

    // reclassify one site after its x or z bit changed
    auto unclassify = [&](int s) {
        const int code = (x[s] << 1) | z[s];
        w.mx -= code == 2;
        w.my -= code == 3;
        w.mz -= code == 1;
    };
    auto classify = [&](int s) {
        const int code = (x[s] << 1) | z[s];
        w.mx += code == 2;
        w.my += code == 3;
        w.mz += code == 1;
    };

    hist.add(w);  // ell = 0: the identity
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < total; ++k) {
        // Gray code: step k-1 -> k toggles generator ctz(k)
        const int i = std::countr_zero(k);
        unclassify(i);
        x[i] ^= 1;
        classify(i);
        for (int j : g.neighbors(i)) {
            unclassify(j);
            z[j] ^= 1;
            classify(j);
        }
        hist.add(w);
    }
    return hist;
}

double log_fidelity_from_weights(const WeightHistogram& hist, const NoiseModel& noise) {
    checked(noise);
    const int n = hist.n();
    const double p = noise.p();
    const double l1mp = std::log1p(-p);  // -inf at p = 1
    const double lx = std::log(noise.px);
    const double ly = std::log(noise.py);
    const double lz = std::log(noise.pz);

    std::vector<double> terms;
    terms.reserve(hist.bins().size());
    for (const auto& [t, c] : hist.bins()) {
        const int m = t.mx + t.my + t.mz;
        double lt = std::log(static_cast<double>(c));
        if (n - m > 0) lt += (n - m) * l1mp;
        // p_mu = 0 kills every bin with m_mu > 0 (and p = 1 every bin with m < n)
        if (t.mx > 0) lt += t.mx * lx;
        if (t.my > 0) lt += t.my * ly;
        if (t.mz > 0) lt += t.mz * lz;
        if (std::isnan(lt)) continue;  // 0 * -inf: bin has zero probability
        terms.push_back(lt);
    }
    return log_sum_exp(terms);
}

double log_fidelity_exact(const Graph& g, const NoiseModel& noise, int cap) {
    return log_fidelity_from_weights(enumerate_weights(g, cap), noise);
}

double fidelity_exact(const Graph& g, const NoiseModel& noise, int cap) {
    return std::exp(log_fidelity_exact(g, noise, cap));
}

double log_fidelity_complete_closed_form(int n, double p) {
    if (n < 1) throw std::invalid_argument("closed form: n must be >= 1");
    if (p < 0.0 || p > 0.75)
        throw std::invalid_argument("closed form: depolarizing p must be in [0, 3/4], got p=" +
                                    std::to_string(p));
    const double a = 1.0 - 2.0 * p / 3.0;
    const double b = 2.0 * p / 3.0;
    const double c = 1.0 - 4.0 * p / 3.0;  // >= 0 on [0, 3/4]
    const double logs[] = {
        n * std::log(a),
        b > 0 ? n * std::log(b) : kNegInf,
        c > 0 ? n * std::log(c) : kNegInf,
    };
    return log_sum_exp(logs) - std::log(2.0);
}

double fidelity_complete_closed_form(int n, double p) {
    return std::exp(log_fidelity_complete_closed_form(n, p));
}

}  // namespace gsf
