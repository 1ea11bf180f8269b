#pragma once

namespace gsf {

// IID Pauli channel: X/Y/Z errors with probabilities px/py/pz per qubit.
struct NoiseModel {
    double px = 0.0;
    double py = 0.0;
    double pz = 0.0;

    double p() const { return px + py + pz; }

    // px = py = pz = p/3 with 0 <= p <= 3/4
    static NoiseModel depolarizing(double p);

    // general channel; each component in [0,1] and px+py+pz <= 1
    static NoiseModel iid(double px, double py, double pz);

    bool is_depolarizing(double tol = 1e-12) const;
};

}  // namespace gsf
