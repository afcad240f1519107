#pragma once

#include <vector>

#include "anoqrl/qmodel.hpp"
#include "anoqrl/rng.hpp"

namespace fixtures {

struct ModelInstance {
    anoqrl::QModelConfig config;
    anoqrl::QModelParams params;
    std::vector<double> features;
};

/// Random mode, qubit count in [1, max_qubits], locality, layer count in
/// [0, 2], output count, parameters and features in [-pi, pi].
inline ModelInstance random_instance(anoqrl::Rng &rng, std::size_t max_qubits) {
    ModelInstance inst;
    auto &c = inst.config;
    c.n_qubits = 1 + rng.index(max_qubits);
    c.mode = static_cast<anoqrl::ReadoutMode>(rng.index(3));
    c.locality = 1 + rng.index(c.n_qubits);
    c.n_layers = rng.index(3);
    c.n_outputs = 1 + rng.index(c.n_qubits);
    inst.params = anoqrl::init_params(c, rng);
    if (inst.params.ano) {
        // Widen the spectra well beyond the default initialisation.
        for (auto &hp : inst.params.ano->per_group) {
            for (auto *part : {&hp.diag, &hp.upper_re, &hp.upper_im}) {
                for (auto &v : *part) {
                    v = rng.uniform(-2.0, 2.0);
                }
            }
        }
    }
    inst.features.resize(c.n_qubits);
    for (auto &f : inst.features) {
        f = rng.uniform(-3.14159, 3.14159);
    }
    return inst;
}

} // namespace fixtures
