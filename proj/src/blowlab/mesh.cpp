#include "blowlab/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace blowlab {

Mesh make_mesh(const MeshSpec& spec, double T) {
    if (spec.nx < 3)
        throw std::invalid_argument("make_mesh: nx must be >= 3");
    if (spec.num_steps < 1)
        throw std::invalid_argument("make_mesh: num_steps must be >= 1");
    if (!(spec.lambda_mesh > 0.0) || !(spec.lambda_mesh <= 1.0))
        throw std::invalid_argument("make_mesh: lambda_mesh must lie in (0, 1]");
    if (!(spec.delta_stop_rel > 0.0) || !(spec.delta_stop_rel < 1.0))
        throw std::invalid_argument("make_mesh: delta_stop_rel must lie in (0, 1)");

    Mesh m;
    m.hx = 1.0 / (spec.nx + 1);
    m.x.resize(spec.nx + 2);
    for (int i = 0; i <= spec.nx + 1; ++i)
        m.x[i] = i * m.hx;
    m.x.back() = 1.0;

    m.t_stop = T * (1.0 - spec.delta_stop_rel);
    const int K = spec.num_steps;
    m.t.resize(K + 1);
    for (int k = 0; k <= K; ++k) {
        const double frac = static_cast<double>(K - k) / K;
        m.t[k] = m.t_stop * (1.0 - std::pow(frac, 1.0 / spec.lambda_mesh));
    }
    m.t.front() = 0.0;
    m.t.back() = m.t_stop;

    for (int k = 1; k <= K; ++k)
        if (!(m.t[k] > m.t[k - 1]))
            throw std::invalid_argument("make_mesh: graded levels collapsed; reduce num_steps or raise lambda_mesh");
    return m;
}

} // namespace blowlab
