#pragma once

#include <vector>

namespace blowlab {

/// Discretization request: uniform space grid on (0,1), time levels graded
/// toward T_stop = T * (1 - delta_stop_rel) by
///   t_k = T_stop * (1 - (1 - k/K)^{1/lambda_mesh}).
struct MeshSpec {
    int nx = 400;            ///< interior node count
    int num_steps = 800;     ///< K
    double lambda_mesh = 0.5;
    double delta_stop_rel = 1e-3;

    bool operator==(const MeshSpec&) const = default;
};

struct Mesh {
    std::vector<double> x; ///< nx+2 nodes, x[0] = 0, x[nx+1] = 1
    std::vector<double> t; ///< num_steps+1 strictly increasing levels, t[0] = 0
    double hx = 0.0;
    double t_stop = 0.0;
};

Mesh make_mesh(const MeshSpec& spec, double T);

} // namespace blowlab
