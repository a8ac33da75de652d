#pragma once

#include "misp/element_system.hpp"
#include "misp/mesh.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <stdexcept>
#include <vector>

namespace misp {

/// Nodal DOF numbering over free (interior) nodes: 3 DOFs per node in the
/// order (w, bx, by), nodes ascending. Clamped boundary DOFs are eliminated.
struct DofMap {
    std::vector<int> free_index; ///< per node: free-node ordinal or -1 on the boundary
    int num_free_nodes = 0;

    int dof(int node, int comp) const
    {
        const int fi = free_index[node];
        return fi < 0 ? -1 : 3 * fi + comp;
    }
    int size() const { return 3 * num_free_nodes; }
};

inline DofMap make_dof_map(const Mesh& mesh)
{
    DofMap dm;
    dm.free_index.assign(mesh.num_nodes(), -1);
    for (int i = 0; i < mesh.num_nodes(); ++i)
        if (!mesh.boundary_node[i]) dm.free_index[i] = dm.num_free_nodes++;
    return dm;
}

/// Local-to-global map for one element, following the ElementSystem DOF order.
inline std::vector<int> local_to_global(const Mesh& mesh, const DofMap& dofs, int elem)
{
    const int nv = mesh.vertices_per_element();
    std::vector<int> l2g(3 * nv, -1);
    for (int k = 0; k < nv; ++k) {
        const int node = mesh.elements[elem][k];
        l2g[k] = dofs.dof(node, 0);
        l2g[nv + 2 * k + 0] = dofs.dof(node, 1);
        l2g[nv + 2 * k + 1] = dofs.dof(node, 2);
    }
    return l2g;
}

/// Condensed global system S u = F over free DOFs, with per-element recovery
/// maps retained for the moment field.
struct GlobalSystem {
    Eigen::SparseMatrix<double> S;
    Eigen::VectorXd F;
    DofMap dofs;
    std::vector<Eigen::MatrixXd> recovery; ///< G_K per element
};

/// Assemble S = sum_K scatter(S_K), F = sum_K scatter(f_K) in ascending
/// element order (bit-reproducible). Sign convention: the condensed system is
/// S u = F with F_j = +int g v_j.
inline GlobalSystem assemble(const Mesh& mesh, const MaterialParams& mat,
                             const std::function<double(const Eigen::Vector2d&)>& load,
                             int quad_degree = -1)
{
    GlobalSystem gs;
    gs.dofs = make_dof_map(mesh);
    const int n = gs.dofs.size();
    if (n == 0) throw std::runtime_error("assemble: no free DOFs (every node is clamped)");

    gs.F = Eigen::VectorXd::Zero(n);
    gs.recovery.reserve(mesh.num_elements());
    std::vector<Eigen::Triplet<double>> triplets;

    for (int e = 0; e < mesh.num_elements(); ++e) {
        ElementSystem sys = element_matrices(mesh, e, mat, load, quad_degree);
        condense(sys);
        gs.recovery.push_back(sys.G);

        const std::vector<int> l2g = local_to_global(mesh, gs.dofs, e);
        const int nloc = static_cast<int>(l2g.size());
        for (int a = 0; a < nloc; ++a) {
            if (l2g[a] < 0) continue;
            gs.F(l2g[a]) += sys.f(a);
            for (int b = 0; b < nloc; ++b)
                if (l2g[b] >= 0) triplets.emplace_back(l2g[a], l2g[b], sys.S(a, b));
        }
    }

    gs.S.resize(n, n);
    gs.S.setFromTriplets(triplets.begin(), triplets.end());
    gs.S.makeCompressed();
    return gs;
}

/// Gather the full local displacement vector of an element (clamped DOFs are zero).
inline Eigen::VectorXd gather_local(const Mesh& mesh, const DofMap& dofs,
                                    const Eigen::VectorXd& u, int elem)
{
    const std::vector<int> l2g = local_to_global(mesh, dofs, elem);
    Eigen::VectorXd loc = Eigen::VectorXd::Zero(l2g.size());
    for (std::size_t a = 0; a < l2g.size(); ++a)
        if (l2g[a] >= 0) loc(a) = u(l2g[a]);
    return loc;
}

} // namespace misp
