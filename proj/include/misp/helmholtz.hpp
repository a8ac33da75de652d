#pragma once

#include "misp/assembly.hpp"
#include "misp/mesh.hpp"
#include "misp/moment_basis.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace misp {

/// Witness of the discrete Helmholtz decomposition on triangular meshes:
/// div_h Q_h = grad s_h + curl_h q_h with s_h piecewise-linear continuous
/// (clamped) and q_h nonconforming P1 (edge-midpoint continuous, zero mean).
struct HelmholtzWitness {
    Eigen::VectorXd s;        ///< per-node coefficients (boundary rows zero)
    Eigen::VectorXd q;        ///< per-edge coefficients
    double relative_residual; ///< ||div_h Q - grad s - curl_h q||_0 / ||div_h Q||_0
};

/// Least-squares decomposition of div_h Q_h. All three fields are piecewise
/// constant vectors on triangles, so the L2 fit is exact elementwise algebra;
/// the zero-mean constraint on q is enforced by a multiplier.
inline HelmholtzWitness helmholtz_witness(const Mesh& mesh,
                                          const std::vector<Eigen::VectorXd>& Qh)
{
    if (mesh.family != ElementFamily::Triangular)
        throw std::invalid_argument("helmholtz_witness: triangular meshes only");
    if (static_cast<int>(Qh.size()) != mesh.num_elements())
        throw std::invalid_argument("helmholtz_witness: one coefficient vector per element expected");

    const DofMap interior = make_dof_map(mesh);
    const int ns = interior.num_free_nodes;
    const int nq = mesh.num_edges();
    const int nx = ns + nq;
    const int ne = mesh.num_elements();

    // Rows: 2 per element, scaled by sqrt(area). Columns: interior-node hat
    // gradients, then CR edge-function curls.
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2 * ne, nx);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * ne);
    Eigen::VectorXd mean_row = Eigen::VectorXd::Zero(nx);
    double tau_norm2 = 0.0;

    for (int e = 0; e < ne; ++e) {
        const BilinearMap map = element_map(mesh, e);
        const double area = 0.5 * map.J0;
        const double sq = std::sqrt(area);
        const auto Gp = physical_gradients(map, Eigen::Vector2d(1.0 / 3.0, 1.0 / 3.0));

        const MomentBasis basis(map);
        const Eigen::Vector2d tau =
            basis.divergence(Eigen::Vector2d(1.0 / 3.0, 1.0 / 3.0)).transpose() * Qh[e];
        rhs(2 * e) = sq * tau.x();
        rhs(2 * e + 1) = sq * tau.y();
        tau_norm2 += area * tau.squaredNorm();

        for (int k = 0; k < 3; ++k) {
            const int col = interior.free_index[mesh.elements[e][k]];
            if (col >= 0) {
                G(2 * e, col) = sq * Gp(k, 0);
                G(2 * e + 1, col) = sq * Gp(k, 1);
            }
        }
        for (int f = 0; f < 3; ++f) {
            // CR function of edge f: phi = 1 - 2 lambda_opp, opp = vertex (f+2)%3
            const int opp = (f + 2) % 3;
            const Eigen::Vector2d gphi(-2.0 * Gp(opp, 0), -2.0 * Gp(opp, 1));
            const int col = ns + mesh.element_edges[e][f];
            G(2 * e, col) += sq * gphi.y();      // curl q = (q_y, -q_x)
            G(2 * e + 1, col) += sq * (-gphi.x());
            mean_row(col) += area / 3.0;         // int_K phi_f = |K|/3
        }
    }

    // KKT system for min ||G x - rhs|| s.t. mean(q) = 0.
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nx + 1, nx + 1);
    kkt.topLeftCorner(nx, nx) = G.transpose() * G;
    kkt.topRightCorner(nx, 1) = mean_row;
    kkt.bottomLeftCorner(1, nx) = mean_row.transpose();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(nx + 1);
    b.head(nx) = G.transpose() * rhs;

    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    if (!lu.isInvertible())
        throw std::runtime_error("helmholtz_witness: singular normal equations (basis bug)");
    const Eigen::VectorXd x = lu.solve(b).head(nx);

    HelmholtzWitness witness;
    witness.s = Eigen::VectorXd::Zero(mesh.num_nodes());
    for (int node = 0; node < mesh.num_nodes(); ++node)
        if (interior.free_index[node] >= 0) witness.s(node) = x(interior.free_index[node]);
    witness.q = x.tail(nq);
    const double res2 = (G * x - rhs).squaredNorm();
    witness.relative_residual = tau_norm2 > 0.0 ? std::sqrt(res2 / tau_norm2) : std::sqrt(res2);
    return witness;
}

} // namespace misp
