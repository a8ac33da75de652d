#pragma once

#include "misp/assembly.hpp"
#include "misp/manufactured.hpp"
#include "misp/mesh.hpp"
#include "misp/reduction.hpp"

#include <Eigen/Dense>

#include <functional>
#include <random>

namespace misp {

/// Max deviations of the reduction-operator identities over random discrete
/// fields: R_h(grad v_h) = grad v_h for both families, and elementwise
/// rot(R_h zeta_h) = rot(zeta_h) on triangles.
struct RhIdentityReport {
    double grad_identity = 0.0; ///< max |R_h(grad v_h) - grad v_h|
    double rot_identity = 0.0;  ///< max |rot(R_h zeta_h) - rot(zeta_h)| (triangles)
};

inline RhIdentityReport rh_identity_check(const Mesh& mesh, int trials, unsigned seed = 1234u)
{
    std::mt19937 gen(seed);
    auto rnd = [&] { return 2.0 * detail::unit_uniform(gen) - 1.0; };
    const int nv = mesh.vertices_per_element();
    const DofMap dofs = make_dof_map(mesh);

    std::vector<Eigen::MatrixXd> R;
    std::vector<TangentialBasis> Z;
    R.reserve(mesh.num_elements());
    Z.reserve(mesh.num_elements());
    for (int e = 0; e < mesh.num_elements(); ++e) {
        R.push_back(reduction_matrix(mesh, e));
        Z.emplace_back(mesh, e);
    }

    const Eigen::Vector2d probes[3] = {{0.21, 0.34}, {0.55, 0.12}, {0.08, 0.61}};

    RhIdentityReport rep;
    for (int trial = 0; trial < trials; ++trial) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(mesh.num_nodes());
        Eigen::MatrixXd zeta = Eigen::MatrixXd::Zero(mesh.num_nodes(), 2);
        for (int node = 0; node < mesh.num_nodes(); ++node)
            if (!mesh.boundary_node[node]) {
                v(node) = rnd();
                zeta(node, 0) = rnd();
                zeta(node, 1) = rnd();
            }

        for (int e = 0; e < mesh.num_elements(); ++e) {
            const BilinearMap map = element_map(mesh, e);
            Eigen::VectorXd local = Eigen::VectorXd::Zero(3 * nv);
            Eigen::VectorXd local_zeta = Eigen::VectorXd::Zero(3 * nv);
            for (int k = 0; k < nv; ++k) {
                const int node = mesh.elements[e][k];
                local(k) = v(node);
                local_zeta(nv + 2 * k + 0) = zeta(node, 0);
                local_zeta(nv + 2 * k + 1) = zeta(node, 1);
            }
            const Eigen::VectorXd cg = R[e] * local; // coefficients of R_h(grad v_h)

            for (const Eigen::Vector2d& pr : probes) {
                const Eigen::Vector2d ref = (nv == 3) ? pr : Eigen::Vector2d(2 * pr - Eigen::Vector2d(1, 1));
                Eigen::Vector2d grad_v = Eigen::Vector2d::Zero();
                const auto G = physical_gradients(map, ref);
                for (int k = 0; k < nv; ++k) grad_v += local(k) * G.row(k).transpose();
                rep.grad_identity = std::max(rep.grad_identity,
                                             (Z[e].evaluate(cg, ref) - grad_v).norm());
            }

            if (nv == 3) {
                // rot is constant on triangles: 2 x the (y,-x) span coefficient
                const Eigen::VectorXd cz = -(R[e] * local_zeta); // coefficients of R_h(zeta_h)
                const Eigen::VectorXd span = Z[e].span_coefficients(cz);
                const auto G = physical_gradients(map, Eigen::Vector2d(1.0 / 3.0, 1.0 / 3.0));
                double rot_zeta = 0.0;
                for (int k = 0; k < 3; ++k) {
                    const int node = mesh.elements[e][k];
                    rot_zeta += zeta(node, 0) * G(k, 1) - zeta(node, 1) * G(k, 0);
                }
                rep.rot_identity = std::max(rep.rot_identity, std::abs(2.0 * span(2) - rot_zeta));
            }
        }
    }
    return rep;
}

/// ||eta - R_h eta||_0 for a smooth tangentially-clamped field; halves under
/// mesh refinement (first-order approximation property of R_h).
inline double reduction_approximation_error(
    const Mesh& mesh, const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& eta,
    int degree = 8)
{
    const QuadratureRule rule = quadrature(
        mesh.family == ElementFamily::Triangular ? RefDomain::Triangle : RefDomain::Square, degree);
    double err2 = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const BilinearMap map = element_map(mesh, e);
        const TangentialBasis Z(mesh, e);
        const Eigen::VectorXd coeffs = edge_tangential_moments(mesh, e, eta, degree);
        for (const QuadPoint& qp : rule.points) {
            const Eigen::Vector2d diff = eta(map.map(qp.ref)) - Z.evaluate(coeffs, qp.ref);
            err2 += qp.weight * map.jacobian(qp.ref) * diff.squaredNorm();
        }
    }
    return std::sqrt(err2);
}

/// Default smooth probe field in H0(rot): tangential trace vanishes on the
/// unit-square boundary.
inline Eigen::Vector2d smooth_hrot_field(const Eigen::Vector2d& p)
{
    const double pi = 3.14159265358979323846;
    return {std::sin(pi * p.x()) * std::sin(pi * p.y()),
            p.x() * (1.0 - p.x()) * p.y() * (1.0 - p.y())};
}

} // namespace misp
