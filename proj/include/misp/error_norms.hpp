#pragma once

#include "misp/manufactured.hpp"
#include "misp/mesh.hpp"
#include "misp/solve.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace misp {

/// One row of the convergence tables: the five benchmark norms at a given
/// (family, mesh, t, n). The weighted shear norm uses (t + h_mesh) with
/// h_mesh the max element diameter, matching the tabulated convention.
struct ErrorRow {
    double h = 0.0;        ///< 1/n
    double h_mesh = 0.0;   ///< max element diameter
    double w_h1 = 0.0;     ///< |w - w_h|_1
    double beta_h1 = 0.0;  ///< |beta - beta_h|_1
    double M_l2 = 0.0;     ///< ||M - M_h||_0
    double gamma_l2 = 0.0; ///< ||gamma - gamma_h||_0
    double gamma_weighted = 0.0; ///< (t + h_mesh) ||gamma - gamma_h||_0

    std::array<double, 5> norms() const { return {w_h1, beta_h1, M_l2, gamma_l2, gamma_weighted}; }
};

/// H1-seminorm and L2 errors of a discrete solution against the exact fields.
/// The error quadrature defaults to degree 10 (the exact fields are high-degree
/// polynomials; the truncation must sit far below the table tolerances).
inline ErrorRow error_norms(const Mesh& mesh, const Solution& sol, const ManufacturedCase& mc,
                            int degree = 10)
{
    if (degree < 1) throw std::invalid_argument("error_norms: degree must be >= 1");
    const QuadratureRule rule = quadrature(
        mesh.family == ElementFamily::Triangular ? RefDomain::Triangle : RefDomain::Square, degree);

    double ew = 0.0, eb = 0.0, eM = 0.0, eg = 0.0, hmesh = 0.0;
    const int nv = mesh.vertices_per_element();
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const BilinearMap map = element_map(mesh, e);
        const MomentBasis basis(map);

        for (int a = 0; a < nv; ++a)
            for (int b = a + 1; b < nv; ++b)
                hmesh = std::max(hmesh, (mesh.nodes[mesh.elements[e][a]] -
                                         mesh.nodes[mesh.elements[e][b]]).norm());

        for (const QuadPoint& qp : rule.points) {
            const double wJ = qp.weight * map.jacobian(qp.ref);
            const Eigen::Vector2d x = map.map(qp.ref);

            const Eigen::Vector2d dgw = mc.grad_w(x) - sol.grad_w_at(mesh, e, qp.ref);
            ew += wJ * dgw.squaredNorm();

            const Eigen::Matrix2d dgb = mc.grad_beta(x) - sol.grad_beta_at(mesh, e, qp.ref);
            eb += wJ * dgb.squaredNorm();

            const Eigen::Vector3d dM = mc.moment_voigt(x) -
                                       Eigen::Vector3d(basis.values(qp.ref).transpose() * sol.moments[e]);
            eM += wJ * (dM(0) * dM(0) + dM(1) * dM(1) + 2.0 * dM(2) * dM(2));

            const Eigen::Vector2d dg = mc.shear(x) -
                                       Eigen::Vector2d(basis.divergence(qp.ref).transpose() * sol.moments[e]);
            eg += wJ * dg.squaredNorm();
        }
    }

    ErrorRow row;
    row.h = mesh.n > 0 ? 1.0 / mesh.n : hmesh;
    row.h_mesh = hmesh;
    row.w_h1 = std::sqrt(ew);
    row.beta_h1 = std::sqrt(eb);
    row.M_l2 = std::sqrt(eM);
    row.gamma_l2 = std::sqrt(eg);
    row.gamma_weighted = (mc.material.t + hmesh) * row.gamma_l2;
    return row;
}

/// Endpoint log-ratio rate over a doubling sequence: log2(e_1/e_k)/(k-1).
/// This is the formula the tabulated rates follow.
inline double convergence_rate(const std::vector<double>& errors)
{
    if (errors.size() < 2) throw std::invalid_argument("convergence_rate: need at least 2 errors");
    for (double e : errors)
        if (!(e > 0.0)) throw std::invalid_argument("convergence_rate: errors must be positive");
    return std::log2(errors.front() / errors.back()) / static_cast<double>(errors.size() - 1);
}

} // namespace misp
