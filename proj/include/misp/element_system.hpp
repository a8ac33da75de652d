#pragma once

#include "misp/material.hpp"
#include "misp/mesh.hpp"
#include "misp/moment_basis.hpp"
#include "misp/quadrature.hpp"
#include "misp/reduction.hpp"

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>

namespace misp {

/// Default assembly quadrature: exact on triangles; 3x3 Gauss on quads
/// (exact on parallelograms, the established choice on general quads where
/// the mapped integrands are rational).
inline int default_assembly_degree(ElementFamily family)
{
    return family == ElementFamily::Triangular ? 4 : 5;
}

/// Element blocks of the condensed hybrid scheme. Local displacement DOFs are
/// ordered (w_1..w_nv, b1x, b1y, ..., bnvx, bnvy); moment DOFs follow the
/// MomentBasis indexing.
struct ElementSystem {
    Eigen::MatrixXd A;   ///< moment-moment block, SPD
    Eigen::MatrixXd B;   ///< displacement x moment coupling
    Eigen::VectorXd f;   ///< load vector, nonzero only on w DOFs
    Eigen::MatrixXd S;   ///< condensed stiffness B A^{-1} B^T (filled by condense)
    Eigen::MatrixXd G;   ///< moment recovery -A^{-1} B^T (filled by condense)
};

/// Assemble A_K, B_K and f_K:
///   A_ij = int M_i : Dinv M_j + (t^2/lambda) int div M_i . div M_j
///   B_ji = int M_i : eps(zeta_j) - int div M_i . R_h(grad v_j - zeta_j)
///   f_j  = int g v_j
inline ElementSystem element_matrices(const Mesh& mesh, int elem, const MaterialParams& mat,
                                      const std::function<double(const Eigen::Vector2d&)>& load,
                                      int quad_degree = -1)
{
    const int nv = mesh.vertices_per_element();
    const int nmom = 3 * nv;
    const int ndisp = 3 * nv;
    const BilinearMap map = element_map(mesh, elem);
    const MomentBasis basis(map);
    const TangentialBasis zbasis(mesh, elem);
    const Eigen::MatrixXd R = reduction_matrix(mesh, elem);

    const int degree = quad_degree > 0 ? quad_degree : default_assembly_degree(mesh.family);
    const QuadratureRule rule = quadrature(
        mesh.family == ElementFamily::Triangular ? RefDomain::Triangle : RefDomain::Square, degree);

    const Eigen::Matrix3d Ka = mat.compliance_kernel();
    const Eigen::Matrix3d metric = MaterialParams::contraction_metric();
    const double shear_weight = mat.t * mat.t / mat.lambda;

    ElementSystem sys;
    sys.A = Eigen::MatrixXd::Zero(nmom, nmom);
    Eigen::MatrixXd E = Eigen::MatrixXd::Zero(ndisp, nmom);  // int M_i : eps(zeta_j)
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(nmom, nv);     // int div M_i . z_f
    sys.f = Eigen::VectorXd::Zero(ndisp);

    for (const QuadPoint& qp : rule.points) {
        const double wJ = qp.weight * map.jacobian(qp.ref);
        const Eigen::MatrixXd V = basis.values(qp.ref);
        const Eigen::MatrixXd D = basis.divergence(qp.ref);
        sys.A.noalias() += wJ * (V * Ka * V.transpose() + shear_weight * (D * D.transpose()));

        const ShapeValues sv = shape_eval(nv, qp.ref);
        const Eigen::Matrix<double, 4, 2> G = physical_gradients(map, qp.ref);
        Eigen::MatrixXd eps = Eigen::MatrixXd::Zero(ndisp, 3); // Voigt eps of each DOF's zeta
        for (int k = 0; k < nv; ++k) {
            eps(nv + 2 * k + 0, 0) = G(k, 0);
            eps(nv + 2 * k + 0, 2) = 0.5 * G(k, 1);
            eps(nv + 2 * k + 1, 1) = G(k, 1);
            eps(nv + 2 * k + 1, 2) = 0.5 * G(k, 0);
        }
        E.noalias() += wJ * (eps * metric * V.transpose());
        T.noalias() += wJ * (D * zbasis.fields(qp.ref).transpose());

        const double g = load(map.map(qp.ref));
        for (int k = 0; k < nv; ++k) sys.f(k) += wJ * g * sv.N(k);
    }

    sys.B = E - R.transpose() * T.transpose();
    return sys;
}

/// Static condensation: S_K = B_K A_K^{-1} B_K^T and the recovery map
/// G_K = -A_K^{-1} B_K^T, via Cholesky of the SPD moment block.
inline void condense(ElementSystem& sys)
{
    Eigen::LLT<Eigen::MatrixXd> llt(sys.A);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("condense: moment block is not SPD (degenerate geometry or material)");
    sys.G = -llt.solve(sys.B.transpose());
    sys.S = -sys.B * sys.G;
}

} // namespace misp
