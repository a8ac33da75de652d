#pragma once

#include "misp/assembly.hpp"
#include "misp/element_system.hpp"
#include "misp/mesh.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace misp {

/// Numerical inf-sup constant of the reduced coupling form in the
/// mesh-dependent norms (quadratic-form versions):
///   |||Q|||_{h,1}^2     = ||Q||_0^2 + (t+h)^2 ||div_h Q||_0^2
///   |||(v,z)|||_{h,2}^2 = ||eps(z)||_0^2 + (t+h)^{-2} ||R_h(grad v - z)||_0^2
/// beta^2 is the smallest eigenvalue of B N_m^{-1} B^T z = mu N_u z over free
/// displacement DOFs; N_m is block-diagonal over elements, so the moment
/// inverse never leaves the element. Dense eigensolve, intended for n <= 16.
inline double infsup_estimate(const Mesh& mesh, const MaterialParams& mat, int quad_degree = -1)
{
    const DofMap dofs = make_dof_map(mesh);
    const int n = dofs.size();
    if (n == 0) throw std::runtime_error("infsup_estimate: no free DOFs");

    const double weight = mat.t + quality_report(mesh).h;
    const int nv = mesh.vertices_per_element();
    const int degree = quad_degree > 0 ? quad_degree : default_assembly_degree(mesh.family);
    const QuadratureRule rule = quadrature(
        mesh.family == ElementFamily::Triangular ? RefDomain::Triangle : RefDomain::Square, degree);
    const Eigen::Matrix3d metric = MaterialParams::contraction_metric();

    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd Nu = Eigen::MatrixXd::Zero(n, n);
    auto zero_load = [](const Eigen::Vector2d&) { return 0.0; };

    for (int e = 0; e < mesh.num_elements(); ++e) {
        const BilinearMap map = element_map(mesh, e);
        const MomentBasis basis(map);
        const TangentialBasis zbasis(mesh, e);
        const Eigen::MatrixXd R = reduction_matrix(mesh, e);
        const ElementSystem sys = element_matrices(mesh, e, mat, zero_load, degree);

        const int nmom = basis.size();
        const int nloc = 3 * nv;
        Eigen::MatrixXd Nm = Eigen::MatrixXd::Zero(nmom, nmom);
        Eigen::MatrixXd eps_gram = Eigen::MatrixXd::Zero(nloc, nloc);
        Eigen::MatrixXd z_gram = Eigen::MatrixXd::Zero(nv, nv);

        for (const QuadPoint& qp : rule.points) {
            const double wJ = qp.weight * map.jacobian(qp.ref);
            const Eigen::MatrixXd V = basis.values(qp.ref);
            const Eigen::MatrixXd D = basis.divergence(qp.ref);
            Nm.noalias() += wJ * (V * metric * V.transpose() + weight * weight * (D * D.transpose()));

            const Eigen::Matrix<double, 4, 2> G = physical_gradients(map, qp.ref);
            Eigen::MatrixXd eps = Eigen::MatrixXd::Zero(nloc, 3);
            for (int k = 0; k < nv; ++k) {
                eps(nv + 2 * k + 0, 0) = G(k, 0);
                eps(nv + 2 * k + 0, 2) = 0.5 * G(k, 1);
                eps(nv + 2 * k + 1, 1) = G(k, 1);
                eps(nv + 2 * k + 1, 2) = 0.5 * G(k, 0);
            }
            eps_gram.noalias() += wJ * (eps * metric * eps.transpose());

            const Eigen::MatrixXd Zf = zbasis.fields(qp.ref);
            z_gram.noalias() += wJ * (Zf * Zf.transpose());
        }

        const Eigen::MatrixXd Nu_K =
            eps_gram + (R.transpose() * z_gram * R) / (weight * weight);
        const Eigen::MatrixXd K_K = sys.B * Nm.llt().solve(sys.B.transpose());

        const std::vector<int> l2g = local_to_global(mesh, dofs, e);
        for (int a = 0; a < nloc; ++a) {
            if (l2g[a] < 0) continue;
            for (int b = 0; b < nloc; ++b) {
                if (l2g[b] < 0) continue;
                K(l2g[a], l2g[b]) += K_K(a, b);
                Nu(l2g[a], l2g[b]) += Nu_K(a, b);
            }
        }
    }

    if (Eigen::LLT<Eigen::MatrixXd>(Nu).info() != Eigen::Success)
        throw std::runtime_error("infsup_estimate: displacement Gram matrix is not positive definite");

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Nu);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("infsup_estimate: generalized eigensolve failed");
    const double mu = es.eigenvalues()(0);
    return std::sqrt(std::max(mu, 0.0));
}

} // namespace misp
