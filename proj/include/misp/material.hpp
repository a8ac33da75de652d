#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace misp {

/// Isotropic plate material. Symmetric 2x2 tensors are handled in Voigt form
/// (xx, yy, xy) with the off-diagonal stored once; tensor contractions M:Q use
/// the metric diag(1,1,2) so that the xy slot counts twice.
struct MaterialParams {
    double E;      ///< Young's modulus
    double nu;     ///< Poisson ratio
    double kappa;  ///< shear correction factor
    double t;      ///< plate thickness

    double lambda; ///< kappa E / (2(1+nu))

    Eigen::Matrix3d D;     ///< Voigt action of the bending tensor
    Eigen::Matrix3d Dinv;  ///< Voigt action of its inverse

    static Eigen::Matrix3d contraction_metric() { return Eigen::Vector3d(1, 1, 2).asDiagonal(); }

    /// Kernel of the a-form moment term: M : Dinv Q = m^T K q. Symmetric.
    Eigen::Matrix3d compliance_kernel() const { return contraction_metric() * Dinv; }
};

/// Derive lambda and the Voigt matrices. The bending tensor acts as
/// DQ = E/(12(1-nu^2)) [(1-nu) Q + nu tr(Q) I].
inline MaterialParams material_derive(double E, double nu, double kappa, double t)
{
    if (!(E > 0.0)) throw std::invalid_argument("material_derive: E must be positive");
    if (!(nu >= 0.0 && nu < 0.5)) throw std::invalid_argument("material_derive: need 0 <= nu < 0.5");
    if (!(kappa > 0.0)) throw std::invalid_argument("material_derive: kappa must be positive");
    if (!(t > 0.0)) throw std::invalid_argument("material_derive: t must be positive");

    MaterialParams m;
    m.E = E;
    m.nu = nu;
    m.kappa = kappa;
    m.t = t;
    m.lambda = kappa * E / (2.0 * (1.0 + nu));

    const double c = E / (12.0 * (1.0 - nu * nu));
    m.D << c, c * nu, 0.0,
           c * nu, c, 0.0,
           0.0, 0.0, c * (1.0 - nu);
    // closed form: Dinv Q = 12/E [(1+nu) Q - nu tr(Q) I]
    const double d = 12.0 / E;
    m.Dinv << d, -d * nu, 0.0,
              -d * nu, d, 0.0,
              0.0, 0.0, d * (1.0 + nu);
    return m;
}

} // namespace misp
