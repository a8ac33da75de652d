#pragma once

#include "misp/geometry.hpp"

#include <Eigen/Dense>

namespace misp {

/// Per-element basis of the discontinuous moment space M_h: one symmetric
/// tensor field per (scalar shape s, Voigt slot c), indexed i = 3 s + c.
/// Triangles carry 3x3 = 9 fields with P1 components and constant divergence;
/// quads carry 3x4 = 12 fields whose components are mapped Q1 and whose
/// divergence is rational via the chain rule.
class MomentBasis {
public:
    explicit MomentBasis(const BilinearMap& map) : map_(map), nv_(map.nv) {}

    int size() const { return 3 * nv_; }

    /// Voigt components (xx, yy, xy) of every basis field; rows are fields.
    Eigen::MatrixXd values(const Eigen::Vector2d& ref) const
    {
        const ShapeValues s = shape_eval(nv_, ref);
        Eigen::MatrixXd V = Eigen::MatrixXd::Zero(size(), 3);
        for (int k = 0; k < nv_; ++k)
            for (int c = 0; c < 3; ++c) V(3 * k + c, c) = s.N(k);
        return V;
    }

    /// div Q of every basis field; rows are fields.
    Eigen::MatrixXd divergence(const Eigen::Vector2d& ref) const
    {
        const Eigen::Matrix<double, 4, 2> G = physical_gradients(map_, ref);
        Eigen::MatrixXd D = Eigen::MatrixXd::Zero(size(), 2);
        for (int k = 0; k < nv_; ++k) {
            D(3 * k + 0, 0) = G(k, 0);                         // div(N e_xx) = (N_x, 0)
            D(3 * k + 1, 1) = G(k, 1);                         // div(N e_yy) = (0, N_y)
            D(3 * k + 2, 0) = G(k, 1);                         // div(N e_xy) = (N_y, N_x)
            D(3 * k + 2, 1) = G(k, 0);
        }
        return D;
    }

private:
    BilinearMap map_;
    int nv_;
};

} // namespace misp
