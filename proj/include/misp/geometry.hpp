#pragma once

#include "misp/mesh.hpp"

#include <Eigen/Dense>

#include <array>
#include <stdexcept>

namespace misp {

/// Isoparametric map from the reference element onto a physical element,
///   x = a0 + a1 xi + a2 eta + a12 xi eta,   y likewise with b-coefficients.
/// Quads use the reference square [-1,1]^2; triangles embed as the affine map
/// (a12 = b12 = 0) from the unit reference triangle (0,0),(1,0),(0,1).
struct BilinearMap {
    Eigen::Vector4d a; ///< (a0, a1, a2, a12)
    Eigen::Vector4d b; ///< (b0, b1, b2, b12)
    int nv = 4;

    // Jacobian J(xi,eta) = J0 + J1 xi + J2 eta
    double J0 = 0, J1 = 0, J2 = 0;

    Eigen::Vector2d map(const Eigen::Vector2d& q) const
    {
        const double xi = q.x(), eta = q.y();
        return {a[0] + a[1] * xi + a[2] * eta + a[3] * xi * eta,
                b[0] + b[1] * xi + b[2] * eta + b[3] * xi * eta};
    }

    Eigen::Matrix2d jacobian_matrix(const Eigen::Vector2d& q) const
    {
        const double xi = q.x(), eta = q.y();
        Eigen::Matrix2d DF;
        DF << a[1] + a[3] * eta, a[2] + a[3] * xi,
              b[1] + b[3] * eta, b[2] + b[3] * xi;
        return DF;
    }

    double jacobian(const Eigen::Vector2d& q) const { return J0 + J1 * q.x() + J2 * q.y(); }

    bool is_affine() const { return a[3] == 0.0 && b[3] == 0.0; }
};

/// Build the map for a triangle or quad given CCW vertex coordinates.
/// Throws on a non-positive corner Jacobian (inverted element).
inline BilinearMap bilinear_map(const std::array<Eigen::Vector2d, 4>& v, int nv)
{
    BilinearMap m;
    m.nv = nv;
    if (nv == 3) {
        m.a << v[0].x(), v[1].x() - v[0].x(), v[2].x() - v[0].x(), 0.0;
        m.b << v[0].y(), v[1].y() - v[0].y(), v[2].y() - v[0].y(), 0.0;
    } else if (nv == 4) {
        Eigen::Matrix4d T;
        T << 1, 1, 1, 1,
             -1, 1, 1, -1,
             -1, -1, 1, 1,
             1, -1, 1, -1;
        Eigen::Vector4d xs(v[0].x(), v[1].x(), v[2].x(), v[3].x());
        Eigen::Vector4d ys(v[0].y(), v[1].y(), v[2].y(), v[3].y());
        m.a = 0.25 * T * xs;
        m.b = 0.25 * T * ys;
    } else {
        throw std::invalid_argument("bilinear_map: nv must be 3 or 4");
    }
    m.J0 = m.a[1] * m.b[2] - m.a[2] * m.b[1];
    m.J1 = m.a[1] * m.b[3] - m.a[3] * m.b[1];
    m.J2 = m.a[3] * m.b[2] - m.a[2] * m.b[3];

    if (nv == 3) {
        if (m.J0 <= 0.0) throw std::runtime_error("bilinear_map: inverted triangle");
    } else {
        const double corners[4][2] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
        for (const auto& c : corners)
            if (m.J0 + m.J1 * c[0] + m.J2 * c[1] <= 0.0)
                throw std::runtime_error("bilinear_map: non-positive corner Jacobian");
    }
    return m;
}

inline BilinearMap element_map(const Mesh& mesh, int e)
{
    const int nv = mesh.vertices_per_element();
    std::array<Eigen::Vector2d, 4> v{};
    for (int k = 0; k < nv; ++k) v[k] = mesh.nodes[mesh.elements[e][k]];
    return bilinear_map(v, nv);
}

/// Reference coordinates of the element vertices.
inline Eigen::Vector2d reference_vertex(int nv, int k)
{
    static const Eigen::Vector2d tri[3] = {{0, 0}, {1, 0}, {0, 1}};
    static const Eigen::Vector2d quad[4] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    return nv == 3 ? tri[k] : quad[k];
}

struct ShapeValues {
    Eigen::Matrix<double, 4, 1> N;        ///< basis values (top nv entries)
    Eigen::Matrix<double, 4, 2> grad_ref; ///< reference gradients (rows)
};

/// P1 (triangle) or Q1 (quad) nodal basis at a reference point.
inline ShapeValues shape_eval(int nv, const Eigen::Vector2d& q)
{
    ShapeValues s;
    s.N.setZero();
    s.grad_ref.setZero();
    const double xi = q.x(), eta = q.y();
    if (nv == 3) {
        s.N.head<3>() << 1.0 - xi - eta, xi, eta;
        s.grad_ref.topRows<3>() << -1, -1, 1, 0, 0, 1;
    } else {
        s.N << 0.25 * (1 - xi) * (1 - eta), 0.25 * (1 + xi) * (1 - eta),
               0.25 * (1 + xi) * (1 + eta), 0.25 * (1 - xi) * (1 + eta);
        s.grad_ref << -0.25 * (1 - eta), -0.25 * (1 - xi),
                      0.25 * (1 - eta), -0.25 * (1 + xi),
                      0.25 * (1 + eta), 0.25 * (1 + xi),
                      -0.25 * (1 + eta), 0.25 * (1 - xi);
    }
    return s;
}

/// Physical gradients of the nodal basis: rows grad N_k = DF^{-T} grad_ref N_k.
inline Eigen::Matrix<double, 4, 2> physical_gradients(const BilinearMap& map,
                                                      const Eigen::Vector2d& q)
{
    const ShapeValues s = shape_eval(map.nv, q);
    const Eigen::Matrix2d DFinv = map.jacobian_matrix(q).inverse();
    return s.grad_ref * DFinv; // (grad_ref * DF^{-1}) rows == DF^{-T} grad_ref
}

} // namespace misp
