#pragma once

#include "misp/geometry.hpp"
#include "misp/mesh.hpp"
#include "misp/quadrature.hpp"

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>

namespace misp {

/// A point on an element edge, as seen by edge quadrature: reference and
/// physical coordinates plus the unnormalized tangent dx/dp of the traversal.
struct EdgePoint {
    Eigen::Vector2d ref;
    Eigen::Vector2d phys;
    Eigen::Vector2d dxdp;
};

/// Straight trace of local edge f of an element, traversed in the global
/// (lower node -> higher node) direction, parametrized by p in [0,1].
class EdgeTrace {
public:
    EdgeTrace(const Mesh& mesh, int elem, int f)
    {
        const int nv = mesh.vertices_per_element();
        map_ = element_map(mesh, elem);
        const auto [la, lb] = mesh.local_edge_vertices(f);
        ref_a_ = reference_vertex(nv, la);
        ref_b_ = reference_vertex(nv, lb);
        if (mesh.edge_signs[elem][f] < 0) std::swap(ref_a_, ref_b_);
    }

    EdgePoint at(double p) const
    {
        EdgePoint ep;
        ep.ref = ref_a_ + p * (ref_b_ - ref_a_);
        ep.phys = map_.map(ep.ref);
        ep.dxdp = map_.jacobian_matrix(ep.ref) * (ref_b_ - ref_a_);
        return ep;
    }

private:
    BilinearMap map_;
    Eigen::Vector2d ref_a_, ref_b_;
};

/// integral over the edge of psi . t ds == integral of psi(x(p)) . x'(p) dp.
/// Exact for polynomial tangential traces up to the requested degree.
inline double edge_tangential_moment(const EdgeTrace& trace,
                                     const std::function<Eigen::Vector2d(const EdgePoint&)>& field,
                                     int degree = 3)
{
    std::vector<double> x, w;
    gauss_01((degree + 2) / 2, x, w);
    double s = 0.0;
    for (std::size_t q = 0; q < x.size(); ++q) {
        const EdgePoint ep = trace.at(x[q]);
        s += w[q] * field(ep).dot(ep.dxdp);
    }
    return s;
}

/// Per-edge tangential integrals of a physical-coordinate field evaluator.
inline Eigen::VectorXd edge_tangential_moments(
    const Mesh& mesh, int elem,
    const std::function<Eigen::Vector2d(const Eigen::Vector2d&)>& field, int degree = 3)
{
    const int ne = mesh.vertices_per_element();
    Eigen::VectorXd mom(ne);
    for (int f = 0; f < ne; ++f)
        mom(f) = edge_tangential_moment(EdgeTrace(mesh, elem, f),
                                        [&](const EdgePoint& ep) { return field(ep.phys); }, degree);
    return mom;
}

/// Element-local basis of the tangential-edge space Z_h, dual to the oriented
/// edge functionals psi -> integral over e of psi . t_e ds.
///
/// Triangles span the lowest-order edge (Whitney) fields {(1,0),(0,1),(y,-x)}
/// in physical coordinates; quads span the covariant-mapped fields
/// DF^{-T} {(1,0),(eta,0),(0,1),(0,xi)}.
class TangentialBasis {
public:
    TangentialBasis(const Mesh& mesh, int elem)
        : map_(element_map(mesh, elem)), ne_(mesh.vertices_per_element())
    {
        Eigen::MatrixXd duality(ne_, ne_);
        for (int f = 0; f < ne_; ++f) {
            EdgeTrace trace(mesh, elem, f);
            for (int s = 0; s < ne_; ++s)
                duality(f, s) = edge_tangential_moment(
                    trace, [&](const EdgePoint& ep) { return span_field(s, ep.ref); }, 3);
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(duality);
        if (!lu.isInvertible())
            throw std::runtime_error("TangentialBasis: degenerate element geometry");
        dual_coeffs_ = lu.inverse();
    }

    int size() const { return ne_; }

    /// Spanning field s of Z_h|_K at a reference point, in physical components.
    Eigen::Vector2d span_field(int s, const Eigen::Vector2d& ref) const
    {
        if (ne_ == 3) {
            const Eigen::Vector2d x = map_.map(ref);
            switch (s) {
            case 0: return {1.0, 0.0};
            case 1: return {0.0, 1.0};
            default: return {x.y(), -x.x()};
            }
        }
        Eigen::Vector2d psi_ref;
        switch (s) {
        case 0: psi_ref = {1.0, 0.0}; break;
        case 1: psi_ref = {ref.y(), 0.0}; break;
        case 2: psi_ref = {0.0, 1.0}; break;
        default: psi_ref = {0.0, ref.x()}; break;
        }
        return map_.jacobian_matrix(ref).inverse().transpose() * psi_ref;
    }

    /// Basis field dual to oriented edge functional f, at a reference point.
    Eigen::Vector2d field(int f, const Eigen::Vector2d& ref) const
    {
        Eigen::Vector2d value = Eigen::Vector2d::Zero();
        for (int s = 0; s < ne_; ++s) value += dual_coeffs_(s, f) * span_field(s, ref);
        return value;
    }

    /// All basis fields at once: row f is field f. Cheaper than repeated field().
    Eigen::MatrixXd fields(const Eigen::Vector2d& ref) const
    {
        Eigen::MatrixXd span(ne_, 2);
        for (int s = 0; s < ne_; ++s) span.row(s) = span_field(s, ref).transpose();
        return dual_coeffs_.transpose() * span;
    }

    /// Field with given oriented-edge coefficients at a reference point.
    Eigen::Vector2d evaluate(const Eigen::VectorXd& coeffs, const Eigen::Vector2d& ref) const
    {
        return fields(ref).transpose() * coeffs;
    }

    /// Spanning-set coordinates of a field given by edge coefficients.
    Eigen::VectorXd span_coefficients(const Eigen::VectorXd& coeffs) const
    {
        return dual_coeffs_ * coeffs;
    }

private:
    BilinearMap map_;
    int ne_;
    Eigen::MatrixXd dual_coeffs_; ///< column f = dual field f in span coordinates
};

/// Matrix of the element-local reduction R_h(grad v - zeta): rows are oriented
/// edge coefficients, columns the local displacement DOFs ordered
/// (w_1..w_nv, b1x, b1y, ..., bnvx, bnvy). Entry (f, j) is the tangential
/// integral of (grad v_j - zeta_j) over edge f.
inline Eigen::MatrixXd reduction_matrix(const Mesh& mesh, int elem)
{
    const int nv = mesh.vertices_per_element();
    const BilinearMap map = element_map(mesh, elem);
    Eigen::MatrixXd R(nv, 3 * nv);
    for (int f = 0; f < nv; ++f) {
        EdgeTrace trace(mesh, elem, f);
        for (int k = 0; k < nv; ++k) {
            R(f, k) = edge_tangential_moment(trace, [&](const EdgePoint& ep) {
                return Eigen::Vector2d(physical_gradients(map, ep.ref).row(k));
            });
            for (int c = 0; c < 2; ++c)
                R(f, nv + 2 * k + c) = edge_tangential_moment(trace, [&](const EdgePoint& ep) {
                    Eigen::Vector2d zeta = Eigen::Vector2d::Zero();
                    zeta(c) = -shape_eval(nv, ep.ref).N(k);
                    return zeta;
                });
        }
    }
    return R;
}

} // namespace misp
