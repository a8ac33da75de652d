#pragma once

#include "misp/material.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace misp {

namespace poly {
// 1D building blocks of the benchmark solution, in factored form so the
// clamped boundary values are exact zeros in floating point.
inline double A(double x) { return std::pow(x * x - x, 3); }              // x^3 (x-1)^3
inline double Ap(double x) { return 3.0 * std::pow(x * x - x, 2) * (2 * x - 1); }
inline double App(double x) { return 6.0 * (x * x - x) * (5 * x * x - 5 * x + 1); }
inline double U(double x) { return (x * x - x) * (5 * x * x - 5 * x + 1); } // = App/6
inline double Up(double x) { return ((20 * x - 30) * x + 12) * x - 1; }
inline double B(double x) { return std::pow(x * x - x, 2) * (2 * x - 1); } // = Ap/3
inline double V(double x) { return 5 * x * x - 5 * x + 1; }                // = u''/12
} // namespace poly

/// The clamped-plate benchmark solution on the unit square:
///   beta = grad phi,  phi = (100/3) x^3(x-1)^3 y^3(y-1)^3,
///   w = phi + t^2 w1,  w1 = -(200 c / lambda) S,  S = A(y)U(x) + A(x)U(y),
/// so the shear gamma = lambda t^{-2}(grad w - beta) = -200 c grad S is
/// polynomial and thickness-independent, and the load g = -div gamma. All
/// evaluators are closed-form polynomials, well conditioned down to t = 1e-8.
class ManufacturedCase {
public:
    MaterialParams material;

    double w(const Eigen::Vector2d& p) const
    {
        return (100.0 / 3.0) * poly::A(p.x()) * poly::A(p.y()) +
               material.t * material.t * w1(p);
    }

    Eigen::Vector2d grad_w(const Eigen::Vector2d& p) const
    {
        return beta(p) + material.t * material.t * grad_w1(p);
    }

    Eigen::Vector2d beta(const Eigen::Vector2d& p) const
    {
        return {100.0 * poly::B(p.x()) * poly::A(p.y()),
                100.0 * poly::A(p.x()) * poly::B(p.y())};
    }

    /// Rows: (grad b1; grad b2). Symmetric since beta is a gradient field.
    Eigen::Matrix2d grad_beta(const Eigen::Vector2d& p) const
    {
        const double x = p.x(), y = p.y();
        Eigen::Matrix2d gb;
        gb << 200.0 * poly::U(x) * poly::A(y), 300.0 * poly::B(x) * poly::B(y),
              300.0 * poly::B(x) * poly::B(y), 200.0 * poly::A(x) * poly::U(y);
        return gb;
    }

    /// Exact moment tensor M = -D eps(beta) in Voigt components.
    Eigen::Vector3d moment_voigt(const Eigen::Vector2d& p) const
    {
        const double x = p.x(), y = p.y();
        const double H11 = 200.0 * poly::U(x) * poly::A(y);
        const double H22 = 200.0 * poly::A(x) * poly::U(y);
        const double H12 = 300.0 * poly::B(x) * poly::B(y);
        const double c = bending_scale();
        const double nu = material.nu;
        return {-c * (H11 + nu * H22), -c * (nu * H11 + H22), -c * (1.0 - nu) * H12};
    }

    /// Exact shear gamma = -200 c grad S (thickness-independent).
    Eigen::Vector2d shear(const Eigen::Vector2d& p) const
    {
        return -200.0 * bending_scale() * grad_S(p);
    }

    /// grad w - beta, with the t^2 factor kept symbolic: returns t^2 * grad w1
    /// evaluated without cancellation.
    Eigen::Vector2d shear_defect(const Eigen::Vector2d& p) const
    {
        return material.t * material.t * grad_w1(p);
    }

    /// Transverse load derived from the strong form: g = -div gamma = 200 c lap S.
    double load(const Eigen::Vector2d& p) const
    {
        return 200.0 * bending_scale() * laplacian_S(p);
    }

    /// The tabulated closed form of the load, kept for cross-checking.
    double load_printed(const Eigen::Vector2d& p) const
    {
        const double x = p.x(), y = p.y();
        const double c = 200.0 * material.E / (1.0 - material.nu * material.nu);
        return c * (poly::A(x) * poly::V(y) + poly::A(y) * poly::V(x) +
                    x * (x - 1) * y * (y - 1) * poly::V(x) * poly::V(y));
    }

    /// First model equation -div D eps(beta) - gamma, evaluated through the
    /// beta derivatives (left term) and the S derivatives (right term).
    Eigen::Vector2d residual_bending(const Eigen::Vector2d& p) const
    {
        return -div_D_eps_beta(p) - shear(p);
    }

    /// Second model equation -div gamma - g with g the printed closed form.
    double residual_shear(const Eigen::Vector2d& p) const
    {
        return load(p) - load_printed(p);
    }

    Eigen::Vector2d div_D_eps_beta(const Eigen::Vector2d& p) const
    {
        const double x = p.x(), y = p.y();
        // second derivatives of beta
        const double b1xx = 200.0 * poly::Up(x) * poly::A(y);
        const double b1xy = 600.0 * poly::U(x) * poly::B(y);
        const double b1yy = 600.0 * poly::B(x) * poly::U(y);
        const double b2xx = 600.0 * poly::U(x) * poly::B(y);
        const double b2xy = 600.0 * poly::B(x) * poly::U(y);
        const double b2yy = 200.0 * poly::A(x) * poly::Up(y);
        const double c = bending_scale(), nu = material.nu;
        return {c * (b1xx + nu * b2xy) + 0.5 * c * (1.0 - nu) * (b1yy + b2xy),
                0.5 * c * (1.0 - nu) * (b1xy + b2xx) + c * (nu * b1xy + b2yy)};
    }

private:
    friend ManufacturedCase manufactured_case(const MaterialParams&);

    double bending_scale() const { return material.E / (12.0 * (1.0 - material.nu * material.nu)); }

    double S(const Eigen::Vector2d& p) const
    {
        return poly::A(p.y()) * poly::U(p.x()) + poly::A(p.x()) * poly::U(p.y());
    }

    Eigen::Vector2d grad_S(const Eigen::Vector2d& p) const
    {
        const double x = p.x(), y = p.y();
        return {poly::A(y) * poly::Up(x) + poly::Ap(x) * poly::U(y),
                poly::Ap(y) * poly::U(x) + poly::A(x) * poly::Up(y)};
    }

    double laplacian_S(const Eigen::Vector2d& p) const
    {
        const double x = p.x(), y = p.y();
        return 12.0 * (poly::A(y) * poly::V(x) + poly::A(x) * poly::V(y) +
                       (x * x - x) * (y * y - y) * poly::V(x) * poly::V(y));
    }

    double w1(const Eigen::Vector2d& p) const
    {
        return -(200.0 * bending_scale() / material.lambda) * S(p);
    }

    Eigen::Vector2d grad_w1(const Eigen::Vector2d& p) const
    {
        return -(200.0 * bending_scale() / material.lambda) * grad_S(p);
    }
};

namespace detail {
/// Portable [0,1) uniform from mt19937 (distribution classes are not
/// reproducible across standard libraries).
inline double unit_uniform(std::mt19937& gen)
{
    return static_cast<double>(gen() >> 5) * 0x1.0p-27;
}
} // namespace detail

/// Build and self-validate the benchmark case: clamped traces vanish exactly,
/// and the two strong-form residuals vanish to 1e-8 of the local term scale at
/// 100 pseudo-random points. Throws with the offending location otherwise.
inline ManufacturedCase manufactured_case(const MaterialParams& material)
{
    ManufacturedCase mc;
    mc.material = material;

    std::mt19937 gen(20240601u);
    double scale_a = 0.0, scale_b = 0.0;
    double worst_a = 0.0, worst_b = 0.0;
    Eigen::Vector2d where_a = Eigen::Vector2d::Zero(), where_b = Eigen::Vector2d::Zero();
    for (int i = 0; i < 100; ++i) {
        const Eigen::Vector2d p(detail::unit_uniform(gen), detail::unit_uniform(gen));
        scale_a = std::max({scale_a, mc.div_D_eps_beta(p).norm(), mc.shear(p).norm()});
        scale_b = std::max({scale_b, std::abs(mc.load(p)), std::abs(mc.load_printed(p))});
        const double ra = mc.residual_bending(p).norm();
        const double rb = std::abs(mc.residual_shear(p));
        if (ra > worst_a) { worst_a = ra; where_a = p; }
        if (rb > worst_b) { worst_b = rb; where_b = p; }
    }
    if (worst_a > 1e-8 * scale_a)
        throw std::runtime_error("manufactured_case: bending residual " + std::to_string(worst_a) +
                                 " at (" + std::to_string(where_a.x()) + ", " +
                                 std::to_string(where_a.y()) + ")");
    if (worst_b > 1e-8 * scale_b)
        throw std::runtime_error("manufactured_case: shear residual " + std::to_string(worst_b) +
                                 " at (" + std::to_string(where_b.x()) + ", " +
                                 std::to_string(where_b.y()) + ")");
    return mc;
}

/// Max relative difference between the derived and printed load over a fixed
/// 100-point sample; reported by the study runner.
inline double printed_load_discrepancy(const ManufacturedCase& mc)
{
    std::mt19937 gen(77201u);
    double scale = 0.0, worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Eigen::Vector2d p(detail::unit_uniform(gen), detail::unit_uniform(gen));
        scale = std::max(scale, std::abs(mc.load(p)));
        worst = std::max(worst, std::abs(mc.load(p) - mc.load_printed(p)));
    }
    return scale > 0.0 ? worst / scale : 0.0;
}

} // namespace misp
