#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace misp {

/// Reference domains for volume quadrature. The triangle is the unit simplex
/// {(x,y): x,y >= 0, x+y <= 1}; the square is [-1,1]^2.
enum class RefDomain { Triangle, Square };

struct QuadPoint {
    Eigen::Vector2d ref;
    double weight;
};

/// Quadrature rule on a reference domain. `degree` is the declared polynomial
/// exactness: total degree on triangles, per-variable degree on squares.
struct QuadratureRule {
    RefDomain domain;
    int degree;
    std::vector<QuadPoint> points;
};

/// Gauss-Legendre nodes/weights on [-1,1], computed from the Jacobi matrix
/// (Golub-Welsch). Deterministic ordering: nodes ascending.
inline void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w)
{
    if (m < 1) throw std::invalid_argument("gauss_legendre: need m >= 1");
    if (m == 1) {
        x = {0.0};
        w = {2.0};
        return;
    }
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (int k = 1; k < m; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = b;
        J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    x.resize(m);
    w.resize(m);
    for (int i = 0; i < m; ++i) {
        x[i] = es.eigenvalues()(i);
        const double v0 = es.eigenvectors()(0, i);
        w[i] = 2.0 * v0 * v0;
    }
}

/// Gauss rule on [0,1] exact for polynomials of degree <= 2m-1.
inline void gauss_01(int m, std::vector<double>& x, std::vector<double>& w)
{
    gauss_legendre(m, x, w);
    for (int i = 0; i < m; ++i) {
        x[i] = 0.5 * (x[i] + 1.0);
        w[i] *= 0.5;
    }
}

namespace detail {

inline QuadratureRule triangle_rule(int degree)
{
    QuadratureRule rule{RefDomain::Triangle, degree, {}};
    if (degree <= 1) {
        rule.points.push_back({{1.0 / 3.0, 1.0 / 3.0}, 0.5});
        return rule;
    }
    if (degree == 2) {
        // classical symmetric 3-point rule
        const double a = 2.0 / 3.0, b = 1.0 / 6.0, w = 1.0 / 6.0;
        rule.points.push_back({{a, b}, w});
        rule.points.push_back({{b, a}, w});
        rule.points.push_back({{b, b}, w});
        return rule;
    }
    // Conical product: map [0,1]^2 -> triangle, (u,v) -> (u(1-v), v) with
    // measure factor (1-v). Exact when the u-rule covers degree d and the
    // v-rule covers degree d+1.
    const int mu = (degree + 2) / 2;
    const int mv = (degree + 3) / 2;
    std::vector<double> xu, wu, xv, wv;
    gauss_01(mu, xu, wu);
    gauss_01(mv, xv, wv);
    for (int j = 0; j < mv; ++j)
        for (int i = 0; i < mu; ++i) {
            const double u = xu[i], v = xv[j];
            rule.points.push_back({{u * (1.0 - v), v}, wu[i] * wv[j] * (1.0 - v)});
        }
    return rule;
}

inline QuadratureRule square_rule(int degree)
{
    const int m = (degree + 2) / 2;
    std::vector<double> x, w;
    gauss_legendre(m, x, w);
    QuadratureRule rule{RefDomain::Square, degree, {}};
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            rule.points.push_back({{x[i], x[j]}, w[i] * w[j]});
    return rule;
}

} // namespace detail

/// Build a quadrature rule of the requested exactness (degree <= 20).
inline QuadratureRule quadrature(RefDomain domain, int degree)
{
    if (degree < 0 || degree > 20)
        throw std::invalid_argument("quadrature: supported degrees are 0..20");
    return domain == RefDomain::Triangle ? detail::triangle_rule(degree)
                                         : detail::square_rule(degree);
}

} // namespace misp
