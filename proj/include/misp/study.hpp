#pragma once

#include "misp/error_norms.hpp"
#include "misp/helmholtz.hpp"
#include "misp/infsup.hpp"
#include "misp/manufactured.hpp"
#include "misp/rh_checks.hpp"
#include "misp/solve.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace misp {

/// Configuration of a convergence study. Defaults reproduce the benchmark
/// grid: n in {4,...,64}, t in {1, 0.1, 0.001, 1e-8}, E=1, nu=0.3, kappa=5/6.
struct StudyConfig {
    std::string element = "misp3";        ///< misp3 | misp4
    std::string mesh = "uniform-tri";     ///< uniform-tri | uniform-quad | trapezoid
    std::vector<int> ns = {4, 8, 16, 32, 64};
    std::vector<double> ts = {1.0, 0.1, 0.001, 1e-8};
    double E = 1.0;
    double nu = 0.3;
    double kappa = 5.0 / 6.0;
    std::string out_dir = ".";
    std::vector<std::string> formats = {"csv", "markdown"};
    std::vector<std::string> checks;      ///< subset of {rh, helmholtz, infsup}
    int quad_degree = -1;                 ///< assembly quadrature override
    int err_degree = 10;
    bool dump_meshes = false;
};

inline constexpr std::array<const char*, 5> kNormNames = {"w_h1", "beta_h1", "M_l2", "gamma_l2",
                                                          "gamma_weighted"};
inline constexpr std::array<const char*, 5> kNormLabels = {
    "|w-w_h|_1", "|beta-beta_h|_1", "||M-M_h||_0", "||gamma-gamma_h||_0",
    "(t+h)||gamma-gamma_h||_0"};

struct StudySeries {
    double t = 0.0;
    std::vector<int> ns;
    std::vector<ErrorRow> rows;
    std::array<double, 5> rates{}; ///< valid when ns.size() >= 2
};

struct StudyResult {
    std::vector<StudySeries> series;
    bool checks_passed = true;
    std::vector<std::string> check_log;
    double load_discrepancy = 0.0; ///< printed vs derived g, max relative
};

inline void validate(const StudyConfig& cfg)
{
    if (cfg.element != "misp3" && cfg.element != "misp4")
        throw std::invalid_argument("study: unknown element '" + cfg.element + "'");
    if (cfg.mesh != "uniform-tri" && cfg.mesh != "uniform-quad" && cfg.mesh != "trapezoid")
        throw std::invalid_argument("study: unknown mesh family '" + cfg.mesh + "'");
    if (cfg.element == "misp3" && cfg.mesh != "uniform-tri")
        throw std::invalid_argument("study: misp3 requires the uniform-tri mesh");
    if (cfg.element == "misp4" && cfg.mesh == "uniform-tri")
        throw std::invalid_argument("study: misp4 requires a quadrilateral mesh family");
    if (cfg.ns.empty() || cfg.ts.empty())
        throw std::invalid_argument("study: empty n or t list");
    for (const auto& c : cfg.checks)
        if (c != "rh" && c != "helmholtz" && c != "infsup")
            throw std::invalid_argument("study: unknown check '" + c + "'");
}

inline Mesh build_study_mesh(const StudyConfig& cfg, int n)
{
    if (cfg.mesh == "uniform-tri") return build_uniform_triangular(n);
    if (cfg.mesh == "uniform-quad") return build_uniform_quadrilateral(n);
    return build_trapezoidal_quadrilateral(n);
}

namespace detail {

inline std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string fmt4(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

inline void run_checks(const StudyConfig& cfg, StudyResult& result)
{
    auto log = [&](bool ok, const std::string& line) {
        result.check_log.push_back(std::string(ok ? "PASS " : "FAIL ") + line);
        if (!ok) result.checks_passed = false;
    };
    const auto want = [&](const char* name) {
        for (const auto& c : cfg.checks)
            if (c == name) return true;
        return false;
    };

    if (want("rh")) {
        double prev_err = -1.0;
        for (int n : cfg.ns) {
            const Mesh mesh = build_study_mesh(cfg, n);
            const RhIdentityReport rep = rh_identity_check(mesh, 50);
            log(rep.grad_identity <= 1e-11,
                "rh grad identity n=" + std::to_string(n) + " dev=" + fmt17(rep.grad_identity));
            if (mesh.family == ElementFamily::Triangular)
                log(rep.rot_identity <= 1e-11,
                    "rh rot identity n=" + std::to_string(n) + " dev=" + fmt17(rep.rot_identity));
            const double err = reduction_approximation_error(mesh, smooth_hrot_field);
            if (prev_err > 0.0) {
                const double ratio = prev_err / err;
                log(ratio > 1.6 && ratio < 2.4,
                    "rh approximation halving n=" + std::to_string(n) + " ratio=" + fmt4(ratio));
            }
            prev_err = err;
        }
    }

    if (want("helmholtz")) {
        if (cfg.element != "misp3") {
            log(false, "helmholtz check requires misp3/uniform-tri");
        } else {
            std::mt19937 gen(99173u);
            for (int n : cfg.ns) {
                if (n > 16) continue; // dense witness solve
                const Mesh mesh = build_study_mesh(cfg, n);
                double worst = 0.0;
                for (int trial = 0; trial < 100; ++trial) {
                    std::vector<Eigen::VectorXd> Qh;
                    Qh.reserve(mesh.num_elements());
                    for (int e = 0; e < mesh.num_elements(); ++e) {
                        Eigen::VectorXd c(9);
                        for (int i = 0; i < 9; ++i) c(i) = 2.0 * misp::detail::unit_uniform(gen) - 1.0;
                        Qh.push_back(c);
                    }
                    worst = std::max(worst, helmholtz_witness(mesh, Qh).relative_residual);
                }
                log(worst <= 1e-10,
                    "helmholtz witness n=" + std::to_string(n) + " residual=" + fmt17(worst));
            }
        }
    }

    if (want("infsup")) {
        const MaterialParams base = material_derive(cfg.E, cfg.nu, cfg.kappa, 1.0);
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        bool any = false;
        for (int n : cfg.ns) {
            if (n > 16) continue; // dense eigensolve bound
            const Mesh mesh = build_study_mesh(cfg, n);
            for (double t : cfg.ts) {
                const MaterialParams mat = material_derive(cfg.E, cfg.nu, cfg.kappa, t);
                const double beta = infsup_estimate(mesh, mat, cfg.quad_degree);
                any = true;
                lo = std::min(lo, beta);
                hi = std::max(hi, beta);
                log(beta > 0.0, "infsup n=" + std::to_string(n) + " t=" + fmt17(t) +
                                    " beta=" + fmt17(beta));
            }
        }
        if (!any)
            log(false, "infsup: no mesh size <= 16 in the n list");
        else
            log(hi / lo <= 3.0, "infsup ratio max/min=" + fmt4(hi / lo));
        (void)base;
    }
}

} // namespace detail

/// Run the configured study: solve every (t, n) cell, compute the five norms
/// and the endpoint rates, and run the enabled verification checks.
inline StudyResult run_study_in_memory(const StudyConfig& cfg)
{
    validate(cfg);
    StudyResult result;

    for (double t : cfg.ts) {
        StudySeries series;
        series.t = t;
        const MaterialParams mat = material_derive(cfg.E, cfg.nu, cfg.kappa, t);
        const ManufacturedCase mc = manufactured_case(mat);
        if (result.load_discrepancy == 0.0) result.load_discrepancy = printed_load_discrepancy(mc);
        for (int n : cfg.ns) {
            const Mesh mesh = build_study_mesh(cfg, n);
            const GlobalSystem gs =
                assemble(mesh, mat, [&](const Eigen::Vector2d& p) { return mc.load(p); },
                         cfg.quad_degree);
            const Eigen::VectorXd u = solve(gs);
            const Solution sol = recover_fields(mesh, gs, u);
            series.rows.push_back(error_norms(mesh, sol, mc, cfg.err_degree));
            series.ns.push_back(n);
        }
        if (series.ns.size() >= 2) {
            for (int k = 0; k < 5; ++k) {
                std::vector<double> errs;
                for (const ErrorRow& row : series.rows) errs.push_back(row.norms()[k]);
                series.rates[k] = convergence_rate(errs);
            }
        }
        result.series.push_back(std::move(series));
    }

    detail::run_checks(cfg, result);
    return result;
}

/// CSV of record: data lines at full precision, then a rates block.
inline std::string emit_csv(const StudyConfig& cfg, const StudyResult& result)
{
    if (result.series.empty()) throw std::invalid_argument("emit_csv: empty report");
    std::string out =
        "element,mesh,t,n,h,err_w_h1,err_beta_h1,err_M_l2,err_gamma_l2,err_gamma_weighted\n";
    for (const StudySeries& s : result.series)
        for (std::size_t i = 0; i < s.rows.size(); ++i) {
            const ErrorRow& r = s.rows[i];
            out += cfg.element + ',' + cfg.mesh + ',' + detail::fmt17(s.t) + ',' +
                   std::to_string(s.ns[i]) + ',' + detail::fmt17(r.h);
            for (double v : r.norms()) out += ',' + detail::fmt17(v);
            out += '\n';
        }
    out += "# rates\nelement,mesh,t,norm,rate\n";
    for (const StudySeries& s : result.series) {
        if (s.ns.size() < 2) continue;
        for (int k = 0; k < 5; ++k)
            out += cfg.element + ',' + cfg.mesh + ',' + detail::fmt17(s.t) + ',' + kNormNames[k] +
                   ',' + detail::fmt17(s.rates[k]) + '\n';
    }
    return out;
}

/// Display tables mirroring the benchmark layout: one per thickness, rows are
/// norms, columns the mesh sizes plus the rate, rounded to 4 decimals.
inline std::string emit_markdown(const StudyConfig& cfg, const StudyResult& result)
{
    if (result.series.empty()) throw std::invalid_argument("emit_markdown: empty report");
    std::ostringstream os;
    os << "# " << cfg.element << " on " << cfg.mesh << " mesh\n";
    for (const StudySeries& s : result.series) {
        os << "\n## t = " << detail::fmt17(s.t) << "\n\n|  |";
        for (int n : s.ns) os << ' ' << n << "x" << n << " |";
        if (s.ns.size() >= 2) os << " rate |";
        os << "\n|---|";
        for (std::size_t i = 0; i < s.ns.size(); ++i) os << "---|";
        if (s.ns.size() >= 2) os << "---|";
        os << '\n';
        for (int k = 0; k < 5; ++k) {
            os << "| " << kNormLabels[k] << " |";
            for (const ErrorRow& r : s.rows) os << ' ' << detail::fmt4(r.norms()[k]) << " |";
            if (s.ns.size() >= 2) os << ' ' << detail::fmt4(s.rates[k]) << " |";
            os << '\n';
        }
    }
    return os.str();
}

/// Run the study and write the report files (and optional mesh dumps) into
/// cfg.out_dir. Returns the in-memory result; callers map checks_passed to
/// the process exit status.
inline StudyResult run_study(const StudyConfig& cfg)
{
    StudyResult result = run_study_in_memory(cfg);

    auto write_file = [&](const std::string& name, const std::string& content) {
        const std::string path = cfg.out_dir + "/" + name;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("run_study: cannot write " + path);
        os << content;
    };

    const std::string stem = cfg.element + "-" + cfg.mesh;
    for (const auto& fmt : cfg.formats) {
        if (fmt == "csv")
            write_file(stem + ".csv", emit_csv(cfg, result));
        else if (fmt == "markdown")
            write_file(stem + ".md", emit_markdown(cfg, result));
        else
            throw std::invalid_argument("run_study: unknown format '" + fmt + "'");
    }
    if (cfg.dump_meshes)
        for (int n : cfg.ns) {
            std::ostringstream os;
            dump_mesh(build_study_mesh(cfg, n), os);
            write_file("mesh-" + cfg.mesh + "-n" + std::to_string(n) + ".txt", os.str());
        }
    return result;
}

} // namespace misp
