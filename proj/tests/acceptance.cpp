// Acceptance suite: reproduces the published convergence tables and runs the
// operator/stability verification battery. Prints one PASS/FAIL line per
// criterion; exits nonzero if any criterion fails.

#include "misp/misp.hpp"

#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace misp;

namespace {

int g_failures = 0;

void report(int number, bool ok, const std::string& text)
{
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", number, text.c_str());
    if (!ok) ++g_failures;
}

struct TableRow {
    double values[5];
    double rate;
};
// rows: w_h1, beta_h1, M_l2, gamma_l2, gamma_weighted; columns n = 4..64
using Table = std::array<std::array<TableRow, 5>, 4>; // [t-index][norm]

const std::vector<double> kThicknesses = {1.0, 0.1, 0.001, 1e-8};
const std::vector<int> kSizes = {4, 8, 16, 32, 64};

const Table kTable1 = {{
    {{{{0.2834, 0.1679, 0.0877, 0.0443, 0.0222}, 0.9182},
      {{0.0820, 0.0461, 0.0238, 0.0120, 0.0060}, 0.9427},
      {{0.0070, 0.0033, 0.0015, 0.0008, 0.0004}, 1.0543},
      {{0.0882, 0.0525, 0.0275, 0.0139, 0.0070}, 0.9156},
      {{0.1194, 0.0618, 0.0299, 0.0145, 0.0071}, 1.0169}}},
    {{{{0.0132, 0.0066, 0.0032, 0.0016, 0.0008}, 1.0153},
      {{0.0824, 0.0460, 0.0238, 0.0120, 0.0060}, 0.9445},
      {{0.0069, 0.0032, 0.0015, 0.0008, 0.0004}, 1.0520},
      {{0.0851, 0.0501, 0.0270, 0.0138, 0.0070}, 0.9031},
      {{0.0386, 0.0139, 0.0051, 0.0020, 0.0008}, 1.3764}}},
    {{{{0.0112, 0.0053, 0.0025, 0.0012, 0.0006}, 1.0520},
      {{0.0838, 0.0463, 0.0238, 0.0120, 0.0060}, 0.9506},
      {{0.0070, 0.0033, 0.0016, 0.0008, 0.0004}, 1.0569},
      {{0.0840, 0.0496, 0.0294, 0.0166, 0.0094}, 0.7902},
      {{0.0298, 0.0088, 0.0026, 0.0007, 0.0002}, 1.7753}}},
    {{{{0.0112, 0.0053, 0.0025, 0.0012, 0.0006}, 1.0520},
      {{0.0838, 0.0463, 0.0238, 0.0120, 0.0060}, 0.9506},
      {{0.0070, 0.0033, 0.0016, 0.0008, 0.0004}, 1.0569},
      {{0.0840, 0.0497, 0.0294, 0.0167, 0.0097}, 0.7781},
      {{0.0297, 0.0088, 0.0026, 0.0007, 0.0002}, 1.7781}}},
}};

const Table kTable2 = {{
    {{{{0.2806, 0.1460, 0.0736, 0.0369, 0.0184}, 0.9819},
      {{0.0771, 0.0383, 0.0191, 0.0095, 0.0048}, 1.0039},
      {{0.0062, 0.0020, 0.0008, 0.0003, 0.0002}, 1.2977},
      {{0.0877, 0.0458, 0.0231, 0.0116, 0.0058}, 0.9799},
      {{0.1187, 0.0539, 0.0252, 0.0121, 0.0059}, 1.0812}}},
    {{{{0.0117, 0.0052, 0.0025, 0.0012, 0.0006}, 1.0610},
      {{0.0775, 0.0384, 0.0191, 0.0095, 0.0048}, 1.0057},
      {{0.0061, 0.0020, 0.0008, 0.0003, 0.0002}, 1.2957},
      {{0.0870, 0.0458, 0.0231, 0.0116, 0.0058}, 0.9771},
      {{0.0395, 0.0127, 0.0044, 0.0017, 0.0007}, 1.4504}}},
    {{{{0.0095, 0.0041, 0.0019, 0.0009, 0.0005}, 1.0896},
      {{0.0777, 0.0384, 0.0191, 0.0095, 0.0048}, 1.0065},
      {{0.0061, 0.0020, 0.0008, 0.0003, 0.0002}, 1.2944},
      {{0.0866, 0.0460, 0.0234, 0.0117, 0.0059}, 0.9704},
      {{0.0307, 0.0082, 0.0021, 0.0005, 0.0001}, 1.9555}}},
    {{{{0.0095, 0.0041, 0.0019, 0.0009, 0.0005}, 1.0896},
      {{0.0777, 0.0384, 0.0191, 0.0095, 0.0048}, 1.0065},
      {{0.0061, 0.0020, 0.0008, 0.0003, 0.0002}, 1.2944},
      {{0.0866, 0.0460, 0.0234, 0.0117, 0.0059}, 0.9703},
      {{0.0306, 0.0081, 0.0021, 0.0005, 0.0001}, 1.9703}}},
}};

const Table kTable3 = {{
    {{{{0.2873, 0.1693, 0.0881, 0.0445, 0.0223}, 0.9217},
      {{0.0924, 0.0528, 0.0255, 0.0122, 0.0060}, 0.9872},
      {{0.0066, 0.0032, 0.0012, 0.0005, 0.0002}, 1.1968},
      {{0.0899, 0.0531, 0.0277, 0.0140, 0.0070}, 0.9203},
      {{0.1285, 0.0645, 0.0306, 0.0147, 0.0072}, 1.0398}}},
    {{{{0.0118, 0.0064, 0.0031, 0.0015, 0.0008}, 0.9898},
      {{0.0834, 0.0496, 0.0253, 0.0122, 0.0060}, 0.9506},
      {{0.0065, 0.0031, 0.0012, 0.0005, 0.0002}, 1.1925},
      {{0.0930, 0.0574, 0.0285, 0.0141, 0.0070}, 0.9318},
      {{0.0493, 0.0181, 0.0059, 0.0022, 0.0009}, 1.4475}}},
    {{{{0.0096, 0.0051, 0.0024, 0.0012, 0.0006}, 1.0151},
      {{0.0835, 0.0475, 0.0245, 0.0120, 0.0060}, 0.9525},
      {{0.0066, 0.0032, 0.0013, 0.0006, 0.0003}, 1.1477},
      {{0.0947, 0.0702, 0.0470, 0.0355, 0.0310}, 0.4031},
      {{0.0408, 0.0152, 0.0051, 0.0019, 0.0009}, 1.3908}}},
    {{{{0.0096, 0.0051, 0.0024, 0.0012, 0.0006}, 1.0151},
      {{0.0835, 0.0475, 0.0245, 0.0120, 0.0060}, 0.9525},
      {{0.0066, 0.0032, 0.0013, 0.0006, 0.0003}, 1.1466},
      {{0.0947, 0.0703, 0.0470, 0.0356, 0.0315}, 0.3976},
      {{0.0407, 0.0151, 0.0051, 0.0019, 0.0008}, 1.3976}}},
}};

StudyConfig family_config(const char* element, const char* mesh)
{
    StudyConfig cfg;
    cfg.element = element;
    cfg.mesh = mesh;
    cfg.ns = kSizes;
    cfg.ts = kThicknesses;
    return cfg;
}

/// Printed values carry 4 decimals; tolerance is rel x printed + half an ulp
/// of the print.
bool value_matches(double computed, double printed, double rel)
{
    return std::abs(computed - printed) <= rel * printed + 0.00005;
}

bool check_table(const StudyResult& result, const Table& table, bool degraded_gamma,
                 std::string& detail)
{
    bool ok = true;
    for (std::size_t ti = 0; ti < result.series.size(); ++ti) {
        const StudySeries& s = result.series[ti];
        for (int norm = 0; norm < 5; ++norm) {
            const bool relaxed = degraded_gamma && norm == 3 && kThicknesses[ti] <= 0.001;
            const double rel = relaxed ? 0.10 : 0.05;
            for (std::size_t ni = 0; ni < s.rows.size(); ++ni) {
                const double got = s.rows[ni].norms()[norm];
                const double want = table[ti][norm].values[ni];
                if (!value_matches(got, want, rel)) {
                    ok = false;
                    detail += "\n    t=" + detail::fmt17(s.t) + " n=" + std::to_string(s.ns[ni]) +
                              " " + kNormNames[norm] + ": got " + detail::fmt4(got) + " want " +
                              detail::fmt4(want);
                }
            }
            const double rate_tol = relaxed ? 0.10 : 0.05;
            if (std::abs(s.rates[norm] - table[ti][norm].rate) > rate_tol) {
                ok = false;
                detail += "\n    t=" + detail::fmt17(s.t) + " rate " + kNormNames[norm] + ": got " +
                          detail::fmt4(s.rates[norm]) + " want " + detail::fmt4(table[ti][norm].rate);
            }
        }
    }
    return ok;
}

bool check_locking(const StudyResult& result, std::string& detail)
{
    // compare the n=64 row between t=0.001 and t=1e-8
    const StudySeries* thin = nullptr;
    const StudySeries* thinner = nullptr;
    for (const StudySeries& s : result.series) {
        if (s.t == 0.001) thin = &s;
        if (s.t == 1e-8) thinner = &s;
    }
    bool ok = true;
    for (int norm = 0; norm < 5; ++norm) {
        const double a = thin->rows.back().norms()[norm];
        const double b = thinner->rows.back().norms()[norm];
        const double rel = std::abs(a - b) / std::max(a, b);
        if (rel >= 0.01) {
            ok = false;
            detail += "\n    " + std::string(kNormNames[norm]) + ": " + detail::fmt17(a) + " vs " +
                      detail::fmt17(b) + " (" + detail::fmt4(100 * rel) + "%)";
        }
    }
    return ok;
}

double u01(std::mt19937& gen) { return (gen() >> 5) * 0x1.0p-27; }

} // namespace

int main()
{
    // ---- criteria 1-3: table reproduction (also exercises every Cholesky
    // factorization of the benchmark sweep for criterion 7) ----
    const StudyResult misp3 = run_study_in_memory(family_config("misp3", "uniform-tri"));
    {
        std::string detail;
        const bool ok = check_table(misp3, kTable1, false, detail);
        report(1, ok, "MiSP3 uniform-triangular table (20 cells x 5 norms, 5% + print ulp; rates +-0.05)" + detail);
    }

    const StudyResult misp4u = run_study_in_memory(family_config("misp4", "uniform-quad"));
    {
        std::string detail;
        const bool ok = check_table(misp4u, kTable2, false, detail);
        report(2, ok, "MiSP4 uniform-quadrilateral table (incl. weighted-shear rate 1.9703 +- 0.05)" + detail);
    }

    const StudyResult misp4t = run_study_in_memory(family_config("misp4", "trapezoid"));
    {
        std::string detail;
        const bool ok = check_table(misp4t, kTable3, true, detail);
        report(3, ok, "MiSP4 trapezoidal table (raw shear at t<=0.001: 10% values, rate 0.40 +- 0.10)" + detail);
    }

    // ---- criterion 4: locking-freeness at n=64 ----
    {
        std::string d3, d4;
        const bool ok3 = check_locking(misp3, d3);
        const bool ok4 = check_locking(misp4u, d4);
        report(4, ok3 && ok4,
               "locking-freeness: each norm at n=64 within 1% between t=0.001 and t=1e-8" +
                   (d3.empty() ? "" : "\n  MiSP3:" + d3) + (d4.empty() ? "" : "\n  MiSP4:" + d4));
    }

    // ---- criterion 5: reduction-operator identity suite ----
    {
        bool ok = true;
        std::string detail;
        for (const char* mesh_kind : {"uniform-tri", "uniform-quad", "trapezoid"}) {
            double prev = -1.0;
            for (int n : {4, 8, 16, 32}) {
                Mesh mesh = mesh_kind == std::string("uniform-tri") ? build_uniform_triangular(n)
                            : mesh_kind == std::string("uniform-quad")
                                ? build_uniform_quadrilateral(n)
                                : build_trapezoidal_quadrilateral(n);
                const RhIdentityReport rep = rh_identity_check(mesh, 50);
                if (rep.grad_identity > 1e-11 || rep.rot_identity > 1e-11) {
                    ok = false;
                    detail += "\n    " + std::string(mesh_kind) + " n=" + std::to_string(n) +
                              ": grad dev " + detail::fmt17(rep.grad_identity) + ", rot dev " +
                              detail::fmt17(rep.rot_identity);
                }
                const double err = reduction_approximation_error(mesh, smooth_hrot_field);
                if (prev > 0.0) {
                    const double ratio = prev / err;
                    if (ratio < 1.6 || ratio > 2.4) {
                        ok = false;
                        detail += "\n    " + std::string(mesh_kind) + " halving n=" +
                                  std::to_string(n) + ": ratio " + detail::fmt4(ratio);
                    }
                }
                prev = err;
            }
        }
        report(5, ok, "R_h identities (50 random fields/mesh, <=1e-11) and approximation halving" + detail);
    }

    // ---- criterion 6: discrete Helmholtz witness ----
    {
        bool ok = true;
        std::string detail;
        std::mt19937 gen(424242u);
        for (int n : {4, 8}) {
            const Mesh mesh = build_uniform_triangular(n);
            double worst = 0.0;
            for (int trial = 0; trial < 100; ++trial) {
                std::vector<Eigen::VectorXd> Qh;
                Qh.reserve(mesh.num_elements());
                for (int e = 0; e < mesh.num_elements(); ++e) {
                    Eigen::VectorXd c(9);
                    for (int i = 0; i < 9; ++i) c(i) = 2.0 * u01(gen) - 1.0;
                    Qh.push_back(c);
                }
                worst = std::max(worst, helmholtz_witness(mesh, Qh).relative_residual);
            }
            detail += " n=" + std::to_string(n) + ": " + detail::fmt17(worst);
            if (worst > 1e-10) ok = false;
        }
        report(6, ok, "discrete Helmholtz witness residual <= 1e-10 over 100 random fields;" + detail);
    }

    // ---- criterion 7: inf-sup stability probe ----
    {
        bool ok = true;
        std::string detail;
        for (const char* fam : {"misp3", "misp4"}) {
            double lo = 1e300, hi = 0.0;
            for (int n : {2, 4, 8, 16}) {
                const Mesh mesh = fam == std::string("misp3") ? build_uniform_triangular(n)
                                                              : build_uniform_quadrilateral(n);
                for (double t : {1.0, 0.01, 1e-4}) {
                    const double beta =
                        infsup_estimate(mesh, material_derive(1.0, 0.3, 5.0 / 6.0, t));
                    if (!(beta > 0.0)) ok = false;
                    lo = std::min(lo, beta);
                    hi = std::max(hi, beta);
                }
            }
            detail += std::string(" ") + fam + ": beta in [" + detail::fmt4(lo) + ", " +
                      detail::fmt4(hi) + "] ratio " + detail::fmt4(hi / lo) + ";";
            if (hi / lo > 3.0) ok = false;
        }
        report(7, ok,
               "inf-sup ratio <= 3 over n in {2,4,8,16}, t in {1,0.01,1e-4};" + detail +
                   " all 60 benchmark factorizations succeeded (criteria 1-3)");
    }

    // ---- criterion 8: manufactured-solution self-consistency ----
    {
        bool ok = true;
        std::string detail;
        double discrepancy = 0.0;
        for (double t : kThicknesses) {
            try {
                // construction validates both strong-form residuals at 100 points
                const ManufacturedCase mc =
                    manufactured_case(material_derive(1.0, 0.3, 5.0 / 6.0, t));
                discrepancy = std::max(discrepancy, printed_load_discrepancy(mc));
                std::mt19937 gen(171717u);
                for (int i = 0; i < 100; ++i) {
                    const double s = u01(gen);
                    for (const Eigen::Vector2d& p :
                         {Eigen::Vector2d(s, 0), Eigen::Vector2d(s, 1), Eigen::Vector2d(0, s),
                          Eigen::Vector2d(1, s)}) {
                        if (std::abs(mc.w(p)) > 1e-14 || mc.beta(p).norm() > 1e-14) ok = false;
                    }
                }
            } catch (const std::exception& err) {
                ok = false;
                detail += std::string("\n    t=") + detail::fmt17(t) + ": " + err.what();
            }
        }
        report(8, ok,
               "strong-form residuals <= 1e-8 and clamped traces <= 1e-14 for every t; "
               "printed-vs-derived load discrepancy = " + detail::fmt17(discrepancy) + detail);
    }

    // ---- criterion 9: end-to-end determinism ----
    {
        StudyConfig cfg; // defaults: misp3 full benchmark grid
        const StudyResult r1 = run_study_in_memory(cfg);
        const StudyResult r2 = run_study_in_memory(cfg);
        const bool ok = emit_csv(cfg, r1) == emit_csv(cfg, r2);
        report(9, ok, "two default-study runs produce byte-identical CSV");
    }

    std::printf("%d of 9 criteria passed\n", 9 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
