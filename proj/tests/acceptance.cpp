// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "support.hpp"
#include "twistloop/errors.hpp"
#include "twistloop/pipeline.hpp"
#include "twistloop/report.hpp"

using namespace twistloop;
namespace fs = std::filesystem;
using clk = std::chrono::steady_clock;

namespace {

const cplx kShapes[] = {{-0.19373, 0.90574}, {0.80627, 0.90574}, {-0.19373, 0.90574}, {0.35508, 0.35232}, {0.35508, 0.35232}};
const cplx kAlpha(31.45667, 9.44217);
const cplx kInitials[] = {{1.0, 0.0}, {0.26938, -0.65395}, {0.64492, -0.35232}};
const cplx kC15[] = {{-0.06329, -0.80677}, {0.26938, -0.65395}, {1.0, 0.0}, {1.0, 0.0}, {0.64492, -0.35232}};

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << detail << "\n";
    if (!ok) ++failures;
}

// max over components of |Re| and |Im| differences
double comp_dev(cplx a, cplx b) { return std::max(std::abs(a.real() - b.real()), std::abs(a.imag() - b.imag())); }

std::string sci(double x) {
    std::ostringstream s;
    s.precision(2);
    s << std::scientific << x;
    return s.str();
}

struct Run {
    int code;
    std::string out;
};

Run run_cli(const std::string& args) {
    const std::string cmd = std::string(TWISTLOOP_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    const int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

void criterion1() {
    const auto t0 = clk::now();
    const Run r = run_cli("--format json solve R2L3");
    const double secs = std::chrono::duration<double>(clk::now() - t0).count();
    if (r.code != 0) return report(1, false, "solve R2L3 exited " + std::to_string(r.code));
    const json j = json::parse(r.out);
    const auto z = cplx_list_from_json(j.at("shapes"));
    double dev = z.size() == 5 ? 0.0 : INFINITY;
    for (size_t k = 0; k < z.size() && k < 5; ++k) dev = std::max(dev, comp_dev(z[k], kShapes[k]));
    const double vdev = std::abs(j.at("volume").get<double>() - 4.17775);
    report(1, dev < 1e-4 && vdev < 1e-4 && secs < 1.0,
           "shapes dev " + sci(dev) + ", volume dev " + sci(vdev) + ", runtime " + sci(secs) + " s");
}

void criterion2(const RLWord& w, const ShapeSolution& s) {
    const LaurentPoly t = one_loop_det_x(w, s).tau_normalized;
    const cplx expect[] = {1.0, -kAlpha, kAlpha, -1.0};
    double dev = t.min_exponent() == 0 && t.max_exponent() == 3 ? 0.0 : INFINITY;
    for (int k = 0; k < 4; ++k) dev = std::max(dev, comp_dev(t.coeff(k), expect[k]));
    report(2, dev < 1e-4, "route A coefficient dev " + sci(dev));
}

void criterion3(const PtolemyAssignment& p) {
    double best = INFINITY;
    for (double sign : {1.0, -1.0}) {
        const cplx scale = sign * p.c[5];
        double dev = 0;
        for (int k = 0; k < 3; ++k) dev = std::max(dev, comp_dev(p.c[5 + k] / scale, kInitials[k]));
        for (int k = 0; k < 5; ++k) dev = std::max(dev, comp_dev(p.c[k] / scale, kC15[k]));
        best = std::min(best, dev);
    }
    report(3, best < 1e-4, "initials and c1..c5 dev " + sci(best));
}

void criterion4(const RLWord& w, const ShapeSolution& s, const PtolemyAssignment& p) {
    const AlexanderResult c = alexander_polynomial(w, p);
    const UnitAlignment al = compare_up_to_unit(one_loop_det_x(w, s).tau, c.tau, 1e-8);
    const LaurentPoly n = normalize_unit(c.tau);
    const cplx expect[] = {1.0, -kAlpha, kAlpha, -1.0};
    double dev = 0;
    for (int k = 0; k < 4; ++k) dev = std::max(dev, comp_dev(n.coeff(k), expect[k]));
    report(4, al.matched && al.relative_deviation < 1e-8 && dev < 1e-4,
           "A vs C dev " + sci(al.relative_deviation) + ", printed polynomial dev " + sci(dev));
}

struct Solved {
    RLWord w;
    ShapeSolution s;
    PtolemyAssignment p;
    ComparisonReport r;
};

void criterion5(const std::vector<BatchEntry>& batch, double secs) {
    double worst = 0;
    bool all_ran = true;
    for (const auto& e : batch) {
        if (!e.ok) {
            all_ran = false;
            continue;
        }
        for (const auto* a : {&e.report.a_vs_cbig, &e.report.a_vs_c, &e.report.cbig_vs_c})
            worst = std::max(worst, a->matched ? a->relative_deviation : INFINITY);
    }
    report(5, all_ran && batch.size() >= 25 && worst < 1e-8 && secs < 60.0,
           std::to_string(batch.size()) + " words, worst pairwise dev " + sci(worst) + ", runtime " + sci(secs) + " s");
}

void criterion6(const std::vector<Solved>& all) {
    double tau1 = 0, pal = 0, detj = 0, dimj = 0, fricke = 0, glue = 0;
    for (const auto& x : all) {
        const LaurentPoly& t = x.r.tau_a;
        tau1 = std::max(tau1, std::abs(lp_eval(t, 1.0)));
        pal = std::max({pal, std::abs(t.coeff(0) - 1.0), std::abs(t.coeff(3) + 1.0), std::abs(t.coeff(1) + t.coeff(2))});
        if (t.min_exponent() != 0 || t.max_exponent() != 3) pal = INFINITY;
        detj = std::max(detj, std::abs(x.r.det_j - 1.0));
        dimj = std::max(dimj, std::abs(x.r.det_i_minus_j));
        fricke = std::max(fricke, x.r.fricke_residual);
        glue = std::max(glue, x.s.residual);
    }
    const bool ok = tau1 < 1e-8 && pal < 1e-8 && detj < 1e-8 && dimj < 1e-8 && fricke < 1e-10 && glue < 1e-12;
    report(6, ok,
           std::to_string(all.size()) + " words: tau(1) " + sci(tau1) + ", anti-palindrome " + sci(pal) + ", |detJ-1| " +
               sci(detj) + ", |det(I-J)| " + sci(dimj) + ", Fricke " + sci(fricke) + ", gluing " + sci(glue));
}

void criterion7(const std::vector<Solved>& all) {
    // J against central differences of the recursion (long double, h = 1e-7)
    using cl = std::complex<long double>;
    double jac = 0;
    for (const auto& x : all) {
        const PtolemySchedule sch = ptolemy_schedule(x.w);
        const Eigen::Matrix3cd J = alexander_polynomial(x.w, x.p).jacobian;
        const long double h = 1e-7L;
        double err = 0;
        for (int k = 0; k < 3; ++k) {
            std::array<cl, 3> up, dn;
            for (int m = 0; m < 3; ++m) up[m] = dn[m] = cl(x.p.c[sch.initial[m]]);
            up[k] += h;
            dn[k] -= h;
            const auto cu = ptolemy_recurrence<cl>(sch, up), cn = ptolemy_recurrence<cl>(sch, dn);
            for (int r = 0; r < 3; ++r) {
                const cl d = (cu[sch.closing[r]] - cn[sch.closing[r]]) / (2.0L * h);
                err = std::max(err, std::abs(J(r, k) - cplx(double(d.real()), double(d.imag()))));
            }
        }
        jac = std::max(jac, err / J.cwiseAbs().maxCoeff());
    }

    // poly_det of X against the scalar determinant at random points
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    double det = 0;
    for (const auto& x : all) {
        const LaurentMatrix m = x_matrix(x.w, x.s);
        const LaurentPoly d = poly_det(m);
        for (int k = 0; k < 4; ++k) {
            const cplx t(u(rng), u(rng));
            const cplx ref = m.eval(t).determinant();
            det = std::max(det, std::abs(lp_eval(d, t) - ref) / std::max(std::abs(ref), 1e-300));
        }
    }

    std::uniform_real_distribution<double> im(1e-3, 3.0);
    double bw = 0;
    for (int k = 0; k < 2000; ++k) {
        const cplx z(u(rng), im(rng));
        const double d = bloch_wigner(z);
        bw = std::max({bw, std::abs(bloch_wigner(1.0 - 1.0 / z) - d), std::abs(bloch_wigner(1.0 / (1.0 - z)) - d),
                       std::abs(bloch_wigner(std::conj(z)) + d)});
    }
    report(7, jac < 1e-6 && det < 1e-9 && bw < 1e-10,
           "J vs central differences " + sci(jac) + ", poly_det vs det " + sci(det) + ", Bloch-Wigner symmetries " + sci(bw));
}

void criterion8(const Solved& x) {
    const fs::path dir = fs::temp_directory_path() / "twistloop_acceptance";
    fs::create_directories(dir);
    const fs::path f = dir / "r2l3.json";
    bool exact = run_cli("export-general R2L3 -o " + f.string()).code == 0;
    const Run g = run_cli("--format json general " + f.string());
    const Run a = run_cli("--format json one-loop R2L3");
    exact = exact && g.code == 0 && a.code == 0;
    if (exact) {
        const json jg = json::parse(g.out), ja = json::parse(a.out);
        exact = jg.at("tau") == ja.at("tau") && jg.at("tau_normalized") == ja.at("tau_normalized");
    }
    // in-library as well, compared bit for bit
    const TwistedGluingData base = bundle_gluing_data(x.w);
    const LaurentPoly ref = one_loop_general(base, x.s.z).tau;
    exact = exact && ref == one_loop_det_x(x.w, x.s).tau;

    const auto alts = search_flattenings(base, 1);
    double worst = 0;
    for (const auto& fl : alts) {
        TwistedGluingData d = base;
        d.flattening = fl;
        const LaurentPoly t = one_loop_general(d, x.s.z).tau;
        const double plus = (t - ref).max_abs(), minus = (t + ref).max_abs();
        worst = std::max(worst, std::min(plus, minus) / ref.max_abs());
    }
    report(8, exact && alts.size() > 1 && worst < 1e-10,
           std::string("export/general ") + (exact ? "identical" : "differs") + ", " + std::to_string(alts.size()) +
               " flattenings, worst deviation from +-tau " + sci(worst));
}

}  // namespace

int main() {
    try {
        criterion1();

        const RLWord w = parse_word("R2L3");
        const ShapeSolution s = solve_geometric(w);
        const PtolemyAssignment p = solve_ptolemy(w, s);
        criterion2(w, s);
        criterion3(p);
        criterion4(w, s, p);

        const auto words = testsupport::random_words(40, 20240611);
        const auto t0 = clk::now();
        const auto batch = verify_batch(words);
        criterion5(batch, std::chrono::duration<double>(clk::now() - t0).count());

        std::vector<Solved> all;
        std::vector<std::string> texts = {"R2L3", "RLL", "RRLL", "RRRLRLL", "RL11"};
        texts.insert(texts.end(), words.begin(), words.end());
        for (const auto& t : texts) {
            Solved x{parse_word(t), {}, {}, {}};
            x.s = solve_geometric(x.w);
            x.p = solve_ptolemy(x.w, x.s);
            x.r = verify_word(x.w);
            all.push_back(std::move(x));
        }
        criterion6(all);
        criterion7(all);
        criterion8(all.front());
    } catch (const std::exception& e) {
        std::cout << "FAIL  unexpected exception: " << e.what() << "\n";
        return 1;
    }
    std::cout << (failures ? "acceptance: FAILED" : "acceptance: all criteria pass") << "\n";
    return failures ? 1 : 0;
}
