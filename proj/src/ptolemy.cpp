#include "twistloop/ptolemy.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "twistloop/errors.hpp"

namespace twistloop {

namespace {

using D3 = Dual3<long double>;
using Vec3l = Eigen::Matrix<cplxl, 3, 1>;
using Mat32l = Eigen::Matrix<cplxl, 3, 2>;

cplx to_double(cplxl x) { return {static_cast<double>(x.real()), static_cast<double>(x.imag())}; }
cplxl to_long(cplx x) { return {x.real(), x.imag()}; }

std::vector<D3> dual_recurrence(const PtolemySchedule& s, const std::array<cplxl, 3>& init) {
    return ptolemy_recurrence<D3>(s, {D3::variable(init[0], 0), D3::variable(init[1], 1), D3::variable(init[2], 2)});
}

// closing residual and its Jacobian in (y, z) with x = 1
Vec3l closing_system(const PtolemySchedule& s, cplxl y, cplxl z, Mat32l* jac) {
    const auto c = dual_recurrence(s, {cplxl(1), y, z});
    const std::array<cplxl, 3> target{cplxl(1), y, z};
    Vec3l r;
    for (int k = 0; k < 3; ++k) {
        const D3& out = c[static_cast<size_t>(s.closing[k])];
        r(k) = out.v - target[k];
        if (jac) {
            (*jac)(k, 0) = out.g[1] - (k == 1 ? cplxl(1) : cplxl(0));
            (*jac)(k, 1) = out.g[2] - (k == 2 ? cplxl(1) : cplxl(0));
        }
    }
    return r;
}

long double max_abs(const Vec3l& v) { return std::max({std::abs(v(0)), std::abs(v(1)), std::abs(v(2))}); }

std::vector<cplxl> extract_shapes(const PtolemySchedule& s, const std::vector<cplxl>& c) {
    std::vector<cplxl> z;
    for (const auto& st : s.steps) {
        const cplxl a = c[static_cast<size_t>(st.triple[0])];
        const cplxl b = c[static_cast<size_t>(st.triple[1])];
        const cplxl g = c[static_cast<size_t>(st.triple[2])];
        z.push_back(st.letter == 'R' ? -(g * g) / (a * a) : -(b * b) / (g * g));
    }
    return z;
}

void fill_residuals(PtolemyAssignment& p) {
    const PtolemySchedule s = ptolemy_schedule(p.word);
    const auto& c = p.c_ext;
    long double step = 0, close = 0;
    for (int i = 0; i < s.n; ++i) {
        const auto& st = s.steps[static_cast<size_t>(i)];
        const cplxl a = c[static_cast<size_t>(st.triple[0])];
        const cplxl b = c[static_cast<size_t>(st.triple[1])];
        const cplxl g = c[static_cast<size_t>(st.triple[2])];
        const cplxl lhs = st.letter == 'R' ? c[static_cast<size_t>(i)] * b : c[static_cast<size_t>(i)] * a;
        const cplxl rhs = st.letter == 'R' ? a * a + g * g : b * b + g * g;
        step = std::max(step, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1.0L));
    }
    for (int k = 0; k < 3; ++k) {
        const cplxl in = c[static_cast<size_t>(s.initial[k])];
        close = std::max(close, std::abs(c[static_cast<size_t>(s.closing[k])] - in) / std::max(std::abs(in), 1.0L));
    }
    p.step_residual = static_cast<double>(step);
    p.closing_residual = static_cast<double>(close);
}

void check_assignment(const RLWord& w, const PtolemyAssignment& p) {
    if (static_cast<int>(p.c_ext.size()) != w.size() + 3 || p.word.letters != w.letters)
        throw ValidationError("Ptolemy assignment does not belong to word " + w.letters);
    if (!(p.step_residual < 1e-8) || !(p.closing_residual < 1e-8))
        throw ValidationError("Ptolemy values inconsistent with the schedule of " + w.letters);
    for (const auto& x : p.c_ext)
        if (x == cplxl(0)) throw ValidationError("zero Ptolemy coordinate");
}

struct JacobianData {
    Eigen::Matrix<cplxl, 3, 3> J;
    cplxl det_steps;
};

JacobianData jacobian_at(const PtolemySchedule& s, const std::array<cplxl, 3>& init) {
    const auto c = dual_recurrence(s, init);
    JacobianData d;
    for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 3; ++k) d.J(r, k) = c[static_cast<size_t>(s.closing[r])].g[static_cast<size_t>(k)];
    // each step is the map (α,β,γ) -> new triple with Jacobian determinant c_i / pivot
    d.det_steps = 1;
    for (int i = 0; i < s.n; ++i) {
        const auto& st = s.steps[static_cast<size_t>(i)];
        const cplxl pivot = c[static_cast<size_t>(st.letter == 'R' ? st.triple[1] : st.triple[0])].v;
        d.det_steps *= c[static_cast<size_t>(i)].v / pivot;
    }
    return d;
}

cplxl det3(const Eigen::Matrix<cplxl, 3, 3>& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

cplxl minor_sum(const Eigen::Matrix<cplxl, 3, 3>& m) {
    return (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) + (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) +
           (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1));
}

std::array<cplxl, 3> initials(const PtolemySchedule& s, const std::vector<cplxl>& c) {
    return {c[static_cast<size_t>(s.initial[0])], c[static_cast<size_t>(s.initial[1])],
            c[static_cast<size_t>(s.initial[2])]};
}

}  // namespace

PtolemyAssignment make_assignment(const RLWord& w, const std::vector<cplx>& c) {
    if (static_cast<int>(c.size()) != w.size() + 3) throw ValidationError("expected N+3 Ptolemy values");
    PtolemyAssignment p;
    p.word = w;
    p.c = c;
    for (cplx x : c) p.c_ext.push_back(to_long(x));
    fill_residuals(p);
    return p;
}

PtolemyAssignment solve_ptolemy(const RLWord& w, const ShapeSolution& shapes, const SolverOptions& opts) {
    const PtolemySchedule s = ptolemy_schedule(w);
    if (static_cast<int>(shapes.z.size()) != s.n) throw ValidationError("shape count does not match word length");
    const cplxl z1 = to_long(shapes.z[0]);
    const cplxl z2 = to_long(shapes.z[1]);

    struct Run {
        PtolemyBranch diag;
        std::vector<cplxl> c;
    };
    std::array<Run, 4> runs;

#pragma omp parallel for schedule(static) if (opts.parallel)
    for (int b = 0; b < 4; ++b) {
        Run& run = runs[static_cast<size_t>(b)];
        run.diag.sign_r = b < 2 ? 1 : -1;
        run.diag.sign_z = b % 2 == 0 ? 1 : -1;
        // first step is an L step: z_1 = -(y/z)²; the second fixes z² through z_2
        const cplxl r = static_cast<long double>(run.diag.sign_r) * std::sqrt(-z1);
        const cplxl one_r2 = cplxl(1) + r * r;
        const cplxl zsq = s.steps[1].letter == 'R' ? -z2 / (one_r2 * one_r2) : -(r * r) / (z2 * one_r2 * one_r2);
        cplxl z = static_cast<long double>(run.diag.sign_z) * std::sqrt(zsq);
        cplxl y = r * z;

        Vec3l g = closing_system(s, y, z, nullptr);
        run.diag.initial_residual = static_cast<double>(max_abs(g));
        long double best = max_abs(g);
        for (int it = 0; it < 60 && std::isfinite(static_cast<double>(best)); ++it) {
            Mat32l J;
            g = closing_system(s, y, z, &J);
            const Eigen::Matrix<cplxl, 2, 1> d = J.colPivHouseholderQr().solve(-g);
            const cplxl yn = y + d(0), zn = z + d(1);
            const long double res = max_abs(closing_system(s, yn, zn, nullptr));
            if (!(res < best)) break;
            y = yn;
            z = zn;
            best = res;
        }
        run.c = ptolemy_recurrence<cplxl>(s, {cplxl(1), y, z});
        run.diag.closing_residual = static_cast<double>(best);
        const auto zs = extract_shapes(s, run.c);
        long double dev = 0;
        for (int j = 0; j < s.n; ++j) dev = std::max(dev, std::abs(zs[static_cast<size_t>(j)] - to_long(shapes.z[static_cast<size_t>(j)])));
        run.diag.shape_residual = static_cast<double>(dev);
        run.diag.accepted = std::isfinite(run.diag.closing_residual) && run.diag.closing_residual < 1e-10 &&
                            run.diag.shape_residual < 1e-8;
    }

    PtolemyAssignment p;
    p.word = w;
    for (int b = 0; b < 4; ++b) {
        p.branches.push_back(runs[static_cast<size_t>(b)].diag);
        if (p.chosen < 0 && runs[static_cast<size_t>(b)].diag.accepted) p.chosen = b;
    }
    if (p.chosen < 0) {
        std::string msg = "no Ptolemy sign branch matches the shapes of " + w.letters + ":";
        for (const auto& d : p.branches)
            msg += " (" + std::to_string(d.sign_r) + "," + std::to_string(d.sign_z) +
                   ") closing=" + std::to_string(d.closing_residual) + " shape=" + std::to_string(d.shape_residual);
        throw SolverFailure(msg);
    }
    p.c_ext = runs[static_cast<size_t>(p.chosen)].c;
    for (const auto& x : p.c_ext) p.c.push_back(to_double(x));
    p.shape_residual = p.branches[static_cast<size_t>(p.chosen)].shape_residual;
    fill_residuals(p);
    return p;
}

std::vector<cplx> ptolemy_shapes(const PtolemyAssignment& p) {
    std::vector<cplx> z;
    for (const auto& x : extract_shapes(ptolemy_schedule(p.word), p.c_ext)) z.push_back(to_double(x));
    return z;
}

ShapeSolution shapes_from_ptolemy(const PtolemyAssignment& p) { return make_shape_solution(p.word, ptolemy_shapes(p)); }

CharacterCoords character_coords(cplx x, cplx y, cplx z) {
    if (x == 0.0 || y == 0.0 || z == 0.0) throw DomainError("character_coords: zero Ptolemy coordinate");
    const cplxl X = to_long(x), Y = to_long(y), Z = to_long(z);
    const cplxl s = X * X + Y * Y + Z * Z;
    return {to_double(s / (X * Z)), to_double(-s / (Y * Z)), to_double(-s / (X * Y))};
}

double fricke_residual(const CharacterCoords& t) {
    const cplxl a = to_long(t.a), b = to_long(t.b), c = to_long(t.c);
    return static_cast<double>(std::abs(a * a + b * b + c * c - a * b * c));
}

AlexanderResult alexander_polynomial(const RLWord& w, const PtolemyAssignment& p) {
    check_assignment(w, p);
    const PtolemySchedule s = ptolemy_schedule(w);
    const JacobianData d = jacobian_at(s, initials(s, p.c_ext));
    const cplxl tr = d.J.trace();
    const cplxl m2 = minor_sum(d.J);
    const cplxl det = d.det_steps;

    AlexanderResult r;
    r.jacobian = d.J.unaryExpr([](cplxl x) { return to_double(x); });
    r.trace = to_double(tr);
    r.minor_sum = to_double(m2);
    r.det_j = to_double(det);
    r.det_j_lu = to_double(det3(d.J));
    r.det_i_minus_j = to_double(cplxl(1) - tr + m2 - det);
    r.tau = LaurentPoly::from_dense({to_double(-det), to_double(m2), to_double(-tr), 1.0});
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(r.jacobian, false);
    for (int k = 0; k < 3; ++k) r.eigenvalues[static_cast<size_t>(k)] = es.eigenvalues()(k);
    return r;
}

HomogeneityReport homogeneity_check(const RLWord& w, const PtolemyAssignment& p, cplx k) {
    check_assignment(w, p);
    const PtolemySchedule s = ptolemy_schedule(w);
    const cplxl kl = to_long(k);
    const auto init = initials(s, p.c_ext);
    const std::array<cplxl, 3> scaled{kl * init[0], kl * init[1], kl * init[2]};

    HomogeneityReport h;
    h.k = k;
    const auto c1 = ptolemy_recurrence<cplxl>(s, init);
    const auto ck = ptolemy_recurrence<cplxl>(s, scaled);
    long double dev = 0, scale = 0;
    for (size_t i = 0; i < c1.size(); ++i) {
        dev = std::max(dev, std::abs(ck[i] - kl * c1[i]));
        scale = std::max(scale, std::abs(kl * c1[i]));
    }
    h.scaling_deviation = static_cast<double>(dev / scale);

    const JacobianData j1 = jacobian_at(s, init);
    const JacobianData jk = jacobian_at(s, scaled);
    long double jdev = 0, jscale = 0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            jdev = std::max(jdev, std::abs(jk.J(a, b) - j1.J(a, b)));
            jscale = std::max(jscale, std::abs(j1.J(a, b)));
        }
    h.jacobian_deviation = static_cast<double>(jdev / jscale);

    const std::array<cplxl, 3> t1{-j1.det_steps, minor_sum(j1.J), -j1.J.trace()};
    const std::array<cplxl, 3> tk{-jk.det_steps, minor_sum(jk.J), -jk.J.trace()};
    long double tdev = 0, tscale = 1;
    for (size_t a = 0; a < 3; ++a) {
        tdev = std::max(tdev, std::abs(tk[a] - t1[a]));
        tscale = std::max(tscale, std::abs(t1[a]));
    }
    h.tau_deviation = static_cast<double>(tdev / tscale);

    const Eigen::Matrix<cplxl, 3, 1> v(init[0], init[1], init[2]);
    h.euler_residual = static_cast<double>((j1.J * v - v).norm() / v.norm());
    return h;
}

}  // namespace twistloop
