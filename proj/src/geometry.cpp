#include "twistloop/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "twistloop/errors.hpp"

namespace twistloop {

namespace {

const cplx kRegular = std::polar(1.0, std::numbers::pi / 3.0);

cplx ipow(cplx x, int e) {
    cplx r = 1.0;
    cplx b = e < 0 ? 1.0 / x : x;
    for (unsigned k = static_cast<unsigned>(e < 0 ? -e : e); k; k >>= 1) {
        if (k & 1u) r *= b;
        b *= b;
    }
    return r;
}

MonomialExponents row_of(const GluingExponents& g, int i) {
    return {g.G.row(i).transpose(), g.Gp.row(i).transpose(), g.Gpp.row(i).transpose()};
}

struct System {
    int n = 0;
    std::vector<MonomialExponents> eqs;  // e_1..e_{N-1}, μ
    std::vector<MonomialExponents> all;  // e_1..e_N, μ
    Eigen::VectorXcd log_target;
};

System make_system(const RLWord& w) {
    System s;
    s.n = w.size();
    s.all = bundle_equations(w);
    s.eqs.assign(s.all.begin(), s.all.end() - 2);
    s.eqs.push_back(s.all.back());
    s.log_target = Eigen::VectorXcd::Zero(s.n);
    for (int i = 0; i + 1 < s.n; ++i) s.log_target(i) = cplx(0.0, 2.0 * std::numbers::pi);
    return s;
}

Eigen::VectorXcd log_residual(const System& s, const std::vector<cplx>& z) {
    Eigen::VectorXcd r(s.n);
    for (int i = 0; i < s.n; ++i) {
        const auto& e = s.eqs[i];
        cplx acc{};
        for (int j = 0; j < s.n; ++j) {
            if (e.g(j)) acc += static_cast<double>(e.g(j)) * std::log(z[j]);
            if (e.gp(j)) acc += static_cast<double>(e.gp(j)) * std::log(1.0 / (1.0 - z[j]));
            if (e.gpp(j)) acc += static_cast<double>(e.gpp(j)) * std::log(1.0 - 1.0 / z[j]);
        }
        r(i) = acc - s.log_target(i);
    }
    return r;
}

Eigen::MatrixXcd log_jacobian(const System& s, const std::vector<cplx>& z) {
    Eigen::MatrixXcd J(s.n, s.n);
    for (int i = 0; i < s.n; ++i) {
        const auto& e = s.eqs[i];
        for (int j = 0; j < s.n; ++j)
            J(i, j) = static_cast<double>(e.g(j)) / z[j] + static_cast<double>(e.gp(j)) / (1.0 - z[j]) +
                      static_cast<double>(e.gpp(j)) / (z[j] * (z[j] - 1.0));
    }
    return J;
}

// F - 1 for each equation, plus dF/dz from F = ± Π z^A (1-z)^B.
Eigen::VectorXcd rational_residual(const System& s, const std::vector<cplx>& z, Eigen::MatrixXcd* jac) {
    Eigen::VectorXcd r(s.n);
    if (jac) jac->resize(s.n, s.n);
    for (int i = 0; i < s.n; ++i) {
        const auto& e = s.eqs[i];
        const cplx f = monomial_value(e, z);
        r(i) = f - 1.0;
        if (!jac) continue;
        for (int j = 0; j < s.n; ++j) {
            const int a = e.g(j) - e.gpp(j);
            const int b = e.gpp(j) - e.gp(j);
            (*jac)(i, j) = f * (static_cast<double>(a) / z[j] - static_cast<double>(b) / (1.0 - z[j]));
        }
    }
    return r;
}

bool upper_half(const std::vector<cplx>& z) {
    return std::all_of(z.begin(), z.end(), [](cplx x) { return x.imag() > 0.0; });
}

struct Candidate {
    std::vector<cplx> z;
    bool converged = false;
    int iterations = 0;
    double residual = INFINITY;
    double volume = 0.0;
    std::vector<double> history;
};

Candidate run_newton(const System& s, const RLWord& w, std::vector<cplx> z, const SolverOptions& opts) {
    Candidate c;
    Eigen::VectorXcd r = log_residual(s, z);
    double rn = r.norm();
    c.history.push_back(rn);
    for (int it = 0; it < opts.max_iterations && rn > 0.0; ++it) {
        const Eigen::VectorXcd d = log_jacobian(s, z).partialPivLu().solve(-r);
        double step = opts.damping;
        bool moved = false;
        for (int h = 0; h <= 20; ++h, step *= 0.5) {
            std::vector<cplx> zn(z);
            for (int j = 0; j < s.n; ++j) zn[j] += step * d(j);
            if (!upper_half(zn)) continue;
            const Eigen::VectorXcd rt = log_residual(s, zn);
            if (rt.norm() < rn) {
                z = std::move(zn);
                r = rt;
                rn = rt.norm();
                moved = true;
                break;
            }
        }
        c.iterations = it + 1;
        if (!moved) break;
        c.history.push_back(rn);
    }

    // a few rational-form steps; kept only when they lower the full residual
    double best = gluing_residual(w, z);
    for (int it = 0; it < 3 && std::isfinite(best); ++it) {
        Eigen::MatrixXcd J;
        const Eigen::VectorXcd rr = rational_residual(s, z, &J);
        const Eigen::VectorXcd d = J.partialPivLu().solve(-rr);
        std::vector<cplx> zn(z);
        for (int j = 0; j < s.n; ++j) zn[j] += d(j);
        const double res = gluing_residual(w, zn);
        if (!(res < best) || !upper_half(zn)) break;
        z = std::move(zn);
        best = res;
    }

    c.residual = best;
    c.converged = std::isfinite(best) && best < opts.tolerance && upper_half(z);
    if (c.converged) c.volume = volume(z);
    c.z = std::move(z);
    return c;
}

std::vector<cplx> start_point(int n, int index, const SolverOptions& opts) {
    std::vector<cplx> z(static_cast<size_t>(n), kRegular);
    if (index == 0) return z;
    std::seed_seq seq{static_cast<std::uint32_t>(opts.rng_seed), static_cast<std::uint32_t>(opts.rng_seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& x : z) {
        const double rad = opts.restart_radius * std::sqrt(u(rng));
        x += std::polar(rad, 2.0 * std::numbers::pi * u(rng));
    }
    return z;
}

// B_n / (n+1)! for n = 0..30; Li2(z) = Σ kLi2[n] u^(n+1) with u = -log(1 - z).
// The series needs |u| < 2π; after the reductions in bloch_wigner |u| < 1.3.
std::array<double, 31> li2_coefficients() {
    const std::array<std::pair<double, double>, 16> bern{{{1, 1},
                                                          {1, 6},
                                                          {-1, 30},
                                                          {1, 42},
                                                          {-1, 30},
                                                          {5, 66},
                                                          {-691, 2730},
                                                          {7, 6},
                                                          {-3617, 510},
                                                          {43867, 798},
                                                          {-174611, 330},
                                                          {854513, 138},
                                                          {-236364091, 2730},
                                                          {8553103, 6},
                                                          {-23749461029.0, 870},
                                                          {8615841276005.0, 14322}}};
    std::array<double, 31> a{};
    double fact = 1.0;  // (n+1)!
    for (int n = 0; n <= 30; ++n) {
        fact *= static_cast<double>(n + 1);
        if (n == 1)
            a[n] = -0.5 / fact;
        else if (n % 2 == 0)
            a[n] = bern[n / 2].first / bern[n / 2].second / fact;
    }
    return a;
}

const std::array<double, 31> kLi2 = li2_coefficients();

}  // namespace

cplx monomial_value(const MonomialExponents& e, const std::vector<cplx>& z) {
    cplx f = 1.0;
    int sign_exp = 0;
    for (Eigen::Index j = 0; j < e.g.size(); ++j) {
        const int a = e.g(j) - e.gpp(j);
        const int b = e.gpp(j) - e.gp(j);
        sign_exp += e.gpp(j);
        if (a) f *= ipow(z[j], a);
        if (b) f *= ipow(1.0 - z[j], b);
    }
    return (sign_exp % 2) ? -f : f;
}

std::vector<MonomialExponents> bundle_equations(const RLWord& w) {
    const GluingExponents g = gluing_exponents(w);
    const CompletenessExponents mu = meridian_exponents(w);
    std::vector<MonomialExponents> out;
    for (int i = 0; i < w.size(); ++i) out.push_back(row_of(g, i));
    out.push_back({mu.C, mu.Cp, mu.Cpp});
    return out;
}

double gluing_residual(const RLWord& w, const std::vector<cplx>& z) {
    double m = 0.0;
    for (const auto& e : bundle_equations(w)) {
        const double d = std::abs(monomial_value(e, z) - 1.0);
        if (!std::isfinite(d)) return INFINITY;
        m = std::max(m, d);
    }
    return m;
}

ShapeSolution make_shape_solution(const RLWord& w, std::vector<cplx> z) {
    if (static_cast<int>(z.size()) != w.size()) throw ValidationError("shape count does not match word length");
    ShapeSolution s;
    for (size_t j = 0; j < z.size(); ++j) {
        if (z[j] == 0.0 || z[j] == 1.0) throw DomainError("shape parameter equal to 0 or 1");
        if (z[j].imag() == 0.0) s.degenerate.push_back(static_cast<int>(j));
        s.zeta.push_back(1.0 / z[j]);
        s.zeta_p.push_back(1.0 / (1.0 - z[j]));
        s.zeta_pp.push_back(1.0 / (z[j] * (z[j] - 1.0)));
    }
    s.residual = gluing_residual(w, z);
    s.volume = volume(z);
    s.z = std::move(z);
    return s;
}

ShapeSolution solve_geometric(const RLWord& w, const SolverOptions& opts) {
    if (!(opts.tolerance > 0.0) || opts.max_iterations < 1 || opts.max_restarts < 0)
        throw InputError("invalid solver options");
    const System sys = make_system(w);
    const int count = opts.max_restarts + 1;
    std::vector<Candidate> cands(static_cast<size_t>(count));

#pragma omp parallel for schedule(dynamic) if (opts.parallel && count > 1)
    for (int k = 0; k < count; ++k) cands[k] = run_newton(sys, w, start_point(sys.n, k, opts), opts);

    int win = -1, converged = 0;
    for (int k = 0; k < count; ++k) {
        if (!cands[k].converged) continue;
        ++converged;
        if (win < 0 || cands[k].volume > cands[win].volume + 1e-9) win = k;
    }
    if (win < 0) {
        std::ostringstream msg;
        double best = INFINITY;
        for (const auto& c : cands) best = std::min(best, c.residual);
        msg << "geometric solution not found for " << w.letters << " after " << count
            << " starts; best residual " << best << "; iterations";
        for (const auto& c : cands) msg << ' ' << c.iterations;
        throw SolverFailure(msg.str());
    }
    ShapeSolution s = make_shape_solution(w, cands[win].z);
    s.iterations = cands[win].iterations;
    s.candidate = win;
    s.converged_candidates = converged;
    s.residual_history = cands[win].history;
    return s;
}

double bloch_wigner(cplx z) {
    if (z.imag() == 0.0) return 0.0;
    double sign = 1.0;
    if (std::abs(z) > 1.0) {
        z = 1.0 / z;
        sign = -sign;
    }
    if (z.real() > 0.5) {
        z = 1.0 - z;
        sign = -sign;
    }
    const cplx u = -std::log(1.0 - z);
    cplx li2{}, up = u;
    for (double c : kLi2) {
        li2 += c * up;
        up *= u;
    }
    return sign * (li2.imag() + std::arg(1.0 - z) * std::log(std::abs(z)));
}

double volume(const std::vector<cplx>& z) {
    double v = 0.0;
    for (cplx x : z) v += bloch_wigner(x);
    return v;
}

}  // namespace twistloop
