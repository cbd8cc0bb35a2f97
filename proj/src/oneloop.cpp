#include "twistloop/oneloop.hpp"

#include <cmath>
#include <set>

#include "twistloop/errors.hpp"

namespace twistloop {

namespace {

int int_coeff(cplx a) {
    const double r = std::round(a.real());
    if (a.imag() != 0.0 || r != a.real()) throw ValidationError("gluing matrix entries must have integer coefficients");
    return static_cast<int>(r);
}

Eigen::MatrixXi at_one(const LaurentMatrix& m) {
    Eigen::MatrixXi out = Eigen::MatrixXi::Zero(m.size(), m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j)
            for (const auto& [e, a] : m(i, j).coeffs()) out(i, j) += int_coeff(a);
    return out;
}

bool condition2_holds(const Eigen::MatrixXi& G, const Eigen::MatrixXi& Gp, const Eigen::MatrixXi& Gpp,
                      const Flattening& fl) {
    const int n = static_cast<int>(G.rows());
    for (int i = 0; i < n; ++i) {
        long s = 0;
        for (int j = 0; j < n; ++j) s += G(i, j) * fl.f[j] + Gp(i, j) * fl.fp[j] + Gpp(i, j) * fl.fpp[j];
        if (s != 2) return false;
    }
    return true;
}

void check_sizes(const TwistedGluingData& d) {
    const auto n = static_cast<size_t>(d.n);
    if (d.n < 1 || d.G.size() != d.n || d.Gp.size() != d.n || d.Gpp.size() != d.n)
        throw InputError("gluing matrices must be N x N");
    if (d.flattening.f.size() != n || d.flattening.fp.size() != n || d.flattening.fpp.size() != n)
        throw InputError("flattening vectors must have length N");
    for (const auto& cur : d.completeness)
        if (cur.c.size() != n || cur.cp.size() != n || cur.cpp.size() != n)
            throw InputError("completeness vectors must have length N");
}

double shape_residual(const TwistedGluingData& d, const std::vector<cplx>& z) {
    const Eigen::MatrixXi G = at_one(d.G), Gp = at_one(d.Gp), Gpp = at_one(d.Gpp);
    double m = 0.0;
    for (int i = 0; i < d.n; ++i) {
        const MonomialExponents e{G.row(i).transpose(), Gp.row(i).transpose(), Gpp.row(i).transpose()};
        m = std::max(m, std::abs(monomial_value(e, z) - 1.0));
    }
    return m;
}

OneLoopResult finish(LaurentPoly tau, Route route, const LaurentMatrix& m) {
    OneLoopResult r;
    r.route = route;
    for (auto [lo, hi] : m.degree_bounds()) r.degree_spread += hi - lo;
    if (tau.is_zero()) throw DomainError("twisted determinant vanishes identically");
    r.tau_normalized = normalize_unit(tau);
    r.tau = std::move(tau);
    return r;
}

}  // namespace

const char* route_name(Route r) {
    switch (r) {
        case Route::A: return "A";
        case Route::CBig: return "C'";
        case Route::C: return "C";
        case Route::General: return "general";
    }
    return "?";
}

FlatteningReport validate_flattening(const TwistedGluingData& d) {
    check_sizes(d);
    FlatteningReport rep;
    const auto& fl = d.flattening;
    rep.condition1 = true;
    for (int j = 0; j < d.n; ++j)
        if (fl.f[j] + fl.fp[j] + fl.fpp[j] != 1) rep.condition1 = false;
    rep.condition2 = condition2_holds(at_one(d.G), at_one(d.Gp), at_one(d.Gpp), fl);
    for (const auto& cur : d.completeness) {
        int v = 0;
        for (int j = 0; j < d.n; ++j) v += cur.c[j] * fl.f[j] + cur.cp[j] * fl.fp[j] + cur.cpp[j] * fl.fpp[j];
        rep.condition3.emplace_back(cur.name, v);
    }
    if (!rep.condition1)
        rep.message = "flattening fails condition 1 (f + f' + f'' = 1)";
    else if (!rep.condition2)
        rep.message = "flattening fails condition 2 (G f + G' f' + G'' f'' = 2 at t = 1)";
    return rep;
}

TwistedGluingData bundle_gluing_data(const RLWord& w) {
    const int n = w.size();
    TwistedGluingData d;
    d.n = n;
    d.G = LaurentMatrix(n);
    d.Gp = LaurentMatrix(n);
    d.Gpp = LaurentMatrix(n);
    const TwistedRowPattern p = twisted_row_pattern(w);
    for (int i = 0; i < n; ++i) {
        for (const auto& t : p.rows[i]) {
            switch (t.kind) {
                case Multiplier::One: d.G(i, t.col).add_term(t.tpow, 1.0); break;
                case Multiplier::RShape: d.Gp(i, t.col).add_term(t.tpow, 2.0); break;
                case Multiplier::LShape: d.Gpp(i, t.col).add_term(t.tpow, 2.0); break;
            }
        }
    }
    const CompletenessExponents mu = meridian_exponents(w);
    CompletenessCurve cur{"mu", {}, {}, {}};
    for (int j = 0; j < n; ++j) {
        cur.c.push_back(mu.C(j));
        cur.cp.push_back(mu.Cp(j));
        cur.cpp.push_back(mu.Cpp(j));
    }
    d.completeness.push_back(std::move(cur));
    d.flattening = {std::vector<int>(static_cast<size_t>(n), 1), std::vector<int>(static_cast<size_t>(n), 0),
                    std::vector<int>(static_cast<size_t>(n), 0)};
    return d;
}

cplx twisted_cell(int g, int gp, int gpp, cplx zeta, cplx zeta_p, cplx zeta_pp, cplx scale) {
    return (static_cast<double>(g) * zeta + static_cast<double>(gp) * zeta_p + static_cast<double>(gpp) * zeta_pp) /
           scale;
}

cplx column_scale(int f, int fp, int fpp, cplx zeta, cplx zeta_p, cplx zeta_pp) {
    cplx s = 1.0;
    auto apply = [&s](int e, cplx x) {
        for (int k = 0; k < e; ++k) s *= x;
        for (int k = 0; k > e; --k) s /= x;
    };
    apply(f, zeta);
    apply(fp, zeta_p);
    apply(fpp, zeta_pp);
    return s;
}

LaurentMatrix twisted_matrix(const TwistedGluingData& d, const std::vector<cplx>& z) {
    check_sizes(d);
    if (static_cast<int>(z.size()) != d.n) throw InputError("shape count does not match N");
    LaurentMatrix m(d.n);
    for (int j = 0; j < d.n; ++j) {
        if (z[j] == 0.0 || z[j] == 1.0) throw DomainError("degenerate shape parameter (0 or 1)");
        const cplx zeta = 1.0 / z[j], zeta_p = 1.0 / (1.0 - z[j]), zeta_pp = 1.0 / (z[j] * (z[j] - 1.0));
        const cplx scale = column_scale(d.flattening.f[j], d.flattening.fp[j], d.flattening.fpp[j], zeta, zeta_p, zeta_pp);
        for (int i = 0; i < d.n; ++i) {
            std::set<int> exps;
            for (const auto* g : {&d.G(i, j), &d.Gp(i, j), &d.Gpp(i, j)})
                for (const auto& [e, a] : g->coeffs()) exps.insert(e);
            for (int e : exps)
                m(i, j).add_term(e, twisted_cell(int_coeff(d.G(i, j).coeff(e)), int_coeff(d.Gp(i, j).coeff(e)),
                                                 int_coeff(d.Gpp(i, j).coeff(e)), zeta, zeta_p, zeta_pp, scale));
        }
    }
    return m;
}

LaurentMatrix x_matrix(const RLWord& w, const ShapeSolution& s) { return twisted_matrix(bundle_gluing_data(w), s.z); }

OneLoopResult one_loop_general(const TwistedGluingData& d, const std::vector<cplx>& z, const PolyDetOptions& opts) {
    const FlatteningReport rep = validate_flattening(d);
    if (!rep.ok()) throw ValidationError(rep.message);
    const Eigen::MatrixXi G = at_one(d.G), Gp = at_one(d.Gp), Gpp = at_one(d.Gpp);
    if ((G.array() < 0).any() || (Gp.array() < 0).any() || (Gpp.array() < 0).any())
        throw ValidationError("gluing matrices at t = 1 must be nonnegative");
    const LaurentMatrix m = twisted_matrix(d, z);
    OneLoopResult r = finish(poly_det(m, opts), Route::General, m);
    r.shape_residual = shape_residual(d, z);
    if (!(r.shape_residual < 1e-8)) r.warnings.emplace_back("shapes fail gluing residual check");
    return r;
}

OneLoopResult one_loop_det_x(const RLWord& w, const ShapeSolution& s, const PolyDetOptions& opts) {
    const LaurentMatrix m = x_matrix(w, s);
    OneLoopResult r = finish(poly_det(m, opts), Route::A, m);
    r.shape_residual = s.residual;
    return r;
}

LaurentMatrix big_jacobian_matrix(const RLWord& w, const PtolemyAssignment& p) {
    if (p.word.letters != w.letters || static_cast<int>(p.c_ext.size()) != w.size() + 3)
        throw ValidationError("Ptolemy assignment does not belong to word " + w.letters);
    if (!(p.step_residual < 1e-8) || !(p.closing_residual < 1e-8))
        throw ValidationError("Ptolemy values inconsistent with the schedule of " + w.letters);
    const PtolemySchedule s = ptolemy_schedule(w);
    const int n = s.n;
    LaurentMatrix m(n + 3);
    auto put = [&m](int i, int j, cplxl v) { m(i, j).add_term(0, cplx(static_cast<double>(v.real()), static_cast<double>(v.imag()))); };
    const auto& c = p.c_ext;
    for (int i = 0; i < n; ++i) {
        const auto& st = s.steps[static_cast<size_t>(i)];
        const auto [a, b, g] = st.triple;
        put(i, i, 1.0L);
        if (st.letter == 'R') {
            // c_i - (c_a² + c_g²)/c_b
            put(i, a, -2.0L * c[a] / c[b]);
            put(i, g, -2.0L * c[g] / c[b]);
            put(i, b, (c[a] * c[a] + c[g] * c[g]) / (c[b] * c[b]));
        } else {
            // c_i - (c_b² + c_g²)/c_a
            put(i, b, -2.0L * c[b] / c[a]);
            put(i, g, -2.0L * c[g] / c[a]);
            put(i, a, (c[b] * c[b] + c[g] * c[g]) / (c[a] * c[a]));
        }
    }
    for (int k = 0; k < 3; ++k) {
        m(n + k, n + k).add_term(0, 1.0);
        m(n + k, s.closing[k]).add_term(1, -1.0);
    }
    return m;
}

OneLoopResult one_loop_big_jacobian(const RLWord& w, const PtolemyAssignment& p, const PolyDetOptions& opts) {
    const LaurentMatrix m = big_jacobian_matrix(w, p);
    return finish(poly_det(m, opts), Route::CBig, m);
}

cplx one_loop_at_lambda(const RLWord& w, const PtolemyAssignment& p, const PolyDetOptions& opts) {
    return lp_derivative(one_loop_big_jacobian(w, p, opts).tau, 1.0);
}

std::vector<Flattening> search_flattenings(const TwistedGluingData& d, int range) {
    check_sizes(d);
    const int base = 2 * range + 1;
    const double combos = std::pow(static_cast<double>(base), 2.0 * d.n);
    if (combos > 5e7) throw InputError("flattening search space too large");
    const Eigen::MatrixXi G = at_one(d.G), Gp = at_one(d.Gp), Gpp = at_one(d.Gpp);
    std::vector<Flattening> out;
    const auto n = static_cast<size_t>(d.n);
    std::vector<int> digits(2 * n, 0);
    for (long long idx = 0; idx < static_cast<long long>(combos); ++idx) {
        long long r = idx;
        for (auto& dg : digits) {
            dg = static_cast<int>(r % base) - range;
            r /= base;
        }
        Flattening fl{std::vector<int>(n), std::vector<int>(digits.begin(), digits.begin() + static_cast<long>(n)),
                      std::vector<int>(digits.begin() + static_cast<long>(n), digits.end())};
        for (size_t j = 0; j < n; ++j) fl.f[j] = 1 - fl.fp[j] - fl.fpp[j];
        if (condition2_holds(G, Gp, Gpp, fl)) out.push_back(std::move(fl));
    }
    return out;
}

}  // namespace twistloop
