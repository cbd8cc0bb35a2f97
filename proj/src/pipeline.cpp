#include "twistloop/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "twistloop/errors.hpp"

namespace twistloop {

double anti_palindromic_deviation(const LaurentPoly& tau) {
    if (tau.is_zero() || tau.min_exponent() != 0 || tau.max_exponent() != 3) return INFINITY;
    const double scale = tau.max_abs();
    double dev = std::abs(tau.coeff(0) - 1.0);
    dev = std::max(dev, std::abs(tau.coeff(3) + tau.coeff(0)) / scale);
    dev = std::max(dev, std::abs(tau.coeff(2) + tau.coeff(1)) / scale);
    return dev;
}

ComparisonReport verify_word(const RLWord& w, const VerifyOptions& opts) {
    ComparisonReport r;
    r.input = w.input;
    r.word = w.letters;
    r.rotation = w.rotation;
    r.n = w.size();
    r.blocks = w.blocks;
    r.tolerance = opts.tol_compare;

    const ShapeSolution s = solve_geometric(w, opts.solver);
    r.shapes = s.z;
    r.volume = s.volume;
    r.gluing_residual = s.residual;

    const OneLoopResult a = one_loop_det_x(w, s, opts.det);
    const PtolemyAssignment p = solve_ptolemy(w, s, opts.solver);
    r.ptolemy = p.c;
    r.ptolemy_shape_residual = p.shape_residual;
    const OneLoopResult big = one_loop_big_jacobian(w, p, opts.det);
    const AlexanderResult alex = alexander_polynomial(w, p);

    r.tau_a = a.tau_normalized;
    r.tau_cbig = big.tau_normalized;
    r.tau_c = normalize_unit(alex.tau);
    r.a_vs_cbig = compare_up_to_unit(r.tau_a, r.tau_cbig, opts.tol_compare);
    r.a_vs_c = compare_up_to_unit(r.tau_a, r.tau_c, opts.tol_compare);
    r.cbig_vs_c = compare_up_to_unit(r.tau_cbig, r.tau_c, opts.tol_compare);

    const int n = w.size();
    r.traces = character_coords(p.c[static_cast<size_t>(n)], p.c[static_cast<size_t>(n + 1)],
                                p.c[static_cast<size_t>(n + 2)]);
    r.fricke_residual = fricke_residual(r.traces);
    r.tau_at_one = lp_eval(a.tau, 1.0);
    r.anti_palindromic_deviation = anti_palindromic_deviation(r.tau_a);
    r.det_j = alex.det_j;
    r.det_i_minus_j = alex.det_i_minus_j;

    constexpr double kInvariantTol = 1e-8;
    auto& f = r.flags;
    f.tau_at_one = std::abs(r.tau_at_one) / a.tau.max_abs() < kInvariantTol;
    f.anti_palindromic = r.anti_palindromic_deviation < kInvariantTol;
    f.det_j_one = std::abs(r.det_j - 1.0) < kInvariantTol;
    // det(I - J) = 1 - tr J + m2 - det J cancels terms of size |tr J|, which grows
    // exponentially with word length
    const double cancel_scale = std::max({1.0, std::abs(alex.trace), std::abs(alex.minor_sum)});
    f.eigenvalue_one = std::abs(r.det_i_minus_j) < kInvariantTol * cancel_scale;
    f.fricke = r.fricke_residual < 1e-10;
    bool finite = true;
    for (cplx t : {r.traces.a, r.traces.b, r.traces.c})
        finite = finite && std::isfinite(t.real()) && std::isfinite(t.imag()) && t != 0.0;
    f.tr_field_sanity = finite && r.ptolemy_shape_residual < 1e-8;
    f.gluing_residual = r.gluing_residual < opts.solver.tolerance;

    r.pass = r.a_vs_cbig.matched && r.a_vs_c.matched && r.cbig_vs_c.matched && f.all();
    return r;
}

namespace {

BatchEntry run_one(const std::string& text, const VerifyOptions& opts) {
    BatchEntry e;
    e.text = text;
    try {
        const RLWord w = parse_word(text);
        e.report = verify_word(w, opts);
        e.ok = true;
        e.exit_class = e.report.pass ? 0 : 3;
    } catch (const InputError& ex) {
        e.exit_class = 1;
        e.error = ex.what();
    } catch (const ValidationError& ex) {
        e.exit_class = 1;
        e.error = ex.what();
    } catch (const std::exception& ex) {
        e.exit_class = 2;
        e.error = ex.what();
    }
    return e;
}

}  // namespace

std::vector<BatchEntry> verify_batch(const std::vector<std::string>& words, const VerifyOptions& opts) {
    std::vector<BatchEntry> out(words.size());
    VerifyOptions inner = opts;
    inner.solver.parallel = false;  // parallelism lives at the word level here
    inner.det.parallel = false;
    const long count = static_cast<long>(words.size());
#pragma omp parallel for schedule(dynamic)
    for (long k = 0; k < count; ++k) out[static_cast<size_t>(k)] = run_one(words[static_cast<size_t>(k)], inner);
    return out;
}

std::vector<BatchEntry> verify_batch_serial(const std::vector<std::string>& words, const VerifyOptions& opts) {
    VerifyOptions inner = opts;
    inner.solver.parallel = false;
    inner.det.parallel = false;
    std::vector<BatchEntry> out;
    for (const auto& w : words) out.push_back(run_one(w, inner));
    return out;
}

}  // namespace twistloop
