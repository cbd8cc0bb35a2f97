#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "support.hpp"
#include "twistloop/errors.hpp"
#include "twistloop/oneloop.hpp"

using namespace twistloop;
using Catch::Matchers::ContainsSubstring;

namespace {

const cplx kAlpha(31.45667, 9.44217);

// X straight from the word: row i runs from z_i over the block of letters equal
// to w_i that follows it, with 2z/(1-z) for R and 2/(z-1) for L, to the next
// letter after the block; indices past N pick up a power of t.
Eigen::MatrixXcd x_oracle(const std::string& w, const std::vector<cplx>& z, cplx t) {
    const int n = static_cast<int>(w.size());
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    auto tp = [&](int k) { return std::pow(t, k / n); };
    for (int i = 0; i < n; ++i) {
        int j = 1;
        while (w[(i + j) % n] != w[i]) ++j;
        m(i, i) += 1.0;
        for (int k = i + 1; k <= i + j; ++k) {
            const cplx zk = z[k % n];
            m(i, k % n) += (w[i] == 'R' ? 2.0 * zk / (1.0 - zk) : 2.0 / (zk - 1.0)) * tp(k);
        }
        m(i, (i + j + 1) % n) += tp(i + j + 1);
    }
    return m;
}

double rel_dev(const LaurentPoly& a, const LaurentPoly& b) {
    return compare_up_to_unit(a, b, 1e-8).relative_deviation;
}

}  // namespace

TEST_CASE("route A on the worked example", "[oneloop]") {
    const RLWord w = parse_word("R2L3");
    const OneLoopResult r = one_loop_det_x(w, solve_geometric(w));
    const LaurentPoly& t = r.tau_normalized;
    CHECK(t.min_exponent() == 0);
    CHECK(t.max_exponent() == 3);
    const cplx expect[] = {1.0, -kAlpha, kAlpha, -1.0};
    for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(t.coeff(k).real() - expect[k].real()) < 1e-4);
        CHECK(std::abs(t.coeff(k).imag() - expect[k].imag()) < 1e-4);
    }
    CHECK(r.route == Route::A);
    CHECK(r.degree_spread == 3);
}

TEST_CASE("X matches a direct construction from the word", "[oneloop]") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (const auto& text : testsupport::random_words(25, 8)) {
        INFO(text);
        const RLWord w = parse_word(text);
        const ShapeSolution s = solve_geometric(w);
        const LaurentMatrix x = x_matrix(w, s);
        for (int k = 0; k < 3; ++k) {
            const cplx t(u(rng), u(rng));
            const Eigen::MatrixXcd d = x.eval(t) - x_oracle(w.letters, s.z, t);
            CHECK(d.cwiseAbs().maxCoeff() < 1e-12 * (1.0 + std::abs(t)) * x.eval(t).cwiseAbs().maxCoeff());
        }
    }
}

TEST_CASE("kind multipliers expressed through zeta ratios", "[oneloop]") {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        const cplx z(u(rng), u(rng));
        const cplx zeta = 1.0 / z, zp = 1.0 / (1.0 - z), zpp = 1.0 / (z * (z - 1.0));
        const cplx scale = column_scale(1, 0, 0, zeta, zp, zpp);
        CHECK(std::abs(twisted_cell(0, 2, 0, zeta, zp, zpp, scale) - 2.0 * z / (1.0 - z)) < 1e-12 * (1.0 + std::abs(2.0 * z / (1.0 - z))));
        CHECK(std::abs(twisted_cell(0, 0, 2, zeta, zp, zpp, scale) - 2.0 / (z - 1.0)) < 1e-12 * (1.0 + std::abs(2.0 / (z - 1.0))));
        CHECK(std::abs(twisted_cell(1, 0, 0, zeta, zp, zpp, scale) - 1.0) < 1e-15);
    }
}

TEST_CASE("general engine on bundle data is route A", "[oneloop]") {
    for (const auto& text : testsupport::random_words(20, 44)) {
        const RLWord w = parse_word(text);
        const ShapeSolution s = solve_geometric(w);
        const TwistedGluingData d = bundle_gluing_data(w);
        CHECK(validate_flattening(d).ok());
        const OneLoopResult g = one_loop_general(d, s.z), a = one_loop_det_x(w, s);
        CHECK(g.tau == a.tau);
        CHECK(g.tau_normalized == a.tau_normalized);
        CHECK(g.warnings.empty());
    }
}

TEST_CASE("alternative flattenings change tau by a sign at most", "[oneloop][property]") {
    for (const char* text : {"RRLLL", "RLL", "RRLL", "RLRLL", "RRLRLL"}) {
        INFO(text);
        const RLWord w = parse_word(text);
        const ShapeSolution s = solve_geometric(w);
        const TwistedGluingData base = bundle_gluing_data(w);
        const LaurentPoly ref = one_loop_general(base, s.z).tau;
        const auto alts = search_flattenings(base, 1);
        CHECK(alts.size() > 1);
        for (const auto& fl : alts) {
            TwistedGluingData d = base;
            d.flattening = fl;
            const LaurentPoly t = one_loop_general(d, s.z).tau;
            const UnitAlignment a = compare_up_to_unit(ref, t, 1e-8);
            CHECK(a.matched);
            CHECK(a.shift == 0);
        }
    }
}

TEST_CASE("flattening validation", "[oneloop]") {
    const RLWord w = parse_word("RRLLL");
    const ShapeSolution s = solve_geometric(w);
    TwistedGluingData d = bundle_gluing_data(w);
    d.flattening.f.assign(5, 0);
    const FlatteningReport rep = validate_flattening(d);
    CHECK_FALSE(rep.condition1);
    CHECK_THAT(rep.message, ContainsSubstring("condition 1"));
    CHECK_THROWS_AS(one_loop_general(d, s.z), ValidationError);

    // meridian pairing of the standard flattening: only L letters contribute
    const FlatteningReport ok = validate_flattening(bundle_gluing_data(w));
    REQUIRE(ok.condition3.size() == 1);
    CHECK(ok.condition3[0].first == "mu");
    CHECK(ok.condition3[0].second == 0);

    TwistedGluingData toy;
    toy.n = 1;
    toy.G = toy.Gp = toy.Gpp = LaurentMatrix(1);
    toy.G(0, 0) = LaurentPoly::monomial(0, 1.0);
    toy.flattening = {{1}, {0}, {0}};
    const FlatteningReport bad = validate_flattening(toy);
    CHECK(bad.condition1);
    CHECK_FALSE(bad.condition2);
    CHECK_THAT(bad.message, ContainsSubstring("condition 2"));
    CHECK_THROWS_AS(one_loop_general(toy, {cplx(0.5, 0.5)}), ValidationError);
    toy.G(0, 0) = LaurentPoly::monomial(0, 2.0);
    CHECK(validate_flattening(toy).ok());
}

TEST_CASE("off-solution shapes are evaluated with a warning", "[oneloop]") {
    const RLWord w = parse_word("RRLLL");
    ShapeSolution s = solve_geometric(w);
    s.z[2] += cplx(0.01, -0.02);
    const OneLoopResult r = one_loop_general(bundle_gluing_data(w), s.z);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0] == "shapes fail gluing residual check");
    CHECK(r.shape_residual > 1e-4);
    CHECK_FALSE(r.tau.is_zero());
}

TEST_CASE("big Ptolemy Jacobian", "[oneloop]") {
    const RLWord w = parse_word("RRLLL");
    const ShapeSolution s = solve_geometric(w);
    const PtolemyAssignment p = solve_ptolemy(w, s);
    const LaurentMatrix m = big_jacobian_matrix(w, p);
    REQUIRE(m.size() == 8);
    const auto bounds = m.degree_bounds();
    for (int i = 0; i < 5; ++i) CHECK(bounds[i] == std::pair<int, int>{0, 0});
    for (int i = 5; i < 8; ++i) CHECK(bounds[i].second == 1);

    const OneLoopResult big = one_loop_big_jacobian(w, p);
    const OneLoopResult a = one_loop_det_x(w, s);
    CHECK(rel_dev(a.tau, big.tau) < 1e-8);

    // τ'(1) = -α + 2α - 3 for the normalized cubic, up to the overall sign
    const cplx d = one_loop_at_lambda(w, p);
    CHECK(std::min(std::abs(d - (kAlpha - 3.0)), std::abs(d + (kAlpha - 3.0))) < 1e-4);
    const cplx da = lp_derivative(a.tau_normalized, 1.0);
    CHECK(std::min(std::abs(d - da), std::abs(d + da)) < 1e-9 * std::abs(da));

    PtolemyAssignment other = p;
    other.word = parse_word("RLL");
    CHECK_THROWS_AS(big_jacobian_matrix(w, other), ValidationError);
}

TEST_CASE("routes A and C' agree on random words", "[oneloop][property]") {
    for (const auto& text : testsupport::random_words(40, 90)) {
        INFO(text);
        const RLWord w = parse_word(text);
        const ShapeSolution s = solve_geometric(w);
        const OneLoopResult a = one_loop_det_x(w, s);
        const OneLoopResult b = one_loop_big_jacobian(w, solve_ptolemy(w, s));
        CHECK(rel_dev(a.tau, b.tau) < 1e-8);
        CHECK(std::abs(lp_eval(a.tau_normalized, 1.0)) < 1e-8 * a.tau_normalized.max_abs());
    }
}
