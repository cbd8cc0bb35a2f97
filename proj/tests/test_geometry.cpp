#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"
#include "twistloop/errors.hpp"
#include "twistloop/geometry.hpp"

using namespace twistloop;

namespace {

// Volumes of the same bundles from SnapPy 3.3.2 (Manifold('b++<word>'), high precision).
struct VolumeOracle {
    const char* word;
    double volume;
};
const VolumeOracle kSnapPy[] = {
    {"RLL", 2.66674478344906},
    {"RRLL", 3.663862376708876},
    {"RRRLRLL", 6.105653653969338},
    {"RLLLLLLLLLLL", 3.5506445847205192},
};

// Л(θ) = -∫_0^θ log|2 sin u| du, with -∫ log(2u) done analytically and the
// smooth remainder log(sin u / u) by composite Simpson.
double lobachevsky(double theta) {
    const int m = 20000;
    const double h = theta / m;
    auto f = [](double u) { return u == 0.0 ? 0.0 : std::log(std::sin(u) / u); };
    double s = f(0.0) + f(theta);
    for (int k = 1; k < m; ++k) s += (k % 2 ? 4.0 : 2.0) * f(k * h);
    const double smooth = s * h / 3.0;
    return -(theta * std::log(2.0 * theta) - theta) - smooth;
}

std::vector<cplx> sorted(std::vector<cplx> z) {
    std::sort(z.begin(), z.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return z;
}

}  // namespace

TEST_CASE("geometric solution of the worked example", "[geometry]") {
    const ShapeSolution s = solve_geometric(parse_word("RRLLL"));
    const cplx expect[] = {{-0.19373, 0.90574}, {0.80627, 0.90574}, {-0.19373, 0.90574}, {0.35508, 0.35232}, {0.35508, 0.35232}};
    for (int j = 0; j < 5; ++j) {
        CHECK(std::abs(s.z[j].real() - expect[j].real()) < 1e-4);
        CHECK(std::abs(s.z[j].imag() - expect[j].imag()) < 1e-4);
    }
    CHECK(std::abs(s.volume - 4.17775) < 1e-4);
    CHECK(std::abs(s.volume - 4.1777510732) < 1e-9);
    CHECK(s.residual < 1e-12);

    // λ: (z_1 (z_2'')^-1 (z_3'')^-1 z_4^-1 (z_3'')^-1 z_2')^2 = 1, not used by the solver
    auto zpp = [&](int j) { return 1.0 - 1.0 / s.z[j]; };
    const cplx zp2 = 1.0 / (1.0 - s.z[1]);
    const cplx lam = s.z[0] / zpp(1) / zpp(2) / s.z[3] / zpp(2) * zp2;
    CHECK(std::abs(lam * lam - 1.0) < 1e-10);
}

TEST_CASE("volumes agree with SnapPy", "[geometry]") {
    for (const auto& o : kSnapPy) {
        INFO(o.word);
        const ShapeSolution s = solve_geometric(parse_word(o.word));
        CHECK(std::abs(s.volume - o.volume) < 1e-6);
        for (cplx z : s.z) CHECK(z.imag() > 0.0);
        CHECK(s.residual < 1e-12);
    }
}

TEST_CASE("back-substitution and positivity on random words", "[geometry][property]") {
    for (const auto& text : testsupport::random_words(60, 31)) {
        INFO(text);
        const RLWord w = parse_word(text);
        const ShapeSolution s = solve_geometric(w);
        CHECK(s.residual < 1e-12);
        CHECK(gluing_residual(w, s.z) == s.residual);
        for (cplx z : s.z) CHECK(z.imag() > 0.0);
        CHECK(s.volume > 0.0);
        for (size_t j = 0; j < s.z.size(); ++j) {
            CHECK(std::abs(s.z[j] * s.zeta[j] - 1.0) < 1e-15);
            CHECK(std::abs((1.0 - s.z[j]) * s.zeta_p[j] - 1.0) < 1e-15);
            CHECK(std::abs(s.z[j] * (s.z[j] - 1.0) * s.zeta_pp[j] - 1.0) < 1e-14);
        }
    }
}

TEST_CASE("Newton converges quadratically near the solution", "[geometry][property]") {
    for (const auto& text : testsupport::random_words(30, 77)) {
        INFO(text);
        const ShapeSolution s = solve_geometric(parse_word(text));
        const auto& h = s.residual_history;
        const auto floor = std::find_if(h.begin(), h.end(), [](double r) { return r < 1e-12; });
        REQUIRE(floor != h.end());
        const auto k = floor - h.begin();
        if (k >= 2 && h[k - 2] > 1e-12) CHECK(h[k - 2] / h[k] >= 1e4);
        for (long i = 0; i + 1 < k; ++i)
            if (h[i] < 1e-2) CHECK(h[i + 1] <= 10.0 * h[i] * h[i] + 1e-13);
    }
}

TEST_CASE("solutions agree across canonical rotations", "[geometry][property]") {
    for (const char* text : {"RRLLRLL", "RRLLLRLL", "RLLRRLLRLL", "RRRLLRLLL"}) {
        const std::string base = text;
        const auto ref = sorted(solve_geometric(parse_word(base)).z);
        int others = 0;
        for (size_t k = 1; k < base.size(); ++k) {
            const std::string rot = base.substr(k) + base.substr(0, k);
            const RLWord w = parse_word(rot);
            if (w.rotation != 0) continue;  // only rotations that are canonical themselves
            ++others;
            const auto z = sorted(solve_geometric(w).z);
            for (size_t j = 0; j < z.size(); ++j) CHECK(std::abs(z[j] - ref[j]) < 1e-9);
        }
        CHECK(others >= 1);
    }
}

TEST_CASE("solver is deterministic and thread-independent", "[geometry][parallel]") {
    SolverOptions par, ser;
    ser.parallel = false;
    for (const char* text : {"RRLLL", "RLLLLLLLLLLL", "RRLRLLRRLLL"}) {
        const RLWord w = parse_word(text);
        const ShapeSolution a = solve_geometric(w, par), b = solve_geometric(w, par), c = solve_geometric(w, ser);
        CHECK(a.z == b.z);
        CHECK(a.z == c.z);
        CHECK(a.candidate == c.candidate);
    }
}

TEST_CASE("solver failure and option validation", "[geometry]") {
    SolverOptions o;
    o.max_iterations = 1;
    o.max_restarts = 0;
    CHECK_THROWS_AS(solve_geometric(parse_word("RRLLL"), o), SolverFailure);
    CHECK_THROWS_WITH(solve_geometric(parse_word("RRLLL"), o), Catch::Matchers::ContainsSubstring("best residual"));
    SolverOptions bad;
    bad.tolerance = 0.0;
    CHECK_THROWS_AS(solve_geometric(parse_word("RRLLL"), bad), InputError);
}

TEST_CASE("Bloch-Wigner values", "[geometry]") {
    CHECK(bloch_wigner(0.5) == 0.0);
    CHECK(bloch_wigner(-3.0) == 0.0);
    CHECK(bloch_wigner(7.0) == 0.0);
    const double oracle = 3.0 * lobachevsky(std::numbers::pi / 3.0);
    CHECK(std::abs(oracle - 1.0149416064096536) < 1e-10);
    CHECK(std::abs(bloch_wigner(std::polar(1.0, std::numbers::pi / 3.0)) - oracle) < 1e-10);
    // a right-angled ideal tetrahedron: z = i has volume 2 Л(π/4)
    CHECK(std::abs(bloch_wigner(cplx(0.0, 1.0)) - 2.0 * lobachevsky(std::numbers::pi / 4.0)) < 1e-10);

    const ShapeSolution s = make_shape_solution(parse_word("RLL"), {cplx(0.5, 0.5), cplx(2.0, 0.0), cplx(0.3, 0.2)});
    CHECK(s.degenerate == std::vector<int>{1});
    CHECK_THROWS_AS(make_shape_solution(parse_word("RLL"), {1.0, 0.5, 0.5}), DomainError);
}

TEST_CASE("Bloch-Wigner symmetries", "[geometry][property]") {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> re(-3.0, 3.0), im(1e-3, 3.0);
    for (int k = 0; k < 500; ++k) {
        const cplx z(re(rng), im(rng));
        const double d = bloch_wigner(z);
        CHECK(std::abs(bloch_wigner(1.0 - 1.0 / z) - d) < 1e-10);
        CHECK(std::abs(bloch_wigner(1.0 / (1.0 - z)) - d) < 1e-10);
        CHECK(std::abs(bloch_wigner(std::conj(z)) + d) < 1e-10);
        CHECK(d > 0.0);
    }
}
