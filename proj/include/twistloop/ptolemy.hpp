#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "twistloop/bundle.hpp"
#include "twistloop/geometry.hpp"
#include "twistloop/laurent.hpp"

namespace twistloop {

using cplxl = std::complex<long double>;

// Value plus the three partials with respect to the initial triple.
template <class T>
struct Dual3 {
    std::complex<T> v{};
    std::array<std::complex<T>, 3> g{};

    static Dual3 variable(std::complex<T> value, int k) {
        Dual3 d{value, {}};
        d.g[static_cast<size_t>(k)] = T(1);
        return d;
    }
    static Dual3 constant(std::complex<T> value) { return Dual3{value, {}}; }

    friend Dual3 operator+(const Dual3& a, const Dual3& b) {
        Dual3 r{a.v + b.v, {}};
        for (size_t k = 0; k < 3; ++k) r.g[k] = a.g[k] + b.g[k];
        return r;
    }
    friend Dual3 operator-(const Dual3& a, const Dual3& b) {
        Dual3 r{a.v - b.v, {}};
        for (size_t k = 0; k < 3; ++k) r.g[k] = a.g[k] - b.g[k];
        return r;
    }
    friend Dual3 operator*(const Dual3& a, const Dual3& b) {
        Dual3 r{a.v * b.v, {}};
        for (size_t k = 0; k < 3; ++k) r.g[k] = a.g[k] * b.v + a.v * b.g[k];
        return r;
    }
    friend Dual3 operator/(const Dual3& a, const Dual3& b) {
        const std::complex<T> q = a.v / b.v;
        Dual3 r{q, {}};
        for (size_t k = 0; k < 3; ++k) r.g[k] = (a.g[k] - q * b.g[k]) / b.v;
        return r;
    }
};

// Runs c_i = (c_α² + c_γ²)/c_β (R) or (c_β² + c_γ²)/c_α (L) from the initial
// triple. Returns all N+3 values, 0-based.
template <class S>
std::vector<S> ptolemy_recurrence(const PtolemySchedule& s, const std::array<S, 3>& init) {
    std::vector<S> c(static_cast<size_t>(s.n + 3));
    for (size_t k = 0; k < 3; ++k) c[static_cast<size_t>(s.initial[k])] = init[k];
    for (int i = 0; i < s.n; ++i) {
        const auto& st = s.steps[static_cast<size_t>(i)];
        const S& a = c[static_cast<size_t>(st.triple[0])];
        const S& b = c[static_cast<size_t>(st.triple[1])];
        const S& g = c[static_cast<size_t>(st.triple[2])];
        c[static_cast<size_t>(i)] = st.letter == 'R' ? (a * a + g * g) / b : (b * b + g * g) / a;
    }
    return c;
}

struct PtolemyBranch {
    int sign_r = 1, sign_z = 1;  // square-root branches of y/z and z
    double initial_residual = 0.0;
    double closing_residual = 0.0;
    double shape_residual = 0.0;
    bool accepted = false;
};

struct PtolemyAssignment {
    RLWord word;
    std::vector<cplx> c;          // c_1..c_{N+3} at 0..N+2, gauge c_{N+1} = 1
    std::vector<cplxl> c_ext;     // same values at extended precision
    double step_residual = 0.0;   // max |c_i c_pivot - (sum of squares)| / scale
    double closing_residual = 0.0;
    double shape_residual = 0.0;  // against the shapes used to seed the solve
    std::vector<PtolemyBranch> branches;
    int chosen = -1;
};

PtolemyAssignment solve_ptolemy(const RLWord& w, const ShapeSolution& s, const SolverOptions& opts = {});

// Wraps user-supplied values, filling the residual fields.
PtolemyAssignment make_assignment(const RLWord& w, const std::vector<cplx>& c);

std::vector<cplx> ptolemy_shapes(const PtolemyAssignment& p);
ShapeSolution shapes_from_ptolemy(const PtolemyAssignment& p);

struct CharacterCoords {
    cplx a, b, c;
};

CharacterCoords character_coords(cplx x, cplx y, cplx z);
double fricke_residual(const CharacterCoords& t);  // |a²+b²+c²-abc|

struct AlexanderResult {
    LaurentPoly tau;  // det(tI - J), monic cubic
    Eigen::Matrix3cd jacobian;
    cplx trace, minor_sum;
    cplx det_j;       // product of step determinants
    cplx det_j_lu;    // cofactor expansion of J, diagnostic only
    cplx det_i_minus_j;
    std::array<cplx, 3> eigenvalues;
};

AlexanderResult alexander_polynomial(const RLWord& w, const PtolemyAssignment& p);

struct HomogeneityReport {
    cplx k;
    double scaling_deviation = 0.0;   // max |c_i(k init) - k c_i| / max |k c_i|
    double jacobian_deviation = 0.0;  // max |J(k init) - J| / max |J|
    double tau_deviation = 0.0;
    double euler_residual = 0.0;      // |J (x,y,z) - (x,y,z)| / |(x,y,z)|
};

HomogeneityReport homogeneity_check(const RLWord& w, const PtolemyAssignment& p, cplx k);

}  // namespace twistloop
