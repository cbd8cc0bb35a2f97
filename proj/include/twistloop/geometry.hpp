#pragma once

#include <cstdint>
#include <vector>

#include "twistloop/bundle.hpp"
#include "twistloop/laurent.hpp"

namespace twistloop {

struct SolverOptions {
    double tolerance = 1e-12;
    int max_iterations = 100;
    int max_restarts = 16;
    double damping = 1.0;  // initial Newton step scale
    std::uint64_t rng_seed = 20240611;
    double restart_radius = 0.3;
    bool parallel = true;
};

struct ShapeSolution {
    std::vector<cplx> z;
    std::vector<cplx> zeta, zeta_p, zeta_pp;  // 1/z, 1/(1-z), 1/(z(z-1))
    double residual = 0.0;  // max |lhs - 1| over all N gluing equations and μ
    double volume = 0.0;
    std::vector<int> degenerate;  // tetrahedra with real shape

    int iterations = 0;
    int candidate = 0;  // 0 is the regular start
    int converged_candidates = 0;
    std::vector<double> residual_history;  // log-form residual norms of the winning run
};

// One multiplicative equation Π z^g z'^g' z''^g''.
struct MonomialExponents {
    Eigen::VectorXi g, gp, gpp;
};

cplx monomial_value(const MonomialExponents& e, const std::vector<cplx>& z);

// Rows e_1..e_N of the gluing equations followed by μ.
std::vector<MonomialExponents> bundle_equations(const RLWord& w);

double gluing_residual(const RLWord& w, const std::vector<cplx>& z);

ShapeSolution make_shape_solution(const RLWord& w, std::vector<cplx> z);

ShapeSolution solve_geometric(const RLWord& w, const SolverOptions& opts = {});

double bloch_wigner(cplx z);
double volume(const std::vector<cplx>& z);

}  // namespace twistloop
