#pragma once

#include <string>
#include <vector>

#include "twistloop/bundle.hpp"
#include "twistloop/geometry.hpp"
#include "twistloop/laurent.hpp"
#include "twistloop/ptolemy.hpp"

namespace twistloop {

struct Flattening {
    std::vector<int> f, fp, fpp;
};

struct CompletenessCurve {
    std::string name;
    std::vector<int> c, cp, cpp;
};

struct TwistedGluingData {
    int n = 0;
    LaurentMatrix G, Gp, Gpp;  // integer coefficients
    std::vector<CompletenessCurve> completeness;
    Flattening flattening;
};

struct FlatteningReport {
    bool condition1 = false;  // f + f' + f'' = 1
    bool condition2 = false;  // G f + G' f' + G'' f'' = 2 at t = 1
    std::vector<std::pair<std::string, int>> condition3;  // C f + C' f' + C'' f'' per curve; informational
    std::string message;
    bool ok() const { return condition1 && condition2; }
};

enum class Route { A, CBig, C, General };
const char* route_name(Route r);

struct OneLoopResult {
    LaurentPoly tau;
    LaurentPoly tau_normalized;
    Route route = Route::General;
    double shape_residual = 0.0;
    int degree_spread = 0;
    std::vector<std::string> warnings;
};

FlatteningReport validate_flattening(const TwistedGluingData& d);

// Twisted gluing data of the canonical triangulation with f = 1, f' = f'' = 0
// and μ as the only completeness curve.
TwistedGluingData bundle_gluing_data(const RLWord& w);

// (g ζ + g' ζ' + g'' ζ'') / scale; every route that builds a twisted matrix
// from exponents goes through this.
cplx twisted_cell(int g, int gp, int gpp, cplx zeta, cplx zeta_p, cplx zeta_pp, cplx scale);
cplx column_scale(int f, int fp, int fpp, cplx zeta, cplx zeta_p, cplx zeta_pp);
LaurentMatrix twisted_matrix(const TwistedGluingData& d, const std::vector<cplx>& z);

// X of the bundle: columns of the twisted matrix divided by ζ_j.
LaurentMatrix x_matrix(const RLWord& w, const ShapeSolution& s);
LaurentMatrix big_jacobian_matrix(const RLWord& w, const PtolemyAssignment& p);

OneLoopResult one_loop_general(const TwistedGluingData& d, const std::vector<cplx>& z,
                               const PolyDetOptions& opts = {});
OneLoopResult one_loop_det_x(const RLWord& w, const ShapeSolution& s, const PolyDetOptions& opts = {});
OneLoopResult one_loop_big_jacobian(const RLWord& w, const PtolemyAssignment& p, const PolyDetOptions& opts = {});
cplx one_loop_at_lambda(const RLWord& w, const PtolemyAssignment& p, const PolyDetOptions& opts = {});

// All flattenings with f', f'' in [-range, range]^N satisfying conditions 1 and 2.
std::vector<Flattening> search_flattenings(const TwistedGluingData& d, int range = 1);

}  // namespace twistloop
