#pragma once

#include <string>
#include <vector>

#include "twistloop/geometry.hpp"
#include "twistloop/laurent.hpp"
#include "twistloop/oneloop.hpp"
#include "twistloop/ptolemy.hpp"

namespace twistloop {

struct VerifyOptions {
    SolverOptions solver;
    PolyDetOptions det;
    double tol_compare = 1e-8;
};

struct InvariantFlags {
    bool tau_at_one = false;        // τ_A(1) = 0
    bool anti_palindromic = false;  // a_0 = 1, a_k = -a_{3-k}
    bool det_j_one = false;
    bool eigenvalue_one = false;    // det(I - J) = 0
    bool fricke = false;
    bool tr_field_sanity = false;   // finite nonzero traces, Ptolemy shapes = Newton shapes
    bool gluing_residual = false;

    bool all() const {
        return tau_at_one && anti_palindromic && det_j_one && eigenvalue_one && fricke && tr_field_sanity &&
               gluing_residual;
    }
};

struct ComparisonReport {
    std::string input;
    std::string word;
    int rotation = 0;
    int n = 0;
    std::vector<int> blocks;

    std::vector<cplx> shapes;
    double volume = 0.0;
    double gluing_residual = 0.0;
    std::vector<cplx> ptolemy;  // c_1..c_{N+3}
    CharacterCoords traces{};

    LaurentPoly tau_a, tau_cbig, tau_c;  // unit-normalized
    UnitAlignment a_vs_cbig, a_vs_c, cbig_vs_c;

    cplx tau_at_one;
    double anti_palindromic_deviation = 0.0;
    cplx det_j, det_i_minus_j;
    double fricke_residual = 0.0;
    double ptolemy_shape_residual = 0.0;

    InvariantFlags flags;
    double tolerance = 1e-8;
    bool pass = false;
};

// Max deviation of a normalized cubic from (1, -α, α, -1), the symmetric part
// relative to the largest coefficient; infinity when the degree is not 3.
double anti_palindromic_deviation(const LaurentPoly& tau);

ComparisonReport verify_word(const RLWord& w, const VerifyOptions& opts = {});

struct BatchEntry {
    std::string text;
    bool ok = false;          // pipeline ran to completion
    int exit_class = 0;       // 0 pass, 1 input error, 2 numerical failure, 3 mismatch
    std::string error;
    ComparisonReport report;
};

// Output order matches input order. The parallel and serial versions produce
// identical entries.
std::vector<BatchEntry> verify_batch(const std::vector<std::string>& words, const VerifyOptions& opts = {});
std::vector<BatchEntry> verify_batch_serial(const std::vector<std::string>& words, const VerifyOptions& opts = {});

}  // namespace twistloop
