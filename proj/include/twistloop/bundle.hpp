#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace twistloop {

// Indices are 0-based throughout: edge e_k and tetrahedron Δ_k live at k - 1.
struct RLWord {
    std::string input;    // expanded, upper-cased text as given
    std::string letters;  // canonical rotation: starts with R, ends with an L-block of length >= 2
    int rotation = 0;     // letters == input rotated left by this much
    std::vector<int> blocks;  // s_1, t_1, ..., s_n, t_n

    int size() const { return static_cast<int>(letters.size()); }
    char operator[](int i) const { return letters[static_cast<size_t>(i)]; }
    int last_l_block() const { return blocks.back(); }
    // 0-based row indices of e_{N-t_n}, e_{N-1}, e_N
    std::array<int, 3> wrapped_rows() const;
};

RLWord parse_word(std::string_view text);

using Mat2i = std::array<std::array<long long, 2>, 2>;
Mat2i monodromy_matrix(const RLWord& w);

// Rows are edges, columns tetrahedra; entries are exponents of z, z', z''.
struct GluingExponents {
    Eigen::MatrixXi G, Gp, Gpp;
};

GluingExponents gluing_exponents(const RLWord& w);

struct CompletenessExponents {
    Eigen::VectorXi C, Cp, Cpp;
};

CompletenessExponents meridian_exponents(const RLWord& w);

enum class Multiplier { One, RShape, LShape };  // 1, 2z/(1-z), 2/(z-1)

struct PatternTerm {
    int col;
    Multiplier kind;
    int tpow;
};

struct TwistedRowPattern {
    int n = 0;
    std::vector<std::vector<PatternTerm>> rows;
};

TwistedRowPattern twisted_row_pattern(const RLWord& w);

struct PtolemyStep {
    char letter;                 // φ_{i-1}, with φ_0 = φ_N
    std::array<int, 3> triple;   // (α, β, γ) before the step
};

struct PtolemySchedule {
    int n = 0;
    std::vector<PtolemyStep> steps;
    std::array<int, 3> initial;  // (N+1, N+2, N+3) as 0-based edges
    std::array<int, 3> final;    // should equal closing
    std::array<int, 3> closing;  // (N-1, N-t_n, N) as 0-based edges
};

PtolemySchedule ptolemy_schedule(const RLWord& w);

}  // namespace twistloop
