#include "twistloop/bundle.hpp"

#include <cctype>

#include "twistloop/errors.hpp"

namespace twistloop {

namespace {

std::string expand(std::string_view text) {
    std::string out;
    size_t i = 0;
    while (i < text.size()) {
        const char ch = static_cast<char>(std::toupper(static_cast<unsigned char>(text[i])));
        if (ch != 'R' && ch != 'L')
            throw InputError("invalid character '" + std::string(1, text[i]) + "' in word");
        ++i;
        size_t j = i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        long count = 1;
        if (j > i) {
            if (j - i > 4) throw InputError("exponent too large in word");
            count = std::stol(std::string(text.substr(i, j - i)));
            if (count == 0) throw InputError("zero exponent in word");
        }
        out.append(static_cast<size_t>(count), ch);
        i = j;
    }
    return out;
}

bool canonical(const std::string& s) {
    const size_t n = s.size();
    return s.front() == 'R' && n >= 2 && s[n - 1] == 'L' && s[n - 2] == 'L';
}

std::vector<int> block_lengths(const std::string& s) {
    std::vector<int> b;
    for (size_t i = 0; i < s.size();) {
        size_t j = i;
        while (j < s.size() && s[j] == s[i]) ++j;
        b.push_back(static_cast<int>(j - i));
        i = j;
    }
    return b;
}

}  // namespace

std::array<int, 3> RLWord::wrapped_rows() const {
    const int n = size();
    return {n - last_l_block() - 1, n - 2, n - 1};
}

RLWord parse_word(std::string_view text) {
    RLWord w;
    w.input = expand(text);
    if (w.input.empty()) throw InputError("empty word");
    if (w.input.find('R') == std::string::npos || w.input.find('L') == std::string::npos)
        throw InputError("not hyperbolic: word needs both R and L");
    const int n = static_cast<int>(w.input.size());
    for (int k = 0; k < n; ++k) {
        std::string rot = w.input.substr(static_cast<size_t>(k)) + w.input.substr(0, static_cast<size_t>(k));
        if (canonical(rot)) {
            w.letters = std::move(rot);
            w.rotation = k;
            w.blocks = block_lengths(w.letters);
            return w;
        }
    }
    throw InputError("unsupported word: no rotation ends with an L-block of length >= 2 (t_n = 1 case)");
}

Mat2i monodromy_matrix(const RLWord& w) {
    Mat2i m{{{1, 0}, {0, 1}}};
    for (char ch : w.letters) {
        // right-multiply by R = [[1,1],[0,1]] or L = [[1,0],[1,1]]
        for (auto& row : m) {
            if (ch == 'R')
                row[1] += row[0];
            else
                row[0] += row[1];
        }
    }
    return m;
}

TwistedRowPattern twisted_row_pattern(const RLWord& w) {
    const int n = w.size();
    TwistedRowPattern p;
    p.n = n;
    p.rows.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        int j = 1;
        while (w[(i + j) % n] != w[i]) ++j;
        const Multiplier kind = w[i] == 'R' ? Multiplier::RShape : Multiplier::LShape;
        auto& row = p.rows[i];
        row.push_back({i, Multiplier::One, 0});
        for (int k = i + 1; k <= i + j; ++k) row.push_back({k % n, kind, k / n});
        const int k = i + j + 1;
        row.push_back({k % n, Multiplier::One, k / n});
    }
    return p;
}

GluingExponents gluing_exponents(const RLWord& w) {
    const int n = w.size();
    GluingExponents g{Eigen::MatrixXi::Zero(n, n), Eigen::MatrixXi::Zero(n, n), Eigen::MatrixXi::Zero(n, n)};
    const TwistedRowPattern p = twisted_row_pattern(w);
    for (int i = 0; i < n; ++i) {
        for (const auto& term : p.rows[i]) {
            switch (term.kind) {
                case Multiplier::One: g.G(i, term.col) += 1; break;
                case Multiplier::RShape: g.Gp(i, term.col) += 2; break;
                case Multiplier::LShape: g.Gpp(i, term.col) += 2; break;
            }
        }
    }
    return g;
}

CompletenessExponents meridian_exponents(const RLWord& w) {
    const int n = w.size();
    CompletenessExponents c{Eigen::VectorXi::Zero(n), Eigen::VectorXi::Zero(n), Eigen::VectorXi::Zero(n)};
    for (int i = 0; i < n; ++i) {
        if (w[i] == 'R')
            c.Cpp(i) = -1;
        else
            c.Cp(i) = 1;
    }
    return c;
}

PtolemySchedule ptolemy_schedule(const RLWord& w) {
    const int n = w.size();
    PtolemySchedule s;
    s.n = n;
    s.initial = {n, n + 1, n + 2};
    std::array<int, 3> tri = s.initial;
    for (int i = 0; i < n; ++i) {
        const char letter = w[(i + n - 1) % n];
        s.steps.push_back({letter, tri});
        const auto [a, b, g] = tri;
        tri = letter == 'R' ? std::array<int, 3>{a, g, i} : std::array<int, 3>{g, b, i};
    }
    s.final = tri;
    s.closing = {n - 2, n - w.last_l_block() - 1, n - 1};
    return s;
}

}  // namespace twistloop
