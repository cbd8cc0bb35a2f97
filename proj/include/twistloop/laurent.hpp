#pragma once

#include <complex>
#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace twistloop {

using cplx = std::complex<double>;

// Finitely supported map exponent -> coefficient. Exact zeros are never stored;
// pruned() drops coefficients that are small relative to the largest one.
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(cplx constant);

    static LaurentPoly monomial(int exponent, cplx coeff);
    // coeffs[k] multiplies t^(min_exponent + k)
    static LaurentPoly from_dense(const std::vector<cplx>& coeffs, int min_exponent = 0);

    const std::map<int, cplx>& coeffs() const { return c_; }
    bool is_zero() const { return c_.empty(); }
    int min_exponent() const;
    int max_exponent() const;
    cplx coeff(int exponent) const;
    double max_abs() const;
    // dense coefficients from min_exponent() to max_exponent()
    std::vector<cplx> dense() const;

    void add_term(int exponent, cplx coeff);
    LaurentPoly pruned(double rel_threshold = 1e-10) const;
    LaurentPoly shifted(int k) const;  // multiply by t^k

    LaurentPoly& operator+=(const LaurentPoly& o);
    LaurentPoly& operator-=(const LaurentPoly& o);
    LaurentPoly& operator*=(cplx s);

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, cplx s) { return a *= s; }
    friend LaurentPoly operator*(cplx s, LaurentPoly a) { return a *= s; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.c_ == b.c_; }

private:
    std::map<int, cplx> c_;
};

cplx lp_eval(const LaurentPoly& p, cplx t0);
// p'(t0), termwise
cplx lp_derivative(const LaurentPoly& p, cplx t0);

// Min exponent moved to 0; sign flipped so the constant term has Re >= 0
// (Im >= 0 when Re == 0).
LaurentPoly normalize_unit(const LaurentPoly& p);

struct UnitAlignment {
    int shift = 0;
    int sign = 1;
    double relative_deviation = 0.0;  // max |p - sign t^shift q| / max |p|
    bool matched = false;
};

// Finds sign * t^shift with p ~ sign * t^shift * q. A mismatch (different
// spans or deviation above tol) comes back with matched == false.
UnitAlignment compare_up_to_unit(const LaurentPoly& p, const LaurentPoly& q, double tol);

class LaurentMatrix {
public:
    LaurentMatrix() = default;
    explicit LaurentMatrix(int n) : n_(n), e_(static_cast<size_t>(n) * n) {}

    int size() const { return n_; }
    LaurentPoly& operator()(int i, int j) { return e_[static_cast<size_t>(i) * n_ + j]; }
    const LaurentPoly& operator()(int i, int j) const { return e_[static_cast<size_t>(i) * n_ + j]; }

    // per-row (min, max) exponent over all entries; (0, 0) for a zero row
    std::vector<std::pair<int, int>> degree_bounds() const;
    Eigen::MatrixXcd eval(cplx t0) const;

private:
    int n_ = 0;
    std::vector<LaurentPoly> e_;
};

struct PolyDetOptions {
    double radius = 1.0;
    double prune = 1e-10;
    bool parallel = true;
    int parallel_min_nodes = 16;
};

LaurentPoly poly_det(const LaurentMatrix& m, const PolyDetOptions& opts = {});
// Single-threaded reference for poly_det; same nodes, same arithmetic.
LaurentPoly poly_det_serial(const LaurentMatrix& m, const PolyDetOptions& opts = {});

}  // namespace twistloop
