#include "twistloop/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "twistloop/errors.hpp"

namespace twistloop {

LaurentPoly::LaurentPoly(cplx constant) { add_term(0, constant); }

LaurentPoly LaurentPoly::monomial(int exponent, cplx coeff) {
    LaurentPoly p;
    p.add_term(exponent, coeff);
    return p;
}

LaurentPoly LaurentPoly::from_dense(const std::vector<cplx>& coeffs, int min_exponent) {
    LaurentPoly p;
    for (size_t k = 0; k < coeffs.size(); ++k)
        p.add_term(min_exponent + static_cast<int>(k), coeffs[k]);
    return p;
}

int LaurentPoly::min_exponent() const {
    if (c_.empty()) throw DomainError("zero polynomial has no exponents");
    return c_.begin()->first;
}

int LaurentPoly::max_exponent() const {
    if (c_.empty()) throw DomainError("zero polynomial has no exponents");
    return c_.rbegin()->first;
}

cplx LaurentPoly::coeff(int exponent) const {
    auto it = c_.find(exponent);
    return it == c_.end() ? cplx{} : it->second;
}

double LaurentPoly::max_abs() const {
    double m = 0.0;
    for (const auto& [e, a] : c_) m = std::max(m, std::abs(a));
    return m;
}

std::vector<cplx> LaurentPoly::dense() const {
    if (c_.empty()) return {};
    std::vector<cplx> out(static_cast<size_t>(max_exponent() - min_exponent() + 1));
    for (const auto& [e, a] : c_) out[static_cast<size_t>(e - min_exponent())] = a;
    return out;
}

void LaurentPoly::add_term(int exponent, cplx coeff) {
    if (coeff == cplx{}) return;
    auto [it, inserted] = c_.try_emplace(exponent, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == cplx{}) c_.erase(it);
    }
}

LaurentPoly LaurentPoly::pruned(double rel_threshold) const {
    const double cut = rel_threshold * max_abs();
    LaurentPoly out;
    for (const auto& [e, a] : c_)
        if (std::abs(a) > cut) out.c_.emplace(e, a);
    return out;
}

LaurentPoly LaurentPoly::shifted(int k) const {
    LaurentPoly out;
    for (const auto& [e, a] : c_) out.c_.emplace(e + k, a);
    return out;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
    for (const auto& [e, a] : o.c_) add_term(e, a);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
    for (const auto& [e, a] : o.c_) add_term(e, -a);
    return *this;
}

LaurentPoly& LaurentPoly::operator*=(cplx s) {
    if (s == cplx{}) {
        c_.clear();
        return *this;
    }
    for (auto& [e, a] : c_) a *= s;
    return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly out;
    for (const auto& [ea, ca] : a.c_)
        for (const auto& [eb, cb] : b.c_) out.add_term(ea + eb, ca * cb);
    return out;
}

cplx lp_eval(const LaurentPoly& p, cplx t0) {
    if (t0 == cplx{}) throw DomainError("lp_eval: t0 must be nonzero");
    cplx s{};
    for (const auto& [e, a] : p.coeffs()) s += a * std::pow(t0, e);
    return s;
}

cplx lp_derivative(const LaurentPoly& p, cplx t0) {
    if (t0 == cplx{}) throw DomainError("lp_derivative: t0 must be nonzero");
    cplx s{};
    for (const auto& [e, a] : p.coeffs())
        if (e != 0) s += static_cast<double>(e) * a * std::pow(t0, e - 1);
    return s;
}

LaurentPoly normalize_unit(const LaurentPoly& p) {
    if (p.is_zero()) return p;
    LaurentPoly q = p.shifted(-p.min_exponent());
    const cplx c0 = q.coeff(0);
    if (c0.real() < 0.0 || (c0.real() == 0.0 && c0.imag() < 0.0)) q *= -1.0;
    return q;
}

UnitAlignment compare_up_to_unit(const LaurentPoly& p, const LaurentPoly& q, double tol) {
    if (p.is_zero() || q.is_zero()) throw DomainError("compare_up_to_unit: zero polynomial");
    UnitAlignment out;
    out.shift = p.min_exponent() - q.min_exponent();
    if (p.max_exponent() - p.min_exponent() != q.max_exponent() - q.min_exponent()) {
        out.relative_deviation = INFINITY;
        return out;
    }
    const double scale = p.max_abs();
    double best = INFINITY;
    for (int s : {1, -1}) {
        double dev = 0.0;
        for (int e = p.min_exponent(); e <= p.max_exponent(); ++e)
            dev = std::max(dev, std::abs(p.coeff(e) - static_cast<double>(s) * q.coeff(e - out.shift)));
        if (dev < best) {
            best = dev;
            out.sign = s;
        }
    }
    out.relative_deviation = best / scale;
    out.matched = out.relative_deviation <= tol;
    return out;
}

std::vector<std::pair<int, int>> LaurentMatrix::degree_bounds() const {
    std::vector<std::pair<int, int>> b(static_cast<size_t>(n_), {0, 0});
    for (int i = 0; i < n_; ++i) {
        bool any = false;
        for (int j = 0; j < n_; ++j) {
            const auto& p = (*this)(i, j);
            if (p.is_zero()) continue;
            if (!any) {
                b[i] = {p.min_exponent(), p.max_exponent()};
                any = true;
            } else {
                b[i].first = std::min(b[i].first, p.min_exponent());
                b[i].second = std::max(b[i].second, p.max_exponent());
            }
        }
    }
    return b;
}

Eigen::MatrixXcd LaurentMatrix::eval(cplx t0) const {
    Eigen::MatrixXcd m(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m(i, j) = lp_eval((*this)(i, j), t0);
    return m;
}

namespace {

struct NodePlan {
    std::vector<std::pair<int, int>> bounds;
    int low = 0;    // sum of row minima
    int nodes = 1;  // D + 1
};

NodePlan plan_nodes(const LaurentMatrix& m) {
    NodePlan plan;
    plan.bounds = m.degree_bounds();
    int spread = 0;
    for (auto [lo, hi] : plan.bounds) {
        plan.low += lo;
        spread += hi - lo;
    }
    plan.nodes = spread + 1;
    return plan;
}

cplx node(const NodePlan& plan, double radius, int k) {
    return std::polar(radius, 2.0 * std::numbers::pi * k / plan.nodes);
}

// determinant of the row-shifted matrix at node x
cplx det_at(const LaurentMatrix& m, const NodePlan& plan, cplx x) {
    const int n = m.size();
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i) {
        const int lo = plan.bounds[i].first;
        for (int j = 0; j < n; ++j) {
            cplx s{};
            for (const auto& [e, c] : m(i, j).coeffs()) s += c * std::pow(x, e - lo);
            a(i, j) = s;
        }
    }
    return a.partialPivLu().determinant();
}

LaurentPoly interpolate(const NodePlan& plan, const std::vector<cplx>& dets, const PolyDetOptions& opts) {
    const int n = plan.nodes;
    std::vector<cplx> coeffs(static_cast<size_t>(n));
    for (int mexp = 0; mexp < n; ++mexp) {
        cplx s{};
        for (int k = 0; k < n; ++k) {
            const int idx = static_cast<int>((static_cast<long long>(mexp) * k) % n);
            s += dets[k] * std::polar(1.0, -2.0 * std::numbers::pi * idx / n);
        }
        coeffs[mexp] = s / (static_cast<double>(n) * std::pow(opts.radius, mexp));
    }
    return LaurentPoly::from_dense(coeffs, plan.low).pruned(opts.prune);
}

}  // namespace

LaurentPoly poly_det_serial(const LaurentMatrix& m, const PolyDetOptions& opts) {
    if (m.size() == 0) return LaurentPoly(1.0);
    const NodePlan plan = plan_nodes(m);
    std::vector<cplx> dets(static_cast<size_t>(plan.nodes));
    for (int k = 0; k < plan.nodes; ++k) dets[k] = det_at(m, plan, node(plan, opts.radius, k));
    return interpolate(plan, dets, opts);
}

LaurentPoly poly_det(const LaurentMatrix& m, const PolyDetOptions& opts) {
    if (m.size() == 0) return LaurentPoly(1.0);
    const NodePlan plan = plan_nodes(m);
    std::vector<cplx> dets(static_cast<size_t>(plan.nodes));
    const bool par = opts.parallel && plan.nodes >= opts.parallel_min_nodes;
#pragma omp parallel for schedule(static) if (par)
    for (int k = 0; k < plan.nodes; ++k) dets[k] = det_at(m, plan, node(plan, opts.radius, k));
    return interpolate(plan, dets, opts);
}

}  // namespace twistloop
