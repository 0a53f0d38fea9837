#include "robba/matrix.hpp"

#include <sstream>

namespace robba {

ElemMatrix::ElemMatrix(ContextPtr ctx, size_t n)
    : ctx_(std::move(ctx)), n_(n), a_(n * n, LaurentElement::zero(ctx_)) {
    if (n_ == 0)
        throw InvariantViolation("matrix: dimension must be positive");
}

ElemMatrix ElemMatrix::identity(const ContextPtr &ctx, size_t n) {
    ElemMatrix m(ctx, n);
    for (size_t i = 0; i < n; ++i)
        m.at(i, i) = LaurentElement::one(ctx);
    return m;
}

ElemMatrix ElemMatrix::add(const ElemMatrix &other) const {
    ElemMatrix r(ctx_, n_);
    for (size_t k = 0; k < a_.size(); ++k)
        r.a_[k] = a_[k].add(other.a_[k]);
    return r;
}

ElemMatrix ElemMatrix::sub(const ElemMatrix &other) const {
    ElemMatrix r(ctx_, n_);
    for (size_t k = 0; k < a_.size(); ++k)
        r.a_[k] = a_[k].sub(other.a_[k]);
    return r;
}

ElemMatrix ElemMatrix::mul(const ElemMatrix &other) const {
    ElemMatrix r(ctx_, n_);
    for (size_t i = 0; i < n_; ++i)
        for (size_t j = 0; j < n_; ++j) {
            LaurentElement s = LaurentElement::zero(ctx_);
            for (size_t k = 0; k < n_; ++k)
                s = s.add(at(i, k).mul(other.at(k, j)));
            r.at(i, j) = s;
        }
    return r;
}

ElemMatrix ElemMatrix::negate() const {
    ElemMatrix r(ctx_, n_);
    for (size_t k = 0; k < a_.size(); ++k)
        r.a_[k] = a_[k].negate();
    return r;
}

ElemMatrix ElemMatrix::scale(const LaurentElement &c) const {
    ElemMatrix r(ctx_, n_);
    for (size_t k = 0; k < a_.size(); ++k)
        r.a_[k] = a_[k].mul(c);
    return r;
}

ElemMatrix ElemMatrix::scale_p(long k) const {
    ElemMatrix r(ctx_, n_);
    for (size_t i = 0; i < a_.size(); ++i)
        r.a_[i] = a_[i].shift_p(k);
    return r;
}

ElemMatrix ElemMatrix::transpose() const {
    ElemMatrix r(ctx_, n_);
    for (size_t i = 0; i < n_; ++i)
        for (size_t j = 0; j < n_; ++j)
            r.at(j, i) = at(i, j);
    return r;
}

ElemMatrix ElemMatrix::frobenius(int iterations) const {
    ElemMatrix r(ctx_, n_);
    for (size_t k = 0; k < a_.size(); ++k)
        r.a_[k] = a_[k].frobenius(iterations);
    return r;
}

ElemMatrix ElemMatrix::map(
    const std::function<LaurentElement(const LaurentElement &)> &f) const {
    ElemMatrix r(ctx_, n_);
    for (size_t k = 0; k < a_.size(); ++k)
        r.a_[k] = f(a_[k]);
    return r;
}

bool ElemMatrix::is_zero() const {
    for (auto &e : a_)
        if (!e.is_zero())
            return false;
    return true;
}

bool ElemMatrix::equals(const ElemMatrix &other) const {
    if (n_ != other.n_)
        return false;
    for (size_t k = 0; k < a_.size(); ++k)
        if (!a_[k].equals(other.a_[k]))
            return false;
    return true;
}

bool ElemMatrix::any_truncated() const {
    for (auto &e : a_)
        if (e.truncated())
            return true;
    return false;
}

std::vector<LaurentElement> ElemMatrix::apply(
    const std::vector<LaurentElement> &v) const {
    if (v.size() != n_)
        throw InvariantViolation("matrix apply: dimension mismatch");
    std::vector<LaurentElement> r(n_, LaurentElement::zero(ctx_));
    for (size_t i = 0; i < n_; ++i)
        for (size_t j = 0; j < n_; ++j)
            r[i] = r[i].add(at(i, j).mul(v[j]));
    return r;
}

std::optional<Rational> ElemMatrix::weighted_valuation(const Rational &r) const {
    std::optional<Rational> best;
    for (auto &e : a_) {
        auto w = robba::weighted_valuation(e, r);
        if (w && (!best || *w < *best))
            best = w;
    }
    return best;
}

LaurentElement ElemMatrix::det() const {
    if (n_ == 1)
        return at(0, 0);
    LaurentElement d = LaurentElement::zero(ctx_);
    for (size_t j = 0; j < n_; ++j) {
        if (at(0, j).is_zero())
            continue;
        LaurentElement cofactor = minor_matrix(0, j).det();
        LaurentElement term = at(0, j).mul(cofactor);
        d = (j % 2 == 0) ? d.add(term) : d.sub(term);
    }
    return d;
}

ElemMatrix ElemMatrix::minor_matrix(size_t i, size_t j) const {
    if (n_ == 1)
        throw InvariantViolation("minor of 1x1 matrix");
    ElemMatrix m(ctx_, n_ - 1);
    for (size_t r = 0, mr = 0; r < n_; ++r) {
        if (r == i)
            continue;
        for (size_t c = 0, mc = 0; c < n_; ++c) {
            if (c == j)
                continue;
            m.at(mr, mc) = at(r, c);
            ++mc;
        }
        ++mr;
    }
    return m;
}

ElemMatrix ElemMatrix::inverse(const Rational &r) const {
    LaurentElement d = det();
    if (d.is_zero())
        throw SingularAtPrecision("matrix inverse: determinant zero at precision");
    LaurentElement dinv = invert_positioned(d, r);
    ElemMatrix adj(ctx_, n_);
    if (n_ == 1) {
        adj.at(0, 0) = LaurentElement::one(ctx_);
    } else {
        for (size_t i = 0; i < n_; ++i)
            for (size_t j = 0; j < n_; ++j) {
                LaurentElement c = minor_matrix(j, i).det();
                if ((i + j) % 2 == 1)
                    c = c.negate();
                adj.at(i, j) = c;
            }
    }
    return adj.map([&](const LaurentElement &e) { return e.mul(dinv); });
}

ElemMatrix ElemMatrix::neumann_inverse(long max_iterations) const {
    ElemMatrix e = ElemMatrix::identity(ctx_, n_).sub(*this); // E = I - M
    if (max_iterations <= 0)
        max_iterations =
            (ctx_->hi_cap() - ctx_->lo_cap()) + 4 * ctx_->precision() + 16;
    ElemMatrix sum = ElemMatrix::identity(ctx_, n_);
    ElemMatrix pw = e;
    long it = 0;
    while (!pw.is_zero()) {
        sum = sum.add(pw);
        pw = pw.mul(e);
        if (++it > max_iterations)
            throw PrecisionExhausted("neumann_inverse: series did not terminate");
    }
    return sum;
}

std::string ElemMatrix::to_string() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < n_; ++i) {
        os << (i ? "; " : "");
        for (size_t j = 0; j < n_; ++j)
            os << (j ? ", " : "") << at(i, j).to_string();
    }
    os << "]";
    return os.str();
}

bool matrix_identity_certified(const ElemMatrix &prod) {
    auto diff = prod.sub(ElemMatrix::identity(prod.context(), prod.dim()));
    return diff.is_zero();
}

} // namespace robba
