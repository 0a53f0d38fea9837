#include "robba/element.hpp"

#include <algorithm>
#include <sstream>

namespace robba {

LaurentElement::LaurentElement(ContextPtr ctx, TermMap terms, bool trunc_lo,
                               bool trunc_hi)
    : ctx_(std::move(ctx)), trunc_lo_(trunc_lo), trunc_hi_(trunc_hi) {
    for (auto &[e, c] : terms)
        insert_term(e, c);
}

void LaurentElement::insert_term(long exp, const PAdicScalar &c) {
    if (c.is_zero())
        return;
    if (exp < ctx_->lo_cap()) {
        trunc_lo_ = true;
        return;
    }
    if (exp > ctx_->hi_cap()) {
        trunc_hi_ = true;
        return;
    }
    terms_[exp] = c;
}

LaurentElement LaurentElement::one(const ContextPtr &ctx) {
    return monomial(ctx, 0, 1);
}

LaurentElement LaurentElement::monomial(const ContextPtr &ctx, long exp,
                                        const PAdicScalar &c) {
    LaurentElement r(ctx);
    r.insert_term(exp, c);
    return r;
}

LaurentElement LaurentElement::monomial(const ContextPtr &ctx, long exp, long c) {
    return monomial(ctx, exp, PAdicScalar::from_long(*ctx, c));
}

LaurentElement LaurentElement::from_terms(
    const ContextPtr &ctx, const std::vector<std::pair<long, long>> &terms) {
    LaurentElement r(ctx);
    for (auto &[e, c] : terms)
        r = r.add(monomial(ctx, e, c));
    return r;
}

LaurentElement LaurentElement::with_flags(bool lo, bool hi) const {
    LaurentElement r = *this;
    r.trunc_lo_ = r.trunc_lo_ || lo;
    r.trunc_hi_ = r.trunc_hi_ || hi;
    return r;
}

long LaurentElement::min_exponent() const {
    if (is_zero())
        throw ZeroElement("min_exponent of zero element");
    return terms_.begin()->first;
}

long LaurentElement::max_exponent() const {
    if (is_zero())
        throw ZeroElement("max_exponent of zero element");
    return terms_.rbegin()->first;
}

long LaurentElement::min_vexp() const {
    if (is_zero())
        throw ZeroElement("min_vexp of zero element");
    long v = terms_.begin()->second.vexp();
    for (auto &[e, c] : terms_)
        v = std::min(v, c.vexp());
    return v;
}

long LaurentElement::max_vexp() const {
    if (is_zero())
        throw ZeroElement("max_vexp of zero element");
    long v = terms_.begin()->second.vexp();
    for (auto &[e, c] : terms_)
        v = std::max(v, c.vexp());
    return v;
}

bool LaurentElement::is_integral() const {
    for (auto &[e, c] : terms_)
        if (c.vexp() < 0)
            return false;
    return true;
}

PAdicScalar LaurentElement::coeff(long exp) const {
    auto it = terms_.find(exp);
    return it == terms_.end() ? PAdicScalar::zero() : it->second;
}

LaurentElement LaurentElement::add(const LaurentElement &other) const {
    require_same_context(ctx_, other.ctx_);
    LaurentElement r(ctx_);
    r.trunc_lo_ = trunc_lo_ || other.trunc_lo_;
    r.trunc_hi_ = trunc_hi_ || other.trunc_hi_;
    auto it = terms_.begin(), jt = other.terms_.begin();
    while (it != terms_.end() || jt != other.terms_.end()) {
        if (jt == other.terms_.end() || (it != terms_.end() && it->first < jt->first)) {
            r.insert_term(it->first, it->second);
            ++it;
        } else if (it == terms_.end() || jt->first < it->first) {
            r.insert_term(jt->first, jt->second);
            ++jt;
        } else {
            r.insert_term(it->first, it->second.add(*ctx_, jt->second));
            ++it;
            ++jt;
        }
    }
    return r;
}

LaurentElement LaurentElement::sub(const LaurentElement &other) const {
    return add(other.negate());
}

LaurentElement LaurentElement::negate() const {
    LaurentElement r(ctx_);
    r.trunc_lo_ = trunc_lo_;
    r.trunc_hi_ = trunc_hi_;
    for (auto &[e, c] : terms_)
        r.terms_[e] = c.negate(*ctx_);
    return r;
}

LaurentElement LaurentElement::mul(const LaurentElement &other) const {
    require_same_context(ctx_, other.ctx_);
    LaurentElement r(ctx_);
    r.trunc_lo_ = trunc_lo_ || other.trunc_lo_;
    r.trunc_hi_ = trunc_hi_ || other.trunc_hi_;
    if (is_zero() || other.is_zero())
        return r;
    // Accumulate the convolution exactly, then canonicalize once.
    std::map<long, PAdicScalar> acc;
    for (auto &[e1, c1] : terms_) {
        for (auto &[e2, c2] : other.terms_) {
            long e = e1 + e2;
            if (e < ctx_->lo_cap()) {
                r.trunc_lo_ = true;
                continue;
            }
            if (e > ctx_->hi_cap()) {
                r.trunc_hi_ = true;
                continue;
            }
            PAdicScalar prod = c1.mul(*ctx_, c2);
            auto it = acc.find(e);
            if (it == acc.end())
                acc.emplace(e, prod);
            else
                it->second = it->second.add(*ctx_, prod);
        }
    }
    for (auto &[e, c] : acc)
        r.insert_term(e, c);
    return r;
}

LaurentElement LaurentElement::scalar_mul(const PAdicScalar &c) const {
    LaurentElement r(ctx_);
    r.trunc_lo_ = trunc_lo_;
    r.trunc_hi_ = trunc_hi_;
    for (auto &[e, ce] : terms_)
        r.insert_term(e, ce.mul(*ctx_, c));
    return r;
}

LaurentElement LaurentElement::shift_p(long k) const {
    LaurentElement r(ctx_);
    r.trunc_lo_ = trunc_lo_;
    r.trunc_hi_ = trunc_hi_;
    for (auto &[e, c] : terms_)
        r.insert_term(e, c.shift(*ctx_, k));
    return r;
}

LaurentElement LaurentElement::shift_u(long k) const {
    LaurentElement r(ctx_);
    r.trunc_lo_ = trunc_lo_;
    r.trunc_hi_ = trunc_hi_;
    for (auto &[e, c] : terms_)
        r.insert_term(e + k, c);
    return r;
}

LaurentElement LaurentElement::frobenius(int iterations) const {
    if (iterations < 1)
        throw InvariantViolation("frobenius: iterations must be >= 1");
    LaurentElement r(ctx_);
    r.trunc_lo_ = trunc_lo_;
    r.trunc_hi_ = trunc_hi_;
    const long span = std::max(std::labs(ctx_->lo_cap()), std::labs(ctx_->hi_cap()));
    for (auto &[e, c] : terms_) {
        // Scale the exponent by q^iterations, clamping safely: once the
        // magnitude passes the window span it can only escape further.
        long scaled = e;
        bool escaped = false;
        for (int i = 0; i < iterations && !escaped; ++i) {
            if (std::labs(scaled) > span) {
                escaped = true;
                break;
            }
            scaled *= ctx_->q();
        }
        if (escaped)
            scaled = scaled > 0 ? ctx_->hi_cap() + 1 : ctx_->lo_cap() - 1;
        r.insert_term(scaled, c);
    }
    return r;
}

bool LaurentElement::equals(const LaurentElement &other) const {
    require_same_context(ctx_, other.ctx_);
    if (terms_.size() != other.terms_.size())
        return false;
    auto it = terms_.begin(), jt = other.terms_.begin();
    for (; it != terms_.end(); ++it, ++jt)
        if (it->first != jt->first || !it->second.equals(*ctx_, jt->second))
            return false;
    return true;
}

std::vector<std::pair<long, LaurentElement>> LaurentElement::digit_decompose() const {
    std::vector<std::pair<long, LaurentElement>> out;
    if (is_zero())
        return out;
    std::map<long, TermMap> digits;
    for (auto &[e, c] : terms_) {
        long v = c.vexp();
        for (long j = 0; j < ctx_->precision() - v; ++j) {
            long d = c.digit(*ctx_, j);
            if (d != 0)
                digits[v + j][e] = PAdicScalar::from_long(*ctx_, d);
        }
    }
    for (auto &[i, tm] : digits)
        out.emplace_back(i, LaurentElement(ctx_, tm, trunc_lo_, trunc_hi_));
    return out;
}

LaurentElement LaurentElement::digit(long i) const {
    TermMap tm;
    for (auto &[e, c] : terms_) {
        if (c.vexp() > i)
            continue;
        long d = c.digit(*ctx_, i - c.vexp());
        if (d != 0)
            tm[e] = PAdicScalar::from_long(*ctx_, d);
    }
    return LaurentElement(ctx_, tm, trunc_lo_, trunc_hi_);
}

LaurentElement LaurentElement::digit_range(long lo, long hi) const {
    LaurentElement r = zero(ctx_);
    r = r.with_flags(trunc_lo_, trunc_hi_);
    for (auto &[i, d] : digit_decompose())
        if (i >= lo && i <= hi)
            r = r.add(d.shift_p(i));
    return r;
}

std::string LaurentElement::to_string() const {
    if (is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto &[e, c] : terms_) {
        if (!first)
            os << " + ";
        first = false;
        os << c.to_string(*ctx_);
        if (e != 0)
            os << "*u^" << e;
    }
    if (truncated())
        os << " [trunc]";
    return os.str();
}

} // namespace robba
