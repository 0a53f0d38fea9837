#include "robba/sigma_module.hpp"

#include <numeric>
#include <sstream>

namespace robba {

SigmaModule::SigmaModule(ElemMatrix matrix, int frob_power, Rational radius)
    : matrix_(std::move(matrix)), frob_power_(frob_power),
      radius_(std::move(radius)), det_(LaurentElement::zero(matrix_.context())) {
    if (frob_power_ < 1)
        throw InvariantViolation("sigma module: frob_power must be >= 1");
    if (radius_ <= 0 || radius_ > matrix_.context()->r0())
        throw InvariantViolation("sigma module: radius must lie in (0, r0]");
    det_ = matrix_.det();
    certify_det();
}

SigmaModule::SigmaModule(ElemMatrix matrix, int frob_power, Rational radius,
                         LaurentElement det, bool certify)
    : matrix_(std::move(matrix)), frob_power_(frob_power),
      radius_(std::move(radius)), det_(std::move(det)) {
    if (certify)
        certify_det();
}

void SigmaModule::certify_det() {
    if (det_.is_zero())
        throw DetHasSlopes("sigma module: det(A) is zero at precision");
    auto poly = newton_polygon(det_, RadiusInterval(Rational(0), radius_));
    if (!poly.empty())
        throw DetHasSlopes("sigma module: det(A) has slopes on (0, radius]: " +
                           poly.to_string());
    if (poly.precision_limited())
        throw DetHasSlopes(
            "sigma module: det(A) unit certificate is precision-limited");
    // F becomes an isomorphism after inverting p: certified by inverting the
    // unit part of det(A) (then A^{-1} = adj(A) det(A)^{-1} exists).
    long c = det_.min_vexp();
    invert_unit(det_.shift_p(-c), radius_);
}

long SigmaModule::degree() const {
    // det(A) = p^c * (unit): the valuation of the unit through which F acts
    // on the top exterior power is c.
    return det_.min_vexp();
}

Rational SigmaModule::slope() const {
    Rational s(degree(), static_cast<long>(rank()));
    s.canonicalize();
    return s;
}

std::string SigmaModule::to_string() const {
    std::ostringstream os;
    os << "sigma^" << frob_power_ << "-module rank " << rank() << ", deg "
       << degree() << ", A = " << matrix_.to_string();
    return os.str();
}

SigmaModule standard_module(const ContextPtr &ctx, long c, long d) {
    if (d < 1)
        throw InvariantViolation("standard module: d must be >= 1");
    if (std::gcd(c, d) != 1)
        throw NotCoprime("standard module: gcd(c, d) must be 1");
    ElemMatrix a(ctx, static_cast<size_t>(d));
    for (long i = 0; i + 1 < d; ++i)
        a.at(static_cast<size_t>(i + 1), static_cast<size_t>(i)) =
            LaurentElement::one(ctx);
    a.at(0, static_cast<size_t>(d - 1)) =
        LaurentElement::monomial(ctx, 0, 1).shift_p(c);
    LaurentElement det = LaurentElement::monomial(ctx, 0, 1).shift_p(c);
    if (d % 2 == 0)
        det = det.negate();
    Rational radius = ctx->r0() / 2;
    return SigmaModule(std::move(a), 1, std::move(radius), std::move(det), true);
}

SigmaModule twist(const SigmaModule &m, long c) {
    LaurentElement det = m.det_.shift_p(c * static_cast<long>(m.rank()));
    return SigmaModule(m.matrix_.scale_p(c), m.frob_power_, m.radius_,
                       std::move(det), false);
}

SigmaModule dual(const SigmaModule &m) {
    const auto &ctx = m.context();
    long c = m.det_.min_vexp();
    LaurentElement dinv = invert_unit(m.det_.shift_p(-c), m.radius_).shift_p(-c);
    ElemMatrix adj(ctx, m.rank());
    if (m.rank() == 1) {
        adj.at(0, 0) = LaurentElement::one(ctx);
    } else {
        for (size_t i = 0; i < m.rank(); ++i)
            for (size_t j = 0; j < m.rank(); ++j) {
                LaurentElement cf = m.matrix_.minor_matrix(j, i).det();
                if ((i + j) % 2 == 1)
                    cf = cf.negate();
                adj.at(i, j) = cf;
            }
    }
    // dual matrix = (A^{-1})^T = (adj(A) det^{-1})^T
    ElemMatrix b = adj.transpose().map(
        [&](const LaurentElement &e) { return e.mul(dinv); });
    return SigmaModule(std::move(b), m.frob_power_, m.radius_, dinv, false);
}

SigmaModule tensor(const SigmaModule &m, const SigmaModule &n) {
    require_same_context(m.context(), n.context());
    if (m.frob_power_ != n.frob_power_)
        throw InvariantViolation("tensor: Frobenius powers differ");
    const auto &ctx = m.context();
    size_t rm = m.rank(), rn = n.rank();
    ElemMatrix k(ctx, rm * rn);
    for (size_t i = 0; i < rm; ++i)
        for (size_t j = 0; j < rm; ++j)
            for (size_t s = 0; s < rn; ++s)
                for (size_t t = 0; t < rn; ++t)
                    k.at(i * rn + s, j * rn + t) = m.matrix_.at(i, j).mul(
                        n.matrix_.at(s, t));
    LaurentElement det = LaurentElement::one(ctx);
    for (size_t i = 0; i < rn; ++i)
        det = det.mul(m.det_);
    for (size_t i = 0; i < rm; ++i)
        det = det.mul(n.det_);
    Rational radius = std::min(m.radius_, n.radius_);
    return SigmaModule(std::move(k), m.frob_power_, std::move(radius),
                       std::move(det), false);
}

namespace {

void subsets_rec(long n, long k, long start, std::vector<long> &cur,
                 std::vector<std::vector<long>> &out) {
    if (static_cast<long>(cur.size()) == k) {
        out.push_back(cur);
        return;
    }
    for (long i = start; i < n; ++i) {
        cur.push_back(i);
        subsets_rec(n, k, i + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<long>> lex_subsets(long n, long k) {
    std::vector<std::vector<long>> out;
    std::vector<long> cur;
    subsets_rec(n, k, 0, cur, out);
    return out;
}

long binomial(long n, long k) {
    if (k < 0 || k > n)
        return 0;
    long r = 1;
    for (long i = 0; i < k; ++i)
        r = r * (n - i) / (i + 1);
    return r;
}

} // namespace

SigmaModule wedge(const SigmaModule &m, long k) {
    long n = static_cast<long>(m.rank());
    if (k < 1 || k > n)
        throw InvariantViolation("wedge: need 1 <= k <= rank");
    const auto &ctx = m.context();
    auto subs = lex_subsets(n, k);
    ElemMatrix w(ctx, subs.size());
    for (size_t si = 0; si < subs.size(); ++si)
        for (size_t ti = 0; ti < subs.size(); ++ti) {
            ElemMatrix sub(ctx, static_cast<size_t>(k));
            for (long r = 0; r < k; ++r)
                for (long c = 0; c < k; ++c)
                    sub.at(static_cast<size_t>(r), static_cast<size_t>(c)) =
                        m.matrix_.at(static_cast<size_t>(subs[si][r]),
                                     static_cast<size_t>(subs[ti][c]));
            w.at(si, ti) = sub.det();
        }
    LaurentElement det = LaurentElement::one(ctx);
    long e = binomial(n - 1, k - 1);
    for (long i = 0; i < e; ++i)
        det = det.mul(m.det_);
    return SigmaModule(std::move(w), m.frob_power_, m.radius_, std::move(det),
                       false);
}

SigmaModule pushforward(const SigmaModule &m, int a) {
    if (a < 1)
        throw InvariantViolation("pushforward: a must be >= 1");
    ElemMatrix b = m.matrix_;
    LaurentElement det = m.det_;
    for (int i = 1; i < a; ++i) {
        b = b.mul(m.matrix_.frobenius(i));
        det = det.mul(m.det_.frobenius(i));
    }
    return SigmaModule(std::move(b), m.frob_power_ * a, m.radius_, std::move(det),
                       false);
}

SigmaModule pullback(const SigmaModule &n, int a) {
    if (a < 1)
        throw InvariantViolation("pullback: a must be >= 1");
    if (n.frob_power_ % a != 0)
        throw InvariantViolation("pullback: a must divide the Frobenius power");
    const auto &ctx = n.context();
    size_t m = n.rank();
    size_t big = m * static_cast<size_t>(a);
    ElemMatrix b(ctx, big);
    // Basis e_i (x) sigma^j, ordered j-major: index j*m + i.
    for (int j = 0; j + 1 < a; ++j)
        for (size_t i = 0; i < m; ++i)
            b.at((static_cast<size_t>(j) + 1) * m + i,
                 static_cast<size_t>(j) * m + i) = LaurentElement::one(ctx);
    for (size_t i = 0; i < m; ++i)
        for (size_t kk = 0; kk < m; ++kk)
            b.at(kk, static_cast<size_t>(a - 1) * m + i) = n.matrix_.at(kk, i);
    LaurentElement det = n.det_;
    if (((static_cast<long>(a) - 1) * static_cast<long>(m) *
         static_cast<long>(m)) % 2 == 1)
        det = det.negate();
    return SigmaModule(std::move(b), n.frob_power_ / a, n.radius_, std::move(det),
                       false);
}

NewtonPolygon polygon_sum(const std::vector<NewtonPolygon> &parts) {
    std::map<Rational, long> acc;
    bool limited = false;
    for (auto &p : parts) {
        limited = limited || p.precision_limited();
        for (auto &s : p.slopes())
            acc[s.slope] += s.multiplicity;
    }
    std::vector<NewtonPolygon::Segment> segs;
    for (auto &[sl, mult] : acc)
        segs.push_back({sl, mult});
    return NewtonPolygon::module_polygon(std::move(segs), limited);
}

LiesAboveVerdict polygon_lies_above(const NewtonPolygon &p1,
                                    const NewtonPolygon &p2) {
    LiesAboveVerdict v;
    auto e1 = p1.endpoint(), e2 = p2.endpoint();
    if (e1.first != e2.first || e1.second != e2.second) {
        v.above = false;
        v.reason = LiesAboveReason::endpoint_mismatch;
        std::ostringstream os;
        os << "endpoints (" << e1.first << ", " << e1.second.get_str() << ") vs ("
           << e2.first << ", " << e2.second.get_str() << ")";
        v.detail = os.str();
        return v;
    }
    for (auto &[x, y] : p1.vertices()) {
        Rational below = p2.value_at(x);
        if (y < below) {
            v.above = false;
            v.reason = LiesAboveReason::vertex_below;
            std::ostringstream os;
            os << "vertex (" << x << ", " << y.get_str() << ") below "
               << below.get_str();
            v.detail = os.str();
            return v;
        }
    }
    v.above = true;
    return v;
}

FiltrationVerdict filtration_check(const NewtonPolygon &whole,
                                   const std::vector<NewtonPolygon> &parts) {
    NewtonPolygon sum = polygon_sum(parts);
    auto ew = whole.endpoint(), es = sum.endpoint();
    if (ew.first != es.first || ew.second != es.second) {
        std::ostringstream os;
        os << "filtration_check: parts total (" << es.first << ", "
           << es.second.get_str() << ") does not match whole (" << ew.first
           << ", " << ew.second.get_str() << ")";
        throw EndpointMismatch(os.str());
    }
    FiltrationVerdict v{false, sum, polygon_lies_above(whole, sum)};
    v.holds = v.detail.above;
    return v;
}

} // namespace robba
