#include "robba/io.hpp"

#include <fstream>

namespace robba {

std::string rational_to_string(const Rational &r) { return r.get_str(); }

Rational rational_from_string(const std::string &s) {
    Rational r;
    if (r.set_str(s, 10) != 0)
        throw ParseError("bad rational literal: '" + s + "'");
    r.canonicalize();
    return r;
}

Json context_to_json(const RingContext &ctx) {
    return Json{{"p", ctx.p()},
                {"q", ctx.q()},
                {"prec", ctx.precision()},
                {"window", Json::array({ctx.lo_cap(), ctx.hi_cap()})},
                {"r0", rational_to_string(ctx.r0())}};
}

ContextPtr context_from_json(const Json &j) {
    try {
        long p = j.at("p").get<long>();
        long q = j.at("q").get<long>();
        int prec = j.at("prec").get<int>();
        auto window = j.at("window");
        if (!window.is_array() || window.size() != 2)
            throw ParseError("ctx.window must be [lo, hi]");
        Rational r0 = j.contains("r0") && j.at("r0").is_string()
                          ? rational_from_string(j.at("r0").get<std::string>())
                          : Rational(1);
        return make_context(p, q, prec, window[0].get<long>(),
                            window[1].get<long>(), r0);
    } catch (const Json::exception &e) {
        throw ParseError(std::string("ctx: ") + e.what());
    }
}

namespace {

Json scalar_to_json(const RingContext &ctx, const PAdicScalar &c) {
    if (c.is_zero())
        return Json(0);
    if (c.vexp() >= 0) {
        Integer v = c.visible_mantissa(ctx) * ctx.pow_p(c.vexp());
        if (v.fits_slong_p())
            return Json(v.get_si());
        return Json(v.get_str());
    }
    return Json(c.visible_mantissa(ctx).get_str() + "/p^" + std::to_string(-c.vexp()));
}

PAdicScalar scalar_from_json(const RingContext &ctx, const Json &j) {
    if (j.is_number_integer())
        return PAdicScalar::from_long(ctx, j.get<long>());
    if (!j.is_string())
        throw ParseError("coefficient must be an integer or a string");
    std::string s = j.get<std::string>();
    auto slash = s.find("/p^");
    if (slash == std::string::npos) {
        Integer v;
        if (mpz_set_str(v.get_mpz_t(), s.c_str(), 10) != 0)
            throw ParseError("bad integer coefficient: '" + s + "'");
        return PAdicScalar::from_integer(ctx, v);
    }
    Integer num;
    if (mpz_set_str(num.get_mpz_t(), s.substr(0, slash).c_str(), 10) != 0)
        throw ParseError("bad coefficient numerator: '" + s + "'");
    long k;
    try {
        k = std::stol(s.substr(slash + 3));
    } catch (const std::exception &) {
        throw ParseError("bad p-power in coefficient: '" + s + "'");
    }
    return PAdicScalar::from_p_fraction(ctx, num, k);
}

} // namespace

Json element_to_json(const LaurentElement &x) {
    Json arr = Json::array();
    for (auto &[e, c] : x.terms())
        arr.push_back(Json::array({e, scalar_to_json(x.ctx(), c)}));
    return arr;
}

LaurentElement element_from_json(const Json &j, const ContextPtr &ctx) {
    if (!j.is_array())
        throw ParseError("element must be an array of [exp, coeff] pairs");
    LaurentElement x = LaurentElement::zero(ctx);
    for (size_t i = 0; i < j.size(); ++i) {
        const Json &pair = j[i];
        if (!pair.is_array() || pair.size() != 2)
            throw ParseError("element term " + std::to_string(i) +
                             " must be [exp, coeff]");
        long e = pair[0].get<long>();
        PAdicScalar c = scalar_from_json(*ctx, pair[1]);
        x = x.add(LaurentElement::monomial(ctx, e, c));
    }
    return x;
}

Json matrix_to_json(const ElemMatrix &m) {
    Json rows = Json::array();
    for (size_t i = 0; i < m.dim(); ++i) {
        Json row = Json::array();
        for (size_t j = 0; j < m.dim(); ++j)
            row.push_back(element_to_json(m.at(i, j)));
        rows.push_back(row);
    }
    return rows;
}

ElemMatrix matrix_from_json(const Json &j, const ContextPtr &ctx) {
    if (!j.is_array() || j.empty())
        throw ParseError("matrix must be a nonempty array of rows");
    size_t n = j.size();
    ElemMatrix m(ctx, n);
    for (size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n)
            throw ParseError("matrix row " + std::to_string(i) +
                             " must have " + std::to_string(n) + " entries");
        for (size_t c = 0; c < n; ++c)
            m.at(i, c) = element_from_json(j[i][c], ctx);
    }
    return m;
}

Json module_to_json(const SigmaModule &m) {
    return Json{{"ctx", context_to_json(*m.context())},
                {"frob_power", m.frob_power()},
                {"matrix", matrix_to_json(m.matrix())},
                {"radius", rational_to_string(m.radius())}};
}

SigmaModule module_from_json(const Json &j) {
    try {
        ContextPtr ctx = context_from_json(j.at("ctx"));
        int a = j.contains("frob_power") ? j.at("frob_power").get<int>() : 1;
        ElemMatrix m = matrix_from_json(j.at("matrix"), ctx);
        Rational radius = j.contains("radius")
                              ? rational_from_string(j.at("radius").get<std::string>())
                              : Rational(ctx->r0() / 2);
        return SigmaModule(std::move(m), a, std::move(radius));
    } catch (const Json::exception &e) {
        throw ParseError(std::string("module: ") + e.what());
    }
}

Json polygon_to_json(const NewtonPolygon &p) {
    Json slopes = Json::array();
    for (auto &s : p.slopes())
        slopes.push_back(Json::array({rational_to_string(s.slope), s.multiplicity}));
    Json interval;
    if (p.interval())
        interval = Json::array({rational_to_string(p.interval()->lo),
                                rational_to_string(p.interval()->hi)});
    else
        interval = Json::array({"0", "0"}); // module polygon marker
    return Json{{"slopes", slopes},
                {"interval", interval},
                {"precision_limited", p.precision_limited()}};
}

NewtonPolygon polygon_from_json(const Json &j) {
    try {
        std::vector<NewtonPolygon::Segment> segs;
        for (auto &s : j.at("slopes"))
            segs.push_back(
                {rational_from_string(s[0].get<std::string>()), s[1].get<long>()});
        bool limited = j.value("precision_limited", false);
        auto iv = j.at("interval");
        Rational lo = rational_from_string(iv[0].get<std::string>());
        Rational hi = rational_from_string(iv[1].get<std::string>());
        if (lo == 0 && hi == 0)
            return NewtonPolygon::module_polygon(std::move(segs), limited);
        return NewtonPolygon(NewtonPolygon::Kind::element, std::move(segs), 0, 0,
                             RadiusInterval(lo, hi), limited);
    } catch (const Json::exception &e) {
        throw ParseError(std::string("polygon: ") + e.what());
    }
}

Json certificate_to_json(const FactorizationCertificate &c) {
    Json lines = Json::array();
    for (auto &e : c.residual_valuations)
        lines.push_back(Json{{"label", e.label},
                             {"radius", rational_to_string(e.radius)},
                             {"bound", rational_to_string(e.bound)},
                             {"achieved", e.achieved
                                              ? Json(rational_to_string(*e.achieved))
                                              : Json("inf")},
                             {"strict", e.strict}});
    return Json{{"residual_valuations", lines},
                {"iterations_used", c.iterations_used},
                {"truncated", c.truncated}};
}

Json report_to_json(const SlopeReport &r) {
    Json certs = Json::array();
    for (auto &c : r.certificates)
        certs.push_back(certificate_to_json(c));
    Json cyc = Json::array();
    for (auto &v : r.cyclic_vector_used)
        cyc.push_back(element_to_json(v));
    Json j{{"generic", polygon_to_json(r.generic)},
           {"special", r.special ? polygon_to_json(*r.special) : Json(nullptr)},
           {"comparison", to_string(r.comparison)},
           {"certificates", certs},
           {"cyclic_vector", cyc}};
    if (!r.note.empty())
        j["note"] = r.note;
    return j;
}

Json load_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open file: " + path);
    Json j;
    try {
        in >> j;
    } catch (const Json::exception &e) {
        throw ParseError(path + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::string &path, const Json &j) {
    std::ofstream out(path);
    if (!out)
        throw ParseError("cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

} // namespace robba
