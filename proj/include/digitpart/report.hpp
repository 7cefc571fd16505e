#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "digitpart/arithmetic.hpp"
#include "digitpart/common.hpp"
#include "digitpart/effective_bounds.hpp"
#include "digitpart/lfl_bounds.hpp"
#include "digitpart/rigorous.hpp"
#include "digitpart/sparse_digits.hpp"
#include "digitpart/sunit_solver.hpp"

namespace digitpart {

// Map-backed json: object keys always serialize sorted, which makes dump()
// canonical and the envelope hash well-defined.
using Json = nlohmann::json;

struct RunConfig {
    long precision = 128;
    FactorEffort effort;
    unsigned workers = 1;
    std::string format = "json";  // json | csv | text
    std::uint64_t seed = 0;

    void validate() const {
        if (precision < 64 || precision > 4096)
            throw std::invalid_argument("RunConfig: precision must lie in [64, 4096]");
        if (workers < 1) throw std::invalid_argument("RunConfig: workers must be >= 1");
        if (format != "json" && format != "csv" && format != "text")
            throw std::invalid_argument("RunConfig: unknown format " + format);
        effort.validate();
    }
};

// Big integers serialize as decimal strings; rationals as "num/den";
// enclosures as lossless hex-float endpoint pairs plus a display decimal.

inline Json report(const Int& v) { return v.get_str(); }
inline Int int_from(const Json& j) { return Int(j.get<std::string>()); }

inline Json report(const Rat& v) { return v.get_str(); }
inline Rat rat_from(const Json& j) {
    Rat r(j.get<std::string>());
    r.canonicalize();
    return r;
}

inline Json report(const RigorousReal& v) {
    return Json{{"dec", v.decimal()},
                {"hex", v.hex()},
                {"prec", static_cast<long>(v.precision())}};
}
inline RigorousReal rr_from(const Json& j) {
    return RigorousReal::from_hex(j.at("hex").get<std::string>(), j.at("prec").get<long>());
}

inline Json report(const PrimeSet& s) {
    Json a = Json::array();
    for (const Int& p : s.primes()) a.push_back(report(p));
    return a;
}
inline PrimeSet primes_from(const Json& j) {
    std::vector<Int> ps;
    for (const Json& e : j) ps.push_back(int_from(e));
    return PrimeSet(std::move(ps));
}

inline const char* name_of(Completeness c) {
    return c == Completeness::complete ? "complete" : "partial";
}
inline Completeness completeness_from(const std::string& s) {
    if (s == "complete") return Completeness::complete;
    if (s == "partial") return Completeness::partial;
    throw std::invalid_argument("unknown completeness: " + s);
}

inline const char* name_of(Smoothness s) {
    switch (s) {
        case Smoothness::smooth: return "smooth";
        case Smoothness::not_smooth: return "not_smooth";
        default: return "unknown";
    }
}

inline const char* name_of(Primality p) {
    switch (p) {
        case Primality::prime: return "prime";
        case Primality::composite: return "composite";
        default: return "probably_prime";
    }
}

inline const char* name_of(BoundEvaluation::Kind k) {
    return k == BoundEvaluation::Kind::archimedean ? "archimedean" : "padic";
}

// --- sparse digits ----------------------------------------------------------

inline Json report(const SparseTerm& t) {
    return Json{{"digit", t.digit}, {"exponent", t.exponent}};
}

inline Json report(const SparseInt& v) {
    Json terms = Json::array();
    for (const SparseTerm& t : v.terms()) terms.push_back(report(t));
    return Json{{"base", v.base()}, {"terms", terms}, {"value", report(v.value())}};
}
inline SparseInt sparse_from(const Json& j) {
    std::vector<SparseTerm> terms;
    for (const Json& t : j.at("terms"))
        terms.push_back(SparseTerm{t.at("digit").get<unsigned long>(),
                                   t.at("exponent").get<unsigned long>()});
    SparseInt v(j.at("base").get<unsigned long>(), terms);
    if (v.value() != int_from(j.at("value")))
        throw std::invalid_argument("sparse_from: value does not match terms");
    return v;
}

// --- arithmetic --------------------------------------------------------------

inline Json report(const SFactorization& f) {
    Json exps = Json::array();
    for (unsigned long e : f.exponents) exps.push_back(e);
    return Json{{"cofactor", report(f.cofactor)},
                {"exponents", exps},
                {"n", report(f.n)},
                {"primes", report(f.s)},
                {"s_part", report(f.s_part())}};
}
inline SFactorization sfact_from(const Json& j) {
    SFactorization f;
    f.n = int_from(j.at("n"));
    f.s = primes_from(j.at("primes"));
    for (const Json& e : j.at("exponents")) f.exponents.push_back(e.get<unsigned long>());
    f.cofactor = int_from(j.at("cofactor"));
    return f;
}

inline Json report(const Factorization& f) {
    Json factors = Json::array();
    for (const auto& [p, e] : f.factors) factors.push_back(Json{{"e", e}, {"p", report(p)}});
    Json opaque = Json::array();
    for (const Int& c : f.opaque) opaque.push_back(report(c));
    return Json{{"complete", f.complete()}, {"factors", factors}, {"opaque", opaque}};
}
inline Factorization factorization_from(const Json& j) {
    Factorization f;
    for (const Json& e : j.at("factors"))
        f.factors.emplace_back(int_from(e.at("p")), e.at("e").get<unsigned long>());
    for (const Json& c : j.at("opaque")) f.opaque.push_back(int_from(c));
    return f;
}

// --- linear form bounds -------------------------------------------------------

inline Json report(const BoundEvaluation& b) {
    Json a = Json::array();
    for (const RigorousReal& v : b.a) a.push_back(report(v));
    Json j{{"a", a},
           {"b_value", report(b.b_value)},
           {"certified", b.certified_str()},
           {"kind", name_of(b.kind)},
           {"precision", static_cast<long>(b.precision)},
           {"value", report(b.value)}};
    if (b.b_n) j["b_n"] = report(*b.b_n);
    if (b.delta) j["delta"] = report(*b.delta);
    if (b.t) j["t"] = report(*b.t);
    return j;
}
inline BoundEvaluation bound_from(const Json& j) {
    BoundEvaluation b;
    b.kind = j.at("kind").get<std::string>() == "archimedean" ? BoundEvaluation::Kind::archimedean
                                                              : BoundEvaluation::Kind::padic;
    b.value = rr_from(j.at("value"));
    for (const Json& e : j.at("a")) b.a.push_back(rr_from(e));
    b.b_value = rr_from(j.at("b_value"));
    b.precision = j.at("precision").get<long>();
    if (j.contains("b_n")) b.b_n = rat_from(j.at("b_n"));
    if (j.contains("delta")) b.delta = rat_from(j.at("delta"));
    if (j.contains("t")) b.t = rr_from(j.at("t"));
    return b;
}

// --- certificates -------------------------------------------------------------

inline Json report(const BoundCertificate& c) {
    return Json{{"assumptions", c.assumptions},
                {"base", c.base},
                {"cofactor_cap", report(c.cofactor_cap)},
                {"exponent", report(c.exponent)},
                {"m0", report(c.m0)},
                {"m_arch", report(c.m_arch)},
                {"m_padic", report(c.m_padic)},
                {"precision", static_cast<long>(c.precision)},
                {"primes", report(c.s)},
                {"q_product", report(c.q_product)},
                {"ratio", report(c.ratio)}};
}
inline BoundCertificate certificate_from(const Json& j) {
    BoundCertificate c;
    c.base = j.at("base").get<unsigned long>();
    c.s = primes_from(j.at("primes"));
    c.cofactor_cap = int_from(j.at("cofactor_cap"));
    c.q_product = rr_from(j.at("q_product"));
    c.m_arch = int_from(j.at("m_arch"));
    c.m_padic = int_from(j.at("m_padic"));
    c.m0 = int_from(j.at("m0"));
    c.ratio = int_from(j.at("ratio"));
    c.exponent = rat_from(j.at("exponent"));
    c.precision = j.at("precision").get<long>();
    c.assumptions = j.at("assumptions").get<std::string>();
    return c;
}

// --- solver -------------------------------------------------------------------

inline Json report(const SolutionRecord& r) {
    Json exps = Json::array();
    for (unsigned long e : r.r) exps.push_back(e);
    return Json{{"base", r.base}, {"d1", r.d1},   {"d2", r.d2}, {"d3", r.d3},
                {"exponents", exps}, {"m", r.m},  {"n", r.n},   {"u", report(r.u)}};
}
inline SolutionRecord solution_from(const Json& j) {
    SolutionRecord r;
    r.base = j.at("base").get<unsigned long>();
    r.m = j.at("m").get<unsigned long>();
    r.n = j.at("n").get<unsigned long>();
    r.d3 = j.at("d3").get<unsigned long>();
    r.d2 = j.at("d2").get<unsigned long>();
    r.d1 = j.at("d1").get<unsigned long>();
    for (const Json& e : j.at("exponents")) r.r.push_back(e.get<unsigned long>());
    r.u = int_from(j.at("u"));
    return r;
}

inline Json report(const Problem42Violation& v) {
    return Json{{"cap", v.cap},
                {"m", v.m},
                {"n", v.n},
                {"s_part", report(v.s_part)},
                {"u", report(v.u)}};
}
inline Problem42Violation violation_from(const Json& j) {
    Problem42Violation v;
    v.m = j.at("m").get<unsigned long>();
    v.n = j.at("n").get<unsigned long>();
    v.u = int_from(j.at("u"));
    v.s_part = int_from(j.at("s_part"));
    v.cap = j.at("cap").get<double>();
    return v;
}

inline Json report(const TrendRow& r) {
    Json j{{"cofactor", report(r.cofactor)},
           {"j", r.j},
           {"s_part", report(r.s_part)},
           {"spart_flag", r.spart_flag},
           {"u", report(r.u)},
           {"u_eps", r.u_eps}};
    j["p_threshold"] = r.p_threshold ? Json(*r.p_threshold) : Json(nullptr);
    j["cap42"] = r.cap42 ? Json(*r.cap42) : Json(nullptr);
    if (r.p_value) j["p"] = report(*r.p_value);
    if (r.p_status) j["p_status"] = name_of(*r.p_status);
    j["p_flag"] = r.p_flag ? Json(*r.p_flag) : Json(nullptr);
    if (!r.witnesses.empty()) {
        Json w = Json::array();
        for (const auto& [m, n] : r.witnesses) w.push_back(Json::array({m, n}));
        j["witnesses"] = w;
    }
    return j;
}
inline TrendRow trend_from(const Json& j) {
    TrendRow r;
    r.j = j.at("j").get<unsigned long>();
    r.u = int_from(j.at("u"));
    r.s_part = int_from(j.at("s_part"));
    r.cofactor = int_from(j.at("cofactor"));
    r.spart_flag = j.at("spart_flag").get<bool>();
    r.u_eps = j.at("u_eps").get<double>();
    if (!j.at("p_threshold").is_null()) r.p_threshold = j.at("p_threshold").get<double>();
    if (!j.at("cap42").is_null()) r.cap42 = j.at("cap42").get<double>();
    if (j.contains("p")) r.p_value = int_from(j.at("p"));
    if (j.contains("p_status")) r.p_status = completeness_from(j.at("p_status"));
    if (!j.at("p_flag").is_null()) r.p_flag = j.at("p_flag").get<bool>();
    if (j.contains("witnesses"))
        for (const Json& w : j.at("witnesses"))
            r.witnesses.emplace_back(w.at(0).get<unsigned long>(), w.at(1).get<unsigned long>());
    return r;
}

// --- config and envelope --------------------------------------------------------

inline Json report(const RunConfig& c) {
    return Json{{"format", c.format},
                {"precision", c.precision},
                {"rho_iterations", c.effort.rho_iterations},
                {"second_stage", c.effort.second_stage},
                {"seed", c.seed},
                {"trial_ceiling", report(c.effort.trial_ceiling)},
                {"workers", c.workers}};
}
inline RunConfig config_from(const Json& j) {
    RunConfig c;
    c.precision = j.at("precision").get<long>();
    c.effort.trial_ceiling = int_from(j.at("trial_ceiling"));
    c.effort.second_stage = j.at("second_stage").get<bool>();
    c.effort.rho_iterations = j.at("rho_iterations").get<unsigned long>();
    c.workers = j.at("workers").get<unsigned>();
    c.format = j.at("format").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

struct ReportEnvelope {
    std::string command;
    RunConfig config;
    Json payload;
    std::uint64_t hash = 0;
};

inline std::uint64_t envelope_hash(const std::string& command, const RunConfig& config,
                                   const Json& payload) {
    Json j{{"command", command}, {"config", report(config)}, {"payload", payload}};
    return fnv1a(j.dump());
}

inline ReportEnvelope make_envelope(std::string command, const RunConfig& config, Json payload) {
    ReportEnvelope e{std::move(command), config, std::move(payload), 0};
    e.hash = envelope_hash(e.command, e.config, e.payload);
    return e;
}

inline std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline Json report(const ReportEnvelope& e) {
    return Json{{"command", e.command},
                {"config", report(e.config)},
                {"hash", hash_hex(e.hash)},
                {"payload", e.payload}};
}

// Re-parse; throws if the recorded hash does not match the content.
inline ReportEnvelope envelope_from(const Json& j) {
    ReportEnvelope e;
    e.command = j.at("command").get<std::string>();
    e.config = config_from(j.at("config"));
    e.payload = j.at("payload");
    e.hash = std::stoull(j.at("hash").get<std::string>(), nullptr, 16);
    if (e.hash != envelope_hash(e.command, e.config, e.payload))
        throw std::invalid_argument("envelope_from: content hash mismatch");
    return e;
}

}  // namespace digitpart
