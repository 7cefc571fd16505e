#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "digitpart/report.hpp"

using namespace digitpart;

namespace {

PrimeSet parse_primes(const std::string& text) {
    std::vector<Int> ps;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        ps.push_back(parse_int(tok));
    }
    if (ps.empty()) throw std::invalid_argument("--primes: empty list");
    return PrimeSet(std::move(ps));
}

LinearFormItem parse_item(const std::string& text) {
    // x:y:e
    std::stringstream ss(text);
    std::string x, y, e;
    if (!std::getline(ss, x, ':') || !std::getline(ss, y, ':') || !std::getline(ss, e, ':'))
        throw std::invalid_argument("--item expects x:y:exponent, got " + text);
    return LinearFormItem{parse_int(x), parse_int(y), parse_int(e)};
}

StopRule make_stop(std::uint64_t count, const std::string& ceiling) {
    StopRule rule;
    if (count > 0) rule.count = count;
    if (!ceiling.empty()) rule.ceiling = parse_int(ceiling);
    rule.validate();
    return rule;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void emit_csv(const std::vector<std::string>& header,
              const std::vector<std::vector<std::string>>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i)
        std::cout << (i ? "," : "") << csv_escape(header[i]);
    std::cout << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            std::cout << (i ? "," : "") << csv_escape(row[i]);
        std::cout << "\n";
    }
}

std::string dbl(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string opt_dbl(const std::optional<double>& v) { return v ? dbl(*v) : ""; }

void emit_envelope(const std::string& command, const RunConfig& cfg, Json payload) {
    std::cout << report(make_envelope(command, cfg, std::move(payload))).dump(2) << "\n";
}

std::vector<std::string> trend_header() {
    return {"j",  "u",           "s_part", "cofactor", "spart_flag", "u_eps",
            "p_threshold", "p",  "p_status",   "p_flag", "cap42",    "witnesses"};
}

std::vector<std::string> trend_csv_row(const TrendRow& r) {
    std::string wit;
    for (const auto& [m, n] : r.witnesses) {
        if (!wit.empty()) wit += ";";
        wit += std::to_string(m) + ":" + std::to_string(n);
    }
    return {std::to_string(r.j),
            r.u.get_str(),
            r.s_part.get_str(),
            r.cofactor.get_str(),
            r.spart_flag ? "true" : "false",
            dbl(r.u_eps),
            opt_dbl(r.p_threshold),
            r.p_value ? r.p_value->get_str() : "",
            r.p_status ? name_of(*r.p_status) : "",
            r.p_flag ? (*r.p_flag ? "true" : "false") : "",
            opt_dbl(r.cap42),
            wit};
}

void emit_trend(const std::string& command, const RunConfig& cfg, Json query,
                const std::vector<TrendRow>& rows) {
    if (cfg.format == "csv") {
        std::vector<std::vector<std::string>> out;
        for (const TrendRow& r : rows) out.push_back(trend_csv_row(r));
        emit_csv(trend_header(), out);
        return;
    }
    if (cfg.format == "text") {
        for (const TrendRow& r : rows) {
            std::cout << r.j << ": u=" << r.u.get_str() << " [u]_S=" << r.s_part.get_str()
                      << " M=" << r.cofactor.get_str()
                      << " flag=" << (r.spart_flag ? "true" : "false");
            if (r.p_value)
                std::cout << " P=" << r.p_value->get_str() << " (" << name_of(*r.p_status) << ")";
            if (r.p_threshold)
                std::cout << " thr=" << dbl(*r.p_threshold);
            else if (r.p_value)
                std::cout << " thr=n/a";
            std::cout << "\n";
        }
        return;
    }
    Json items = Json::array();
    for (const TrendRow& r : rows) items.push_back(report(r));
    emit_envelope(command, cfg, Json{{"query", std::move(query)}, {"rows", items}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sparse-digit S-unit toolkit: enumeration, S-part arithmetic, linear-form "
                 "bounds, exponent certificates, exhaustive search"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    RunConfig cfg;
    std::string trial_ceiling = "1000000";
    app.add_option("--precision", cfg.precision, "working precision in bits [64, 4096]")
        ->envname("DIGITPART_PRECISION");
    app.add_option("--workers", cfg.workers, "worker threads for the solver")
        ->envname("DIGITPART_WORKERS");
    app.add_option("--format", cfg.format, "json | csv | text")->default_str("json");
    app.add_option("--seed", cfg.seed, "seed echoed into the report envelope");
    app.add_option("--trial-ceiling", trial_ceiling, "trial division ceiling");
    app.add_option("--rho-iterations", cfg.effort.rho_iterations, "rho budget (second stage)");
    app.add_flag("--second-stage", cfg.effort.second_stage, "enable rho splitting");

    std::function<int()> run;

    // enumerate
    auto* c_enum = app.add_subcommand("enumerate", "stream sparse-digit or a^m+c^n+1 values");
    {
        auto base = std::make_shared<unsigned long>(0);
        auto k = std::make_shared<unsigned long>(3);
        auto count = std::make_shared<std::uint64_t>(0);
        auto ceiling = std::make_shared<std::string>();
        auto ta = std::make_shared<unsigned long>(0);
        auto tc = std::make_shared<unsigned long>(0);
        c_enum->add_option("--base", *base, "base b >= 2");
        c_enum->add_option("-k,--nonzero", *k, "max nonzero digits");
        c_enum->add_option("--count", *count, "emit this many values");
        c_enum->add_option("--ceiling", *ceiling, "stop above this value");
        c_enum->add_option("--term-a", *ta, "three-term mode: a of a^m+c^n+1");
        c_enum->add_option("--term-c", *tc, "three-term mode: c of a^m+c^n+1");
        c_enum->callback([=, &cfg, &run] {
            run = [=, &cfg] {
                StopRule rule = make_stop(*count, *ceiling);
                if (*ta || *tc) {
                    auto hits = enumerate_three_term(*ta, *tc, rule);
                    if (cfg.format == "csv") {
                        std::vector<std::vector<std::string>> rows;
                        std::uint64_t j = 0;
                        for (const auto& h : hits) {
                            std::string wit;
                            for (const auto& [m, n] : h.witnesses) {
                                if (!wit.empty()) wit += ";";
                                wit += std::to_string(m) + ":" + std::to_string(n);
                            }
                            rows.push_back({std::to_string(++j), h.value.get_str(), wit});
                        }
                        emit_csv({"j", "value", "witnesses"}, rows);
                        return 0;
                    }
                    if (cfg.format == "text") {
                        for (const auto& h : hits) std::cout << h.value.get_str() << "\n";
                        return 0;
                    }
                    Json items = Json::array();
                    for (const auto& h : hits) {
                        Json w = Json::array();
                        for (const auto& [m, n] : h.witnesses) w.push_back(Json::array({m, n}));
                        items.push_back(Json{{"value", report(h.value)}, {"witnesses", w}});
                    }
                    emit_envelope("enumerate", cfg,
                                  Json{{"query", Json{{"term_a", *ta}, {"term_c", *tc}}},
                                       {"values", items}});
                    return 0;
                }
                if (*base < 2) throw std::invalid_argument("enumerate: need --base >= 2");
                auto vals = enumerate_sparse(*base, *k, rule);
                if (cfg.format == "csv") {
                    std::vector<std::vector<std::string>> rows;
                    std::uint64_t j = 0;
                    for (const auto& v : vals) {
                        std::string terms;
                        for (const auto& t : v.terms()) {
                            if (!terms.empty()) terms += "+";
                            terms += std::to_string(t.digit) + "*" + std::to_string(*base) + "^" +
                                     std::to_string(t.exponent);
                        }
                        rows.push_back({std::to_string(++j), v.value().get_str(), terms});
                    }
                    emit_csv({"j", "value", "terms"}, rows);
                    return 0;
                }
                if (cfg.format == "text") {
                    for (const auto& v : vals) std::cout << v.value().get_str() << "\n";
                    return 0;
                }
                Json items = Json::array();
                for (const auto& v : vals) items.push_back(report(v));
                emit_envelope("enumerate", cfg,
                              Json{{"query", Json{{"base", *base}, {"nonzero", *k}}},
                                   {"values", items}});
                return 0;
            };
        });
    }

    // spart
    auto* c_spart = app.add_subcommand("spart", "S-part and cofactor of n");
    {
        auto n = std::make_shared<std::string>();
        auto primes = std::make_shared<std::string>();
        c_spart->add_option("--n", *n, "integer, scientific shorthand accepted")->required();
        c_spart->add_option("--primes", *primes, "comma-separated primes")->required();
        c_spart->callback([=, &cfg, &run] {
            run = [=, &cfg] {
                SFactorization f = s_factorization(parse_int(*n), parse_primes(*primes));
                if (cfg.format == "text" || cfg.format == "csv") {
                    std::cout << "n = " << f.n.get_str() << "\ns_part = " << f.s_part().get_str()
                              << "\ncofactor = " << f.cofactor.get_str() << "\n";
                    return 0;
                }
                emit_envelope("spart", cfg, report(f));
                return 0;
            };
        });
    }

    // pfactor
    auto* c_pf = app.add_subcommand("pfactor", "factor n and report its greatest prime factor");
    {
        auto n = std::make_shared<std::string>();
        c_pf->add_option("--n", *n)->required();
        c_pf->callback([=, &cfg, &run] {
            run = [=, &cfg] {
                Int v = parse_int(*n);
                Factorization f = factorize(v, cfg.effort);
                GreatestPrimeFactor g = greatest_prime_factor(v, cfg.effort);
                if (cfg.format == "text" || cfg.format == "csv") {
                    std::cout << "n = " << v.get_str() << "\nfactors =";
                    for (const auto& [p, e] : f.factors)
                        std::cout << " " << p.get_str() << "^" << e;
                    for (const Int& c : f.opaque) std::cout << " [" << c.get_str() << "]";
                    std::cout << "\nP = " << g.value.get_str() << " (" << name_of(g.status)
                              << ")\n";
                    return 0;
                }
                emit_envelope("pfactor", cfg,
                              Json{{"factorization", report(f)},
                                   {"n", report(v)},
                                   {"p", report(g.value)},
                                   {"p_status", name_of(g.status)}});
                return 0;
            };
        });
    }

    // radical
    auto* c_rad = app.add_subcommand("radical", "greatest square-free divisor");
    {
        auto n = std::make_shared<std::string>();
        c_rad->add_option("--n", *n)->required();
        c_rad->callback([=, &cfg, &run] {
            run = [=, &cfg] {
                Int v = parse_int(*n);
                Radical r = radical(v, cfg.effort);
                if (cfg.format == "text" || cfg.format == "csv") {
                    std::cout << "radical = " << r.value.get_str() << " (" << name_of(r.status)
                              << ")\n";
                    return 0;
                }
                emit_envelope("radical", cfg,
                              Json{{"n", report(v)},
                                   {"status", name_of(r.status)},
                                   {"value", report(r.value)}});
                return 0;
            };
        });
    }

    // smooth
    auto* c_sm = app.add_subcommand("smooth", "is every prime factor of n <= bound?");
    {
        auto n = std::make_shared<std::string>();
        auto bound = std::make_shared<std::string>();
        c_sm->add_option("--n", *n)->required();
        c_sm->add_option("--bound", *bound)->required();
        c_sm->callback([=, &cfg, &run] {
            run = [=, &cfg] {
                Int v = parse_int(*n);
                Int b = parse_int(*bound);
                Smoothness s = is_smooth(v, b, cfg.effort);
                if (cfg.format == "text" || cfg.format == "csv") {
                    std::cout << name_of(s) << "\n";
                    return 0;
                }
                emit_envelope("smooth", cfg,
                              Json{{"bound", report(b)}, {"n", report(v)},
                                   {"verdict", name_of(s)}});
                return 0;
            };
        });
    }

    // bound
    auto* c_bound = app.add_subcommand("bound", "evaluate a linear-form lower bound");
    {
        auto kind = std::make_shared<std::string>();
        auto items = std::make_shared<std::vector<std::string>>();
        auto assume = std::make_shared<bool>(false);
        auto p = std::make_shared<std::string>();
        auto b_cap = std::make_shared<std::string>();
        auto b_n = std::make_shared<std::string>();
        auto delta = std::make_shared<std::string>("1/2");
        c_bound->add_option("--kind", *kind, "matveev | yu")->required();
        c_bound->add_option("--item", *items, "x:y:exponent, repeatable")->required();
        c_bound->add_flag("--assume-nonone", *assume, "assert the product differs from 1");
        c_bound->add_option("--p", *p, "prime for the yu kind");
        c_bound->add_option("--b-cap", *b_cap, "B >= max(|b_i|, 3)");
        c_bound->add_option("--b-n", *b_n, "B_n for the yu kind");
        c_bound->add_option("--delta", *delta, "delta in (0, 1/2]");
        c_bound->callback([=, &cfg, &run] {
            run = [=, &cfg] {
                LinearFormInstance inst;
                for (const std::string& s : *items) inst.items.push_back(parse_item(s));
                inst.product_differs_from_one = *assume;
                BoundEvaluation ev;
                if (*kind == "matveev") {
                    ev = matveev_bound(inst, cfg.precision);
                } else if (*kind == "yu") {
                    if (p->empty() || b_cap->empty() || b_n->empty())
                        throw std::invalid_argument("bound --kind yu needs --p, --b-cap, --b-n");
                    ev = yu_bound(parse_int(*p), inst, parse_rational(*b_cap),
                                  parse_rational(*b_n), parse_rational(*delta), cfg.precision);
                } else {
                    throw std::invalid_argument("bound: unknown kind " + *kind);
                }
                if (cfg.format == "text" || cfg.format == "csv") {
                    std::cout << name_of(ev.kind) << " certified: " << ev.certified_str() << "\n";
                    return 0;
                }
                emit_envelope("bound", cfg, report(ev));
                return 0;
            };
        });
    }

    // certify
    auto* c_cert = app.add_subcommand("certify", "exponent certificate for three-digit S-units");
    {
        auto base = std::make_shared<unsigned long>(0);
        auto primes = std::make_shared<std::string>();
        auto cap = std::make_shared<std::string>();
        c_cert->add_option("--base", *base)->required();
        c_cert->add_option("--primes", *primes)->required();
        c_cert->add_option("--cofactor-cap", *cap, "default max(base, 3)");
        c_cert->callback([=, &cfg, &run] {
            run = [=, &cfg] {
                std::optional<Int> a;
                if (!cap->empty()) a = parse_int(*cap);
                BoundCertificate cert =
                    three_digit_certificate(*base, parse_primes(*primes), a, cfg.precision);
                if (cfg.format == "text" || cfg.format == "csv") {
                    std::cout << "m_arch = " << cert.m_arch.get_str()
                              << "\nm_padic = " << cert.m_padic.get_str()
                              << "\nm0 = " << cert.m0.get_str()
                              << "\nratio = " << cert.ratio.get_str()
                              << "\nexponent = " << cert.exponent.get_str() << "\n";
                    return 0;
                }
                emit_envelope("certify", cfg, report(cert));
                return 0;
            };
        });
    }

    // threshold
    auto* c_thr = app.add_subcommand("threshold", "(1-eps) loglog n * logloglog n / loglogloglog n");
    {
        auto n = std::make_shared<std::string>();
        auto eps = std::make_shared<std::string>();
        c_thr->add_option("--n", *n, "integer, scientific shorthand accepted")->required();
        c_thr->add_option("--eps", *eps, "rational or decimal in (0, 1)")->required();
        c_thr->callback([=, &cfg, &run] {
            run = [=, &cfg] {
                Int v = parse_int(*n);
                Rat e = parse_rational(*eps);
                RigorousReal t = smooth_threshold(v, e, cfg.precision);
                if (cfg.format == "text" || cfg.format == "csv") {
                    std::cout << t.mid_d() << "\n";
                    return 0;
                }
                emit_envelope("threshold", cfg,
                              Json{{"eps", report(e)},
                                   {"mid", t.mid_d()},
                                   {"n", report(v)},
                                   {"value", report(t)}});
                return 0;
            };
        });
    }

    // solve
    auto* c_solve = app.add_subcommand("solve", "exhaustive d3*b^m+d2*b^n+d1 = S-unit search");
    {
        auto base = std::make_shared<unsigned long>(0);
        auto primes = std::make_shared<std::string>();
        auto mmax = std::make_shared<unsigned long>(0);
        auto noprune = std::make_shared<bool>(false);
        auto depth = std::make_shared<unsigned long>(10);
        c_solve->add_option("--base", *base)->required();
        c_solve->add_option("--primes", *primes)->required();
        c_solve->add_option("--mmax", *mmax)->required();
        c_solve->add_flag("--no-prune", *noprune, "disable residue pruning (oracle mode)");
        c_solve->add_option("--prune-depth", *depth, "residue table depth t in q^t");
        c_solve->callback([=, &cfg, &run] {
            run = [=, &cfg] {
                PrimeSet s = parse_primes(*primes);
                SolveOptions opt;
                opt.workers = cfg.workers;
                opt.prune = !*noprune;
                opt.prune_depth = *depth;
                auto records = solve_three_digit(*base, s, *mmax, opt);
                if (cfg.format == "csv") {
                    std::vector<std::vector<std::string>> rows;
                    for (const auto& r : records) {
                        std::string exps;
                        for (unsigned long e : r.r) {
                            if (!exps.empty()) exps += ";";
                            exps += std::to_string(e);
                        }
                        rows.push_back({r.u.get_str(), std::to_string(r.m), std::to_string(r.n),
                                        std::to_string(r.d3), std::to_string(r.d2),
                                        std::to_string(r.d1), exps});
                    }
                    emit_csv({"u", "m", "n", "d3", "d2", "d1", "exponents"}, rows);
                    return 0;
                }
                if (cfg.format == "text") {
                    for (const auto& r : records)
                        std::cout << r.u.get_str() << " = (" << r.d3 << "," << r.d2 << ","
                                  << r.d1 << ") @ (m=" << r.m << ",n=" << r.n << ")\n";
                    return 0;
                }
                Json items = Json::array();
                for (const auto& r : records) items.push_back(report(r));
                emit_envelope("solve", cfg,
                              Json{{"query", Json{{"base", *base},
                                                  {"mmax", *mmax},
                                                  {"primes", report(s)}}},
                                   {"records", items}});
                return 0;
            };
        });
    }

    // check42
    auto* c_42 = app.add_subcommand("check42", "violations of [2^m+2^n+1]_{3,5} <= 2^(3m/4)");
    {
        auto mmax = std::make_shared<unsigned long>(0);
        auto clean = std::make_shared<long>(-1);
        c_42->add_option("--mmax", *mmax)->required();
        c_42->add_option("--expect-clean-above", *clean,
                         "exit 3 if any violation has m above this watermark");
        c_42->callback([=, &cfg, &run] {
            run = [=, &cfg] {
                auto viol = check_problem42(*mmax);
                if (cfg.format == "csv") {
                    std::vector<std::vector<std::string>> rows;
                    for (const auto& v : viol)
                        rows.push_back({std::to_string(v.m), std::to_string(v.n), v.u.get_str(),
                                        v.s_part.get_str(), dbl(v.cap)});
                    emit_csv({"m", "n", "u", "s_part", "cap"}, rows);
                } else if (cfg.format == "text") {
                    for (const auto& v : viol)
                        std::cout << "(" << v.m << "," << v.n << "): [" << v.u.get_str()
                                  << "]_{3,5} = " << v.s_part.get_str() << " > 2^(3*" << v.m
                                  << "/4)\n";
                } else {
                    Json items = Json::array();
                    for (const auto& v : viol) items.push_back(report(v));
                    emit_envelope("check42", cfg,
                                  Json{{"query", Json{{"mmax", *mmax}}},
                                       {"violations", items}});
                }
                if (*clean >= 0)
                    for (const auto& v : viol)
                        if (v.m > static_cast<unsigned long>(*clean)) return 3;
                return 0;
            };
        });
    }

    // trend
    auto* c_tr = app.add_subcommand("trend", "S-part growth table over the sparse stream");
    {
        auto base = std::make_shared<unsigned long>(0);
        auto k = std::make_shared<unsigned long>(3);
        auto primes = std::make_shared<std::string>();
        auto count = std::make_shared<unsigned long>(20);
        auto eps = std::make_shared<std::string>();
        c_tr->add_option("--base", *base)->required();
        c_tr->add_option("-k,--nonzero", *k);
        c_tr->add_option("--primes", *primes)->required();
        c_tr->add_option("--count", *count, "rows to emit");
        c_tr->add_option("--eps", *eps)->required();
        c_tr->callback([=, &cfg, &run] {
            run = [=, &cfg] {
                auto rows = verify_spart_trend(*base, *k, parse_primes(*primes), *count,
                                               parse_rational(*eps));
                emit_trend("trend", cfg,
                           Json{{"base", *base},
                                {"count", *count},
                                {"eps", *eps},
                                {"nonzero", *k}},
                           rows);
                return 0;
            };
        });
    }

    // ptable
    auto* c_pt = app.add_subcommand("ptable", "greatest-prime-factor table with thresholds");
    {
        auto source = std::make_shared<std::string>("sparse");
        auto base = std::make_shared<unsigned long>(0);
        auto k = std::make_shared<unsigned long>(3);
        auto ta = std::make_shared<unsigned long>(0);
        auto tc = std::make_shared<unsigned long>(0);
        auto count = std::make_shared<std::uint64_t>(0);
        auto ceiling = std::make_shared<std::string>();
        auto eps = std::make_shared<std::string>();
        auto primes = std::make_shared<std::string>();
        c_pt->add_option("--source", *source, "sparse | three");
        c_pt->add_option("--base", *base);
        c_pt->add_option("-k,--nonzero", *k);
        c_pt->add_option("--term-a", *ta);
        c_pt->add_option("--term-c", *tc);
        c_pt->add_option("--count", *count);
        c_pt->add_option("--ceiling", *ceiling);
        c_pt->add_option("--eps", *eps)->required();
        c_pt->add_option("--primes", *primes, "optional S for the bookkeeping columns");
        c_pt->callback([=, &cfg, &run] {
            run = [=, &cfg] {
                StopRule rule = make_stop(*count, *ceiling);
                PrimeSet s = primes->empty() ? PrimeSet{} : parse_primes(*primes);
                std::vector<TrendRow> rows;
                Json query;
                if (*source == "sparse") {
                    if (*base < 2) throw std::invalid_argument("ptable: need --base >= 2");
                    rows = p_table_sparse(*base, *k, rule, cfg.effort, parse_rational(*eps), s);
                    query = Json{{"base", *base}, {"eps", *eps}, {"nonzero", *k},
                                 {"source", "sparse"}};
                } else if (*source == "three") {
                    rows = p_table_three_term(*ta, *tc, rule, cfg.effort, parse_rational(*eps),
                                              s);
                    query = Json{{"eps", *eps}, {"source", "three"}, {"term_a", *ta},
                                 {"term_c", *tc}};
                } else {
                    throw std::invalid_argument("ptable: unknown source " + *source);
                }
                emit_trend("ptable", cfg, std::move(query), rows);
                return 0;
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        cfg.effort.trial_ceiling = parse_int(trial_ceiling);
        cfg.validate();
        return run();
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}
