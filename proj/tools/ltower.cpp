#include <CLI11.hpp>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>

#include "cli_support.hpp"
#include "ltower/elliptic.hpp"
#include "ltower/errors.hpp"
#include "ltower/fixed_points.hpp"
#include "ltower/formal_module.hpp"
#include "ltower/period.hpp"
#include "ltower/rep_theory.hpp"
#include "ltower/strata.hpp"

using namespace ltower;
using namespace ltower::cli;
using nlohmann::json;

namespace {

struct Outcome {
    json results = json::object();
    json certificates = json::array();
    CsvTable csv;
};

using Command = std::function<Outcome(const RunConfig&, Cache&)>;

FieldPtr field_of(unsigned q) {
    unsigned p = 0, f = 0;
    if (!prime_power(q, p, f)) throw PreconditionError("q = " + std::to_string(q) + " is not a prime power");
    return FqField::make(p, f);
}

unsigned cfg_q(const RunConfig& c) { return static_cast<unsigned>(c.positive("q")); }
int cfg_int(const RunConfig& c, const std::string& k) { return static_cast<int>(c.positive(k)); }

std::string join(const std::vector<std::string>& v, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

template <class T>
std::string join_num(const std::vector<T>& v) {
    std::vector<std::string> s;
    for (const auto& x : v) s.push_back(std::to_string(x));
    return join(s, " ");
}

struct TowerRun {
    json results;
    bool ok = false;
};

TowerRun run_tower(unsigned q, unsigned n, int m, const RunConfig& c, Cache& cache) {
    const int M = c.integer("precision") > 0 ? static_cast<int>(c.integer("precision")) : m + 1;
    const int w_order = static_cast<int>(c.integer("w_order"));
    const USpec u = parse_u_spec(c.str("u"), n, w_order);
    const std::size_t cap = c.positive("rank_cap");
    const std::string key = "tower-q" + std::to_string(q) + "-n" + std::to_string(n) + "-m" + std::to_string(m) + "-M" + std::to_string(M) + "-u" +
                            join(u.entries, "_") + "-w" + std::to_string(w_order) + "-cap" + std::to_string(cap);
    bool cached = false;
    TowerAlgebra T;
    if (auto j = cache.load(key)) {
        try {
            T = TowerAlgebra::from_json(*j, cap);
            cached = true;
        } catch (const Error&) {
        } catch (const json::exception&) {
        }
    }
    if (!cached) {
        const RingPtr ring = CoeffRing::base(field_of(q), M, u.nil_orders);
        const FormalOModule X = make_module(ring, q, n, realize_u(u, ring));
        T = build_tower(X, m, cap);
        cache.store(key, T.to_json());
    }
    const LevelCheck lc = check_level(T.phi);
    const std::uint64_t order = gl_order(n, q, m);
    TowerRun r;
    r.ok = lc.ok && T.rank() == order;
    r.results = {{"q", q},
                 {"n", n},
                 {"m", m},
                 {"precision", M},
                 {"u", u.entries},
                 {"stage_degrees", T.stage_degrees()},
                 {"rank", T.rank()},
                 {"gl_order", order},
                 {"rank_matches_gl_order", T.rank() == order},
                 {"level_check", {{"ok", lc.ok}, {"relation", lc.relation}, {"witness_degree", lc.witness_degree}, {"witness", lc.witness}}},
                 {"from_cache", cached}};
    return r;
}

Outcome cmd_tower(const RunConfig& c, Cache& cache) {
    const unsigned q = cfg_q(c), n = static_cast<unsigned>(c.positive("n"));
    const int m = cfg_int(c, "m");
    TowerRun t = run_tower(q, n, m, c, cache);
    if (!t.results["level_check"]["ok"].get<bool>()) throw CrossCheckFailure("check_level failed: " + t.results["level_check"]["relation"].get<std::string>());
    if (!t.ok) throw CrossCheckFailure("tower rank differs from |GL_n(o/pi^m)|");
    Outcome o;
    o.results = t.results;
    o.csv.columns = {"q", "n", "m", "stage_degrees", "rank", "gl_order", "level_check"};
    o.csv.rows.push_back({std::to_string(q), std::to_string(n), std::to_string(m), join_num(t.results["stage_degrees"].get<std::vector<std::size_t>>()),
                          t.results["rank"].dump(), std::to_string(gl_order(n, q, m)), "pass"});
    return o;
}

Outcome cmd_count(const RunConfig& c, Cache&) {
    const unsigned q = cfg_q(c), n = static_cast<unsigned>(c.positive("n"));
    const int m = cfg_int(c, "m");
    if (c.str("b").empty()) throw PreconditionError("count needs b (an element of the division algebra, e.g. --b '#2')");
    const DivisionAlgebra B(q, n);
    const DivisionAlgebra::Elem b = parse_algebra_elem(B, c.str("b"));
    const std::string gs = c.str("g").empty() ? "identity:" + std::to_string(n) : c.str("g");
    LocalMatrix g;
    if (gs == "gb-inverse")
        g = reduced_companion(B, b).inverse();
    else if (gs == "gb")
        g = reduced_companion(B, b);
    else
        g = parse_matrix(B.base(), gs);
    if (g.n() != static_cast<int>(n)) throw PreconditionError("g must be " + std::to_string(n) + " x " + std::to_string(n));
    const long long bound = c.integer("bound");
    const FixedPointReport r = total_fixed_points(g, B, b, m, c.flag("bruteforce"), bound > 0 ? std::optional<int>(static_cast<int>(bound)) : std::nullopt);
    Outcome o;
    o.results = r.to_json();
    o.results["g"] = g.to_string();
    o.results["b"] = B.to_json(b);
    o.results["v_det_g"] = g.det().valuation();
    o.results["v_norm_b"] = B.reduced_norm(b).valuation();
    o.certificates.push_back({{"object", "g_b"}, {"certificate", r.structured.certificate.to_json()}});
    o.csv.columns = {"q", "n", "m", "per_fiber", "total", "structured", "bruteforce", "stable", "bound"};
    o.csv.rows.push_back({std::to_string(q), std::to_string(n), std::to_string(m), std::to_string(r.per_fiber), std::to_string(r.total),
                          std::to_string(r.structured.count), r.brute ? std::to_string(r.brute->count) : "", r.brute ? (r.brute->stable ? "true" : "false") : "",
                          r.brute ? std::to_string(r.brute->bound) : ""});
    return o;
}

Outcome cmd_strata(const RunConfig& c, Cache&) {
    const unsigned q = cfg_q(c), n = static_cast<unsigned>(c.positive("n"));
    const int m = cfg_int(c, "m");
    const ChainRing R(field_of(q), m);
    Outcome o;
    o.csv.columns = {"h", "labels", "formula", "gaussian_binomial"};
    json per = json::array();
    std::uint64_t total = 0;
    for (unsigned h = 1; h < n; ++h) {
        const std::uint64_t count = enumerate_summands(R, static_cast<int>(n), static_cast<int>(h)).size();
        const std::uint64_t formula = summand_count(n, h, q, m);
        if (count != formula) throw CrossCheckFailure("rank-" + std::to_string(h) + " labels: enumerated " + std::to_string(count) + ", formula " + std::to_string(formula));
        total += count;
        per.push_back({{"h", h}, {"labels", count}, {"formula", formula}, {"gaussian_binomial", gaussian_binomial(n, h, q)}});
        o.csv.rows.push_back({std::to_string(h), std::to_string(count), std::to_string(formula), std::to_string(gaussian_binomial(n, h, q))});
    }
    o.results = {{"q", q}, {"n", n}, {"m", m}, {"ranks", per}, {"total", total}};
    return o;
}

Outcome cmd_strata_action(const RunConfig& c, Cache&) {
    const unsigned q = cfg_q(c);
    if (c.str("g").empty()) throw PreconditionError("strata-action needs g, e.g. --g companion:T^2+T+1");
    const LocalMatrix g = parse_matrix(field_of(q), c.str("g"));
    const int m_max = cfg_int(c, "m_max");
    const CertifyResult cr = regular_elliptic_certify(g);
    Outcome o;
    o.certificates.push_back({{"object", "g"}, {"certified", cr.certified}, {"reason", cr.reason}, {"certificate", cr.cert.to_json()}});
    json scans = json::array();
    std::uint64_t fixed_total = 0;
    o.csv.columns = {"h", "m", "labels", "fixed"};
    for (int h = 1; h < g.n(); ++h) {
        const StrataScan s = strata_fixed_scan(g, h, m_max);
        scans.push_back(s.to_json());
        for (int m = 1; m <= m_max; ++m) {
            const auto k = static_cast<std::size_t>(m - 1);
            fixed_total += s.fixed[k];
            o.csv.rows.push_back({std::to_string(h), std::to_string(m), std::to_string(s.labels[k]), std::to_string(s.fixed[k])});
        }
    }
    o.results = {{"q", q}, {"n", g.n()}, {"g", g.to_string()}, {"m_max", m_max}, {"scans", scans}, {"fixed_total", fixed_total}};
    return o;
}

Outcome cmd_flags(const RunConfig& c, Cache&) {
    const unsigned q = cfg_q(c), n = static_cast<unsigned>(c.positive("n"));
    const int m = cfg_int(c, "m");
    const ChainRing R(field_of(q), m);
    const std::vector<Flag> flags = enumerate_flags(R, static_cast<int>(n));
    std::map<std::size_t, std::uint64_t> by_length;
    std::uint64_t maximal = 0;
    json listed = json::array();
    for (const auto& f : flags) {
        ++by_length[f.chain.size() - 1];
        if (f.is_maximal()) ++maximal;
        if (flags.size() <= 200) listed.push_back(f.to_json());
    }
    Outcome o;
    json lengths = json::object();
    for (const auto& [len, cnt] : by_length) lengths[std::to_string(len)] = cnt;
    o.results = {{"q", q}, {"n", n}, {"m", m}, {"flags", flags.size()}, {"maximal_flags", maximal}, {"by_length", lengths}};
    if (flags.size() <= 200) o.results["list"] = listed;
    o.csv.columns = {"q", "n", "m", "flags", "maximal_flags"};
    o.csv.rows.push_back({std::to_string(q), std::to_string(n), std::to_string(m), std::to_string(flags.size()), std::to_string(maximal)});
    return o;
}

Outcome cmd_flag_of_point(const RunConfig& c, Cache&) {
    if (c.str("values").empty()) throw PreconditionError("flag-of-point needs a value table file (--values)");
    const ValueTable t = read_value_table(c.str("values"));
    const ChainRing R(field_of(t.q), t.m);
    const Flag f = flag_of_point(R, t.n, t.values);
    Outcome o;
    json ranks = json::array();
    o.csv.columns = {"step", "rank", "pivots"};
    for (std::size_t i = 0; i < f.chain.size(); ++i) {
        ranks.push_back(f.chain[i].h);
        o.csv.rows.push_back({std::to_string(i), std::to_string(f.chain[i].h), join_num(f.chain[i].pivots)});
    }
    o.results = {{"q", t.q}, {"n", t.n}, {"m", t.m}, {"values", t.values.size()}, {"flag", f.to_json()}, {"ranks", ranks}, {"maximal", f.is_maximal()}};
    return o;
}

Outcome cmd_jl(const RunConfig& c, Cache& cache) {
    const unsigned q = cfg_q(c);
    const std::size_t table_cap = c.positive("table_cap");
    std::vector<std::string> sources;
    const TableFn tables = [&](const GroupPtr& G) {
        const std::string key = "chartable-" + G->name();
        if (auto j = cache.load(key)) {
            try {
                CharacterTable T = attach_group(G, CharacterTable::from_json(*j));
                if (T.orthogonality_holds()) {
                    sources.push_back("cache");
                    return T;
                }
            } catch (const Error&) {
            } catch (const json::exception&) {
            }
        }
        CharacterTable T = character_table(G, table_cap);
        cache.store(key, T.to_json());
        sources.push_back("computed");
        return T;
    };
    const JlMatch r = jl_match(q, static_cast<unsigned>(c.positive("jl_q_cap")), tables);
    Outcome o;
    o.results = r.to_json();
    o.results["orthogonality"] = r.gl_table.orthogonality_holds() && r.b_table.orthogonality_holds();
    o.results["table_sources"] = sources;
    o.csv.columns = {"gl_character", "quotient_character", "degree"};
    for (const auto& [a, b] : r.pairs) o.csv.rows.push_back({std::to_string(a), std::to_string(b), r.gl_table.degree(a).str()});
    return o;
}

Outcome cmd_selftest(const RunConfig& c, Cache& cache) {
    Outcome o;
    json checks = json::array();
    bool all = true;
    auto check = [&](const std::string& name, const std::function<json()>& body) {
        json entry = {{"check", name}};
        try {
            json detail = body();
            entry["pass"] = detail.at("pass").get<bool>();
            entry["detail"] = detail;
        } catch (const Error& e) {
            entry["pass"] = false;
            entry["detail"] = {{"error", e.what()}, {"exit_code", e.exit_code()}};
        }
        all = all && entry["pass"].get<bool>();
        o.csv.rows.push_back({name, entry["pass"].get<bool>() ? "pass" : "fail"});
        checks.push_back(entry);
    };
    check("tower q=2 n=2 m=1 has rank 6", [&] {
        const TowerRun t = run_tower(2, 2, 1, c, cache);
        return json{{"pass", t.ok && t.results["rank"] == 6}, {"rank", t.results["rank"]}};
    });
    check("strata census q=2 n=3 m=1 is 7 + 7", [&] {
        const ChainRing R(field_of(2), 1);
        const auto a = enumerate_summands(R, 3, 1).size(), b = enumerate_summands(R, 3, 2).size();
        return json{{"pass", a == 7 && b == 7}, {"h1", a}, {"h2", b}};
    });
    check("q=2 n=2 m=1 has 3 maximal flags", [&] {
        const ChainRing R(field_of(2), 1);
        std::size_t maximal = 0;
        for (const auto& f : enumerate_flags(R, 2)) maximal += f.is_maximal();
        return json{{"pass", maximal == 3}, {"maximal_flags", maximal}};
    });
    check("character table of GL_2(F_3) is orthogonal", [&] {
        const CharacterTable T = character_table(group_gl(2, 3, 1));
        return json{{"pass", T.orthogonality_holds() && T.chars.size() == 8}, {"characters", T.chars.size()}};
    });
    check("depth-zero matching at q=2", [&] {
        const JlMatch r = jl_match(2);
        return json{{"pass", r.pairs.size() == 1}, {"matching_size", r.pairs.size()}, {"sign_checks", r.sign_checks}};
    });
    check("random fixed-point counts agree", [&] {
        std::mt19937_64 rng(static_cast<std::uint64_t>(c.integer("seed")));
        const DivisionAlgebra B(2, 2);
        const std::uint64_t want = c.positive("instances");
        std::uint64_t agreed = 0, tried = 0;
        json cases = json::array();
        while (agreed < want && tried < 20 * want) {
            ++tried;
            const DivisionAlgebra::Elem b = B.random(rng, 2);
            try {
                const LocalMatrix g = rng() % 2 ? LocalMatrix::identity(B.base(), 2) : reduced_companion(B, b).inverse();
                const FixedPointReport r = total_fixed_points(g, B, b, 1, true);
                if (!r.brute->stable) continue;
                ++agreed;
                cases.push_back({{"b", B.to_json(b)}, {"per_fiber", r.per_fiber}, {"bruteforce", r.brute->count}});
            } catch (const CrossCheckFailure&) {
                throw;
            } catch (const Error&) {
                // uncertified or over a cap: skip
            }
        }
        return json{{"pass", agreed == want}, {"agreed", agreed}, {"tried", tried}, {"cases", cases}};
    });
    o.results = {{"checks", checks}, {"all_pass", all}};
    o.csv.columns = {"check", "status"};
    if (!all) {
        std::cout << render(c.str("format"), "selftest", {{"schema", kReportSchema}, {"command", "selftest"}, {"config", c.to_json()}, {"results", o.results}}, o.csv);
        throw CrossCheckFailure("selftest failed");
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ltower: level-structure towers, strata, fixed-point counts and depth-zero character checks"};
    app.require_subcommand(1);
    app.fallthrough();

    const RunConfig defaults = RunConfig::defaults();
    std::string config_path;
    app.add_option("--config", config_path, "flat key = value config file");
    std::map<std::string, std::string> raw;
    std::map<std::string, CLI::Option*> opts;
    const json default_kv = defaults.to_json();
    for (const auto& [key, value] : default_kv.items()) {
        std::string flag = "--" + key;
        for (auto& ch : flag)
            if (ch == '_') ch = '-';
        opts[key] = app.add_option(flag, raw[key], "config key " + key + " (default '" + value.get<std::string>() + "')");
    }

    const std::map<std::string, std::pair<std::string, Command>> commands = {
        {"tower", {"build the level-m tower and check the Drinfeld condition", cmd_tower}},
        {"count", {"count fixed points of b x g on the level-m fiber", cmd_count}},
        {"strata", {"enumerate boundary-strata labels", cmd_strata}},
        {"strata-action", {"count labels fixed by an elliptic g", cmd_strata_action}},
        {"flags", {"enumerate flags of direct summands", cmd_flags}},
        {"flag-of-point", {"compute the flag attached to a value table", cmd_flag_of_point}},
        {"jl", {"depth-zero matching between GL_2 cuspidal and quaternion characters", cmd_jl}},
        {"selftest", {"quick end-to-end checks", cmd_selftest}},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, entry] : commands) subs[name] = app.add_subcommand(name, entry.first);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ErrorKind::Precondition);
    }

    std::string command;
    for (const auto& [name, sub] : subs)
        if (sub->parsed()) command = name;

    try {
        RunConfig config = defaults;
        if (!config_path.empty()) config.load_file(config_path);
        for (const auto& [key, opt] : opts)
            if (opt->count() > 0) config.set(key, raw[key]);
        const std::string format = config.str("format");
        if (format != "json" && format != "csv" && format != "text") throw PreconditionError("unknown format '" + format + "' (json, csv, text)");

        Cache cache(config.str("cache_dir"));
        const auto start = std::chrono::steady_clock::now();
        Outcome out = commands.at(command).second(config, cache);
        const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

        json report = {{"schema", kReportSchema},
                       {"command", command},
                       {"config", config.to_json()},
                       {"results", out.results},
                       {"certificates", out.certificates},
                       {"cache", {{"enabled", cache.enabled()}, {"hits", cache.hits()}, {"misses", cache.misses()}}}};
        if (config.flag("timings")) report["timings"] = {{"total_ms", elapsed}};
        std::cout << render(format, command, report, out.csv);
        return 0;
    } catch (const Error& e) {
        std::cerr << "ltower " << command << ": " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "ltower " << command << ": internal error: " << e.what() << "\n";
        return 1;
    }
}
