#include "cli_support.hpp"

#include <unistd.h>

#include <cctype>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "ltower/errors.hpp"

namespace ltower::cli {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

long long to_integer(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        throw PreconditionError(what + ": '" + s + "' is not an integer");
    }
    if (used != s.size()) throw PreconditionError(what + ": '" + s + "' is not an integer");
    return v;
}

// Recursive-descent parser for sums of products of powered atoms.
template <class T>
struct ExprOps {
    std::function<T(long long)> integer;
    std::function<T(long long)> code;
    std::function<T(const std::string&, long long)> ident;  // name, exponent
    std::function<T(const T&, const T&)> add, mul;
    std::function<T(const T&)> neg;
};

template <class T>
class ExprParser {
public:
    ExprParser(const std::string& s, const ExprOps<T>& ops) : ops_(ops) {
        for (char c : s)
            if (!std::isspace(static_cast<unsigned char>(c))) s_ += c;
    }

    T parse() {
        if (s_.empty()) fail("empty expression");
        T v = expr();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw PreconditionError("cannot parse '" + s_ + "' at position " + std::to_string(i_) + ": " + why);
    }
    bool peek(char c) const { return i_ < s_.size() && s_[i_] == c; }

    T expr() {
        bool negate = false;
        if (peek('+') || peek('-')) negate = s_[i_++] == '-';
        T v = term();
        if (negate) v = ops_.neg(v);
        while (peek('+') || peek('-')) {
            const bool minus = s_[i_++] == '-';
            T t = term();
            v = ops_.add(v, minus ? ops_.neg(t) : t);
        }
        return v;
    }

    T term() {
        T v = factor();
        while (peek('*')) {
            ++i_;
            v = ops_.mul(v, factor());
        }
        return v;
    }

    long long exponent() {
        if (!peek('^')) return 1;
        ++i_;
        bool minus = false;
        if (peek('-')) {
            minus = true;
            ++i_;
        }
        const long long k = number();
        return minus ? -k : k;
    }

    long long number() {
        const std::size_t start = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) fail("expected a number");
        return to_integer(s_.substr(start, i_ - start), "expression");
    }

    T power(const T& base, long long k) {
        if (k < 1) fail("only pi may carry a non-positive exponent");
        T v = base;
        for (long long j = 1; j < k; ++j) v = ops_.mul(v, base);
        return v;
    }

    T factor() {
        if (peek('(')) {
            ++i_;
            T v = expr();
            if (!peek(')')) fail("expected ')'");
            ++i_;
            return power(v, exponent());
        }
        if (peek('#')) {
            ++i_;
            const long long c = number();
            return power(ops_.code(c), exponent());
        }
        if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            const long long c = number();
            return power(ops_.integer(c), exponent());
        }
        const std::size_t start = i_;
        while (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (start == i_) fail("expected a term");
        const std::string name = s_.substr(start, i_ - start);
        return ops_.ident(name, exponent());
    }

    std::string s_;
    std::size_t i_ = 0;
    const ExprOps<T>& ops_;
};

LPoly lpoly_trim(LPoly f) {
    while (!f.empty() && f.back().is_zero()) f.pop_back();
    return f;
}

}  // namespace

RunConfig RunConfig::defaults() {
    RunConfig c;
    // precision 0 means m + 1; bound 0 means the default search bound
    c.kv_ = {{"q", "2"},         {"n", "2"},          {"m", "1"},           {"precision", "0"},   {"u", "pi"},
             {"w_order", "2"},   {"rank_cap", "5000"}, {"table_cap", "3000"}, {"jl_q_cap", "4"},   {"bound", "0"},
             {"bruteforce", "on"}, {"cache_dir", ""},  {"format", "json"},   {"seed", "1"},        {"g", ""},
             {"b", ""},          {"m_max", "3"},      {"values", ""},       {"timings", "off"},   {"instances", "8"}};
    return c;
}

void RunConfig::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot read config file " + path.string());
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw PreconditionError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        set(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
}

void RunConfig::set(const std::string& key, const std::string& value) {
    if (!defaults().has(key)) throw PreconditionError("unknown config key '" + key + "'");
    kv_[key] = value;
}

const std::string& RunConfig::str(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw PreconditionError("missing config key '" + key + "'");
    return it->second;
}

long long RunConfig::integer(const std::string& key) const { return to_integer(str(key), key); }

std::uint64_t RunConfig::positive(const std::string& key) const {
    const long long v = integer(key);
    if (v <= 0) throw PreconditionError(key + " must be positive");
    return static_cast<std::uint64_t>(v);
}

bool RunConfig::flag(const std::string& key) const {
    const std::string& v = str(key);
    if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
    if (v == "off" || v == "false" || v == "0" || v == "no") return false;
    throw PreconditionError(key + ": expected on/off, got '" + v + "'");
}

nlohmann::json RunConfig::to_json() const {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [k, v] : kv_) j[k] = v;
    return j;
}

LPoly parse_lpoly(const FieldPtr& F, const std::string& s) {
    ExprOps<LPoly> ops;
    ops.integer = [&](long long v) { return LPoly{Laurent::from_int(F, v)}; };
    ops.code = [&](long long c) {
        if (c < 0 || c >= static_cast<long long>(F->q())) throw PreconditionError("field code #" + std::to_string(c) + " out of range");
        return LPoly{Laurent::constant(F, static_cast<Fq>(c))};
    };
    ops.ident = [&](const std::string& name, long long k) {
        if (name == "pi") return LPoly{Laurent::pi_power(F, static_cast<int>(k))};
        if (name == "T") {
            if (k < 0) throw PreconditionError("negative power of T");
            LPoly f(static_cast<std::size_t>(k) + 1, Laurent::zero(F));
            f.back() = Laurent::constant(F, 1);
            return f;
        }
        throw PreconditionError("unknown symbol '" + name + "' (expected pi or T)");
    };
    ops.add = [](const LPoly& a, const LPoly& b) { return lpoly_add(a, b); };
    ops.mul = [](const LPoly& a, const LPoly& b) { return lpoly_mul(a, b); };
    ops.neg = [&](const LPoly& a) { return lpoly_sub(LPoly{Laurent::zero(F)}, a); };
    return lpoly_trim(ExprParser<LPoly>(s, ops).parse());
}

Laurent parse_laurent(const FieldPtr& F, const std::string& s) {
    const LPoly f = parse_lpoly(F, s);
    if (f.size() > 1) throw PreconditionError("'" + s + "' must not involve T");
    return f.empty() ? Laurent::zero(F) : f[0];
}

LocalMatrix parse_matrix(const FieldPtr& F, const std::string& s) {
    const auto colon = s.find(':');
    const std::string kind = trim(s.substr(0, colon));
    const std::string rest = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (kind == "inv") return parse_matrix(F, rest).inverse();
    if (kind == "companion") {
        const LPoly f = parse_lpoly(F, rest);
        if (f.size() < 2) throw PreconditionError("companion: polynomial must have degree at least 1");
        if (!(f.back() == Laurent::constant(F, 1))) throw PreconditionError("companion: polynomial must be monic");
        return LocalMatrix::companion(f);
    }
    if (kind == "diag") {
        std::vector<Laurent> d;
        for (const auto& e : split(rest, ',')) d.push_back(parse_laurent(F, e));
        return LocalMatrix::diagonal(d);
    }
    if (kind == "matrix") {
        const auto rows = split(rest, ';');
        const int n = static_cast<int>(rows.size());
        LocalMatrix M(F, n, n);
        for (int i = 0; i < n; ++i) {
            const auto entries = split(rows[static_cast<std::size_t>(i)], ',');
            if (static_cast<int>(entries.size()) != n) throw PreconditionError("matrix: row " + std::to_string(i + 1) + " has the wrong length");
            for (int j = 0; j < n; ++j) M.at(i, j) = parse_laurent(F, entries[static_cast<std::size_t>(j)]);
        }
        return M;
    }
    if (kind == "identity") return LocalMatrix::identity(F, static_cast<int>(to_integer(trim(rest), "identity size")));
    if (kind == "scalar") {
        const auto c2 = rest.find(':');
        if (c2 == std::string::npos) throw PreconditionError("scalar: expected scalar:<n>:<value>");
        const int n = static_cast<int>(to_integer(trim(rest.substr(0, c2)), "scalar size"));
        return LocalMatrix::scalar(F, n, parse_laurent(F, rest.substr(c2 + 1)));
    }
    throw PreconditionError("unknown matrix spec '" + kind + "' (companion, diag, matrix, identity, scalar, inv)");
}

DivisionAlgebra::Elem parse_algebra_elem(const DivisionAlgebra& B, const std::string& s) {
    using Elem = DivisionAlgebra::Elem;
    const FieldPtr& L = B.ext();
    auto scalar = [&](const Laurent& x) {
        Elem e = B.zero();
        e.x[0] = B.to_ext(x);
        return e;
    };
    ExprOps<Elem> ops;
    ops.integer = [&](long long v) { return scalar(Laurent::from_int(B.base(), v)); };
    ops.code = [&](long long c) {
        if (c < 0 || c >= static_cast<long long>(L->q())) throw PreconditionError("F_{q^n} code #" + std::to_string(c) + " out of range");
        return B.from_ext(static_cast<Fq>(c));
    };
    ops.ident = [&](const std::string& name, long long k) {
        if (name == "pi") return scalar(Laurent::pi_power(B.base(), static_cast<int>(k)));
        if (name == "Pi") {
            if (k < 0) throw PreconditionError("negative power of Pi");
            Elem v = B.one();
            for (long long j = 0; j < k; ++j) v = B.mul(v, B.uniformizer());
            return v;
        }
        throw PreconditionError("unknown symbol '" + name + "' (expected pi or Pi)");
    };
    ops.add = [&](const Elem& a, const Elem& b) { return B.add(a, b); };
    ops.mul = [&](const Elem& a, const Elem& b) { return B.mul(a, b); };
    ops.neg = [&](const Elem& a) { return B.mul(scalar(Laurent::from_int(B.base(), -1)), a); };
    return ExprParser<Elem>(s, ops).parse();
}

USpec parse_u_spec(const std::string& s, unsigned n, int w_order) {
    USpec u;
    if (n <= 1) return u;
    auto entries = split(s, ',');
    if (entries.size() == 1) entries.assign(n - 1, entries[0]);
    if (entries.size() != n - 1) throw PreconditionError("u needs " + std::to_string(n - 1) + " entries, got " + std::to_string(entries.size()));
    if (w_order < 2) throw PreconditionError("w_order must be at least 2");
    for (const auto& e : entries) {
        if (e == "0") {
        } else if (e == "pi" || e.rfind("pi^", 0) == 0) {
            if (e.size() > 2 && to_integer(e.substr(3), "u exponent") < 1) throw PreconditionError("u entries must be nilpotent");
        } else if (e == "w" || e.rfind("w^", 0) == 0) {
            if (e.size() > 1 && to_integer(e.substr(2), "u exponent") < 1) throw PreconditionError("u entries must be nilpotent");
            u.nil_orders.push_back(w_order);
        } else {
            throw PreconditionError("u entry '" + e + "' is not one of 0, pi, pi^k, w, w^k");
        }
        u.entries.push_back(e);
    }
    return u;
}

std::vector<RingElem> realize_u(const USpec& u, const RingPtr& ring) {
    std::vector<RingElem> out;
    std::size_t w = 0;
    for (const auto& e : u.entries) {
        if (e == "0") {
            out.push_back(ring->zero());
        } else if (e[0] == 'p') {
            const long long k = e.size() > 2 ? std::stoll(e.substr(3)) : 1;
            out.push_back(ring->pi().pow(static_cast<std::uint64_t>(k)));
        } else {
            const long long k = e.size() > 1 ? std::stoll(e.substr(2)) : 1;
            out.push_back(ring->w(w++).pow(static_cast<std::uint64_t>(k)));
        }
    }
    return out;
}

ValueTable read_value_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw PreconditionError("cannot read value table " + path.string());
    ValueTable t;
    std::map<long long, ValueVector> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        std::istringstream ls(s);
        std::string a, b;
        ls >> a >> b;
        const std::string where = path.string() + ":" + std::to_string(lineno);
        if (b.empty()) throw PreconditionError(where + ": expected two fields");
        if (a == "q") {
            t.q = static_cast<unsigned>(to_integer(b, where));
        } else if (a == "n") {
            t.n = static_cast<int>(to_integer(b, where));
        } else if (a == "m") {
            t.m = static_cast<int>(to_integer(b, where));
        } else {
            const long long idx = to_integer(a, where);
            ValueVector v;
            if (b == "bottom") {
                v = ValueVector::zero();
            } else {
                for (const auto& r : split(b, ',')) {
                    try {
                        v.tiers.emplace_back(r);
                    } catch (const std::exception&) {
                        throw PreconditionError(where + ": '" + r + "' is not a rational");
                    }
                }
            }
            if (!rows.emplace(idx, v).second) throw PreconditionError(where + ": duplicate index " + a);
        }
    }
    if (t.q < 2 || t.n < 1 || t.m < 1) throw PreconditionError(path.string() + ": header must give q, n and m");
    std::uint64_t size = 1;
    for (int i = 0; i < t.n * t.m; ++i) size *= t.q;
    if (rows.size() != size) throw PreconditionError(path.string() + ": expected " + std::to_string(size) + " values, got " + std::to_string(rows.size()));
    for (const auto& [idx, v] : rows) {
        if (idx != static_cast<long long>(t.values.size())) throw PreconditionError(path.string() + ": index " + std::to_string(t.values.size()) + " missing");
        t.values.push_back(v);
    }
    return t;
}

std::filesystem::path Cache::path_of(const std::string& key) const {
    std::string safe;
    for (char c : key) safe += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_';
    return std::filesystem::path(dir_) / (safe + ".json");
}

std::optional<nlohmann::json> Cache::load(const std::string& key) {
    if (!enabled()) return std::nullopt;
    std::ifstream in(path_of(key));
    if (in) {
        try {
            nlohmann::json j = nlohmann::json::parse(in);
            ++hits_;
            return j;
        } catch (const nlohmann::json::exception&) {
        }
    }
    ++misses_;
    return std::nullopt;
}

void Cache::store(const std::string& key, const nlohmann::json& value) {
    if (!enabled()) return;
    const std::filesystem::path target = path_of(key);
    std::filesystem::create_directories(target.parent_path());
    std::random_device rd;
    const std::filesystem::path tmp = target.parent_path() / ("." + target.filename().string() + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(rd()));
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw PreconditionError("cannot write cache file " + tmp.string());
        out << value.dump() << "\n";
        if (!out.flush()) throw PreconditionError("cannot write cache file " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string scalar_text(const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void flatten(const nlohmann::json& v, const std::string& prefix, std::ostringstream& out) {
    if (v.is_object()) {
        for (const auto& [k, x] : v.items()) flatten(x, prefix.empty() ? k : prefix + "." + k, out);
    } else if (v.is_array()) {
        bool simple = true;
        for (const auto& x : v) simple = simple && x.is_primitive();
        if (simple) {
            out << prefix << ":";
            for (const auto& x : v) out << " " << scalar_text(x);
            out << "\n";
        } else {
            for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "[" + std::to_string(i) + "]", out);
        }
    } else {
        out << prefix << ": " << scalar_text(v) << "\n";
    }
}

}  // namespace

std::string render(const std::string& format, const std::string& command, const nlohmann::json& report, const CsvTable& csv) {
    if (format == "json") return report.dump(2) + "\n";
    std::ostringstream out;
    if (format == "csv") {
        out << "# " << kCsvSchema << " " << command << "\n";
        for (std::size_t i = 0; i < csv.columns.size(); ++i) out << (i ? "," : "") << csv_field(csv.columns[i]);
        out << "\n";
        for (const auto& row : csv.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
            out << "\n";
        }
        return out.str();
    }
    if (format == "text") {
        out << "command: " << command << "\n";
        flatten(report.at("results"), "", out);
        return out.str();
    }
    throw PreconditionError("unknown format '" + format + "' (json, csv, text)");
}

}  // namespace ltower::cli
