#pragma once

#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "ltower/coeff_ring.hpp"
#include "ltower/laurent.hpp"
#include "ltower/period.hpp"
#include "ltower/strata.hpp"

namespace ltower::cli {

inline constexpr const char* kReportSchema = "ltower-report/1";
inline constexpr const char* kCsvSchema = "ltower-csv/1";

// Flat key=value configuration; later sources override earlier ones.
class RunConfig {
public:
    static RunConfig defaults();
    void load_file(const std::filesystem::path& path);
    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    const std::string& str(const std::string& key) const;
    long long integer(const std::string& key) const;
    // counts and caps: strictly positive
    std::uint64_t positive(const std::string& key) const;
    bool flag(const std::string& key) const;
    nlohmann::json to_json() const;

private:
    std::map<std::string, std::string> kv_;
};

// Laurent polynomial in T over F_q((pi)): sums of products of integers,
// field codes #k, pi^k (k may be negative) and T^k.
LPoly parse_lpoly(const FieldPtr& F, const std::string& s);
Laurent parse_laurent(const FieldPtr& F, const std::string& s);

// companion:<poly> | diag:<e>,<e>,.. | matrix:<row>;<row> (entries comma
// separated) | identity:<n> | scalar:<n>:<e> | inv:<spec>
LocalMatrix parse_matrix(const FieldPtr& F, const std::string& s);

// Sums of products of integers, #k (codes of F_{q^n}), pi^k and Pi^k.
DivisionAlgebra::Elem parse_algebra_elem(const DivisionAlgebra& B, const std::string& s);

// Comma-separated entries for u_1..u_{n-1}: 0 | pi | pi^k | w | w^k. Each
// w occurrence is a fresh nilpotent variable of order w_order.
struct USpec {
    std::vector<std::string> entries;
    std::vector<int> nil_orders;
};
USpec parse_u_spec(const std::string& s, unsigned n, int w_order);
std::vector<RingElem> realize_u(const USpec& u, const RingPtr& ring);

// Header lines "q <q>", "n <n>", "m <m>", then "<flat index> <value>" with
// value "bottom" or comma-separated rationals. Lines starting with # are skipped.
struct ValueTable {
    unsigned q = 0;
    int n = 0, m = 0;
    std::vector<ValueVector> values;
};
ValueTable read_value_table(const std::filesystem::path& path);

// Write-temp-then-rename JSON cache; disabled when dir is empty.
class Cache {
public:
    explicit Cache(std::string dir) : dir_(std::move(dir)) {}
    bool enabled() const { return !dir_.empty(); }
    std::optional<nlohmann::json> load(const std::string& key);
    void store(const std::string& key, const nlohmann::json& value);
    int hits() const { return hits_; }
    int misses() const { return misses_; }

private:
    std::filesystem::path path_of(const std::string& key) const;
    std::string dir_;
    int hits_ = 0, misses_ = 0;
};

// Fixed columns per command; rows are already stringified.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string render(const std::string& format, const std::string& command, const nlohmann::json& report, const CsvTable& csv);

}  // namespace ltower::cli
