#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <nlohmann/json.hpp>
#include <random>
#include <string>
#include <vector>

#include "ltower/cyclotomic.hpp"
#include "ltower/elliptic.hpp"
#include "ltower/laurent.hpp"

namespace ltower {

inline constexpr std::uint64_t kGroupCap = 100000;
// Groups up to this order keep a full multiplication table.
inline constexpr std::size_t kTableCap = 3000;

// Finite group on a sorted list of canonical element keys.
class FiniteGroup {
public:
    using Key = std::vector<std::uint32_t>;
    using MulFn = std::function<Key(const Key&, const Key&)>;

    FiniteGroup(std::string name, std::vector<Key> elements, MulFn mul, nlohmann::json meta = {});

    const std::string& name() const { return name_; }
    const nlohmann::json& meta() const { return meta_; }
    std::size_t order() const { return elems_.size(); }
    const Key& element(std::size_t i) const { return elems_[i]; }
    const std::vector<Key>& elements() const { return elems_; }
    // Throws PreconditionError for a key outside the group.
    std::size_t index_of(const Key& k) const;
    bool contains(const Key& k) const;
    std::size_t mul(std::size_t a, std::size_t b) const;
    std::size_t inverse(std::size_t a) const { return inv_[a]; }
    std::size_t identity() const { return id_; }
    std::size_t element_order(std::size_t a) const;
    // Closure on all products when tabulated, associativity on random triples.
    bool verify(std::mt19937_64& rng, int samples = 200) const;

private:
    std::string name_;
    nlohmann::json meta_;
    std::vector<Key> elems_;
    MulFn mul_;
    std::vector<std::uint32_t> table_;
    std::vector<std::size_t> inv_;
    std::size_t id_ = 0;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

// GL_n(o/pi^m) with ChainMat codes (row-major) as keys.
GroupPtr group_gl(unsigned n, unsigned q, int m, std::uint64_t cap = kGroupCap);
// B^x / pi^Z (1 + P_B^k) for the quaternion algebra in its cyclic model
// F_{q^2}((pi))<Pi>, Pi x = x^q Pi, Pi^2 = pi. Keys [s, a_0, ..., a_{k-1}] stand
// for (a_0 + a_1 Pi + ...) Pi^s with a_i in F_{q^2}.
GroupPtr group_quaternion_quotient(unsigned q, int k);
GroupPtr group_cyclic(unsigned n);
GroupPtr group_symmetric(unsigned n);

struct ConjugacyClass {
    std::size_t rep = 0;  // element index
    std::size_t size = 0;
    std::size_t order = 0;
};

struct CharacterTable {
    GroupPtr group;  // null for an imported table
    std::string group_name;
    std::size_t order = 0;
    unsigned conductor = 1;
    std::vector<ConjugacyClass> classes;
    std::vector<FiniteGroup::Key> class_reps;
    std::vector<std::size_t> class_of;  // per element (empty when imported)
    std::vector<std::vector<Cyclotomic>> chars;

    std::vector<std::size_t> class_sizes() const;
    std::size_t class_index(const FiniteGroup::Key& k) const;
    const Cyclotomic& value(std::size_t chi, const FiniteGroup::Key& k) const { return chars[chi][class_index(k)]; }
    Rational degree(std::size_t chi) const { return chars[chi][0].to_rational(); }
    // Exact row and column orthogonality.
    bool orthogonality_holds() const;
    nlohmann::json to_json() const;
    static CharacterTable from_json(const nlohmann::json& j);
};

// Classes sorted with the identity first, then by least element key.
std::vector<ConjugacyClass> conjugacy_classes(const FiniteGroup& G, std::vector<std::size_t>* class_of = nullptr);
// Dixon's method modulo a prime p = 1 mod exponent, lifted to exact values.
CharacterTable character_table(const GroupPtr& G, std::size_t cap = kTableCap);
// Rebinds an imported table to G, checking class representatives and sizes.
CharacterTable attach_group(const GroupPtr& G, const CharacterTable& imported);

// For a table of GL_2(F_q) (group_gl(2, q, 1)): indices of characters with no
// constituent in any principal series Ind_B^G(mu).
std::vector<std::size_t> cuspidal_characters(const CharacterTable& T);

struct InducedCharSpec {
    enum class Shape { K0Inflated, KmTrivial };
    Shape shape = Shape::KmTrivial;
    int m = 1;                              // level for KmTrivial
    const CharacterTable* table = nullptr;  // GL_n(F_q) table for K0Inflated
    std::size_t character = 0;
    // pi acts trivially in both shapes.
};

struct HcValue {
    Cyclotomic value;
    std::size_t support = 0;  // cosets h with h^{-1} g h in K_pi
    std::size_t stable_lattices = 0;
    bool early_zero = false;
    EllipticCertificate certificate;
    nlohmann::json to_json() const;
};

// sum over h in G/K_pi with h^{-1} g h in K_pi of lambda(h^{-1} g h).
HcValue hc_character(const InducedCharSpec& spec, const LocalMatrix& g);

struct JlClass {
    Fq x = 0;        // eigenvalue code in F_{q^2}
    int central = 0;  // g scaled by pi^central, b by Pi^{2 central}
    LPoly charpoly;
    std::vector<Cyclotomic> pi_values;   // per cuspidal character
    std::vector<Cyclotomic> rho_values;  // per character of the quaternion quotient
};

struct JlMatch {
    unsigned q = 0;
    std::string convention;
    CharacterTable gl_table, b_table;
    std::vector<std::size_t> cuspidal;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (GL character, quotient character)
    std::vector<JlClass> classes;
    std::size_t sign_checks = 0;
    nlohmann::json to_json() const;
};

// Depth-zero matching chi_rho(b) = -chi_pi(g_b) on all elliptic classes.
using TableFn = std::function<CharacterTable(const GroupPtr&)>;
JlMatch jl_match(unsigned q, unsigned q_cap = 4, const TableFn& tables = {});

}  // namespace ltower
