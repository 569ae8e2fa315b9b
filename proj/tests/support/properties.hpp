#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ltower::testing {

struct PropertyResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::string first_failure;
};

inline constexpr int kPropertyCases = 1000;

// Ring axioms on random triples for every constructed ring.
std::vector<PropertyResult> ring_axiom_suites(std::uint64_t seed, int cases = kPropertyCases);
// Canonical forms are fixed points of re-canonicalization and ignore the
// presentation they were computed from.
std::vector<PropertyResult> normal_form_suites(std::uint64_t seed, int cases = kPropertyCases);
// to_json(from_json(to_json(x))) is byte-identical to to_json(x).
std::vector<PropertyResult> serialization_suites(std::uint64_t seed, int cases = kPropertyCases);

}  // namespace ltower::testing
