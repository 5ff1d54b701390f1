#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <a4cb/engine.hpp>

namespace a4cb {

// Raised for case-file parse errors, table validation errors, and
// evaluation errors (point outside region, negative instantiated exponent).
struct table_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integer-affine form in the point coordinates a1..a10.
struct LinForm {
    std::array<int, 10> coeff{};
    int constant = 0;

    long long eval(const PBWIndex& a) const;
    bool is_zero() const;
    std::string to_string() const;
    // Accepts sums like "a5+a6-a8-a9-1" or "2*a3+1"; rejects u, w and junk.
    static LinForm parse(std::string_view text);
};

// LinForm extended by integer multiples of the summation variables u, w.
struct ExponentExpr {
    LinForm base;
    std::array<int, 2> var_coeff{};  // index 0 = u, index 1 = w

    long long eval(const PBWIndex& a, long long u, long long w) const;
    bool uses_var(int index) const { return var_coeff[std::size_t(index)] != 0; }
    std::string to_string() const;
    static ExponentExpr parse(std::string_view text);
};

struct Inequality {
    LinForm lhs, rhs;

    bool holds(const PBWIndex& a) const { return lhs.eval(a) >= rhs.eval(a); }
    bool strict(const PBWIndex& a) const { return lhs.eval(a) > rhs.eval(a); }
    std::string to_string() const;
};

struct Region {
    std::vector<Inequality> ineqs;

    bool contains(const PBWIndex& a) const;
    int strict_count(const PBWIndex& a) const;
    std::string to_string() const;
};

// Summation variable; the admissible range at a point is 0..min of the bounds.
struct SumVar {
    std::string name;  // "u" or "w"
    std::vector<LinForm> bounds;

    long long upper(const PBWIndex& a) const;
};

// Bracket factor (-1)^var * [top(a) + var; var]; the -1 of the printed shape
// L(a) - 1 + var lives in top's constant.
struct CoeffFactor {
    std::string var;
    LinForm top;
};

struct PatternFactor {
    int letter = 0;  // generator index 1..4
    ExponentExpr exp;
};

struct CaseSpec {
    std::string id;
    std::vector<SumVar> vars;          // 0, 1, or 2 entries, named u then w
    std::vector<CoeffFactor> factors;  // one per var, same order
    std::vector<PatternFactor> pattern;
    Region region;
    int line = 0;  // first source line, for diagnostics

    bool one_variable() const { return vars.size() == 1; }
    std::string to_string() const;
};

struct CaseTable {
    std::vector<CaseSpec> cases;
    std::string source_name;
    std::uint64_t checksum = 0;  // FNV-1a of the source bytes

    const CaseSpec* find(std::string_view id) const;
};

// Parses and validates the line-oriented case-file grammar:
//   case <id> / var <name> <= <linform>[, ...] / coeff <name> top= <linform>
//   / term e<i>^(<expexpr>) ... / region <linform> >= <linform> [; ...] / end
// '#' starts a comment. Anything else is rejected with a line number.
CaseTable load_cases(std::string_view text, std::string source_name = "embedded");

// Raw text of the bundled table (generated translation unit) and its
// parsed-once singleton.
const char* embedded_case_table_text();
const CaseTable& embedded_case_table();

bool region_contains(const Region& r, const PBWIndex& a);

// Ids of all cases whose region contains a, in table order.
std::vector<std::string> locate(const CaseTable& t, const PBWIndex& a);

struct MonomialTerm {
    LaurentPoly coeff;
    DividedWord word;
};

// One term per admissible assignment of the summation variables, zero
// coefficients pruned. Checks that every instantiated exponent is >= 0 and
// that each term's letter counts equal weight_of(a).
std::vector<MonomialTerm> instantiate(const CaseSpec& c, const PBWIndex& a);

// Up to count distinct points of {0..max_entry}^10 inside r with
// sum a_r * height(slot r) <= max_height, ordered by (height, lex) while
// preferring points satisfying the most inequalities strictly.
// entry_caps, when given, lowers the bound per coordinate.
std::vector<PBWIndex> sample_points(const Region& r, int max_entry, int max_height,
                                    std::size_t count,
                                    const std::array<int, 10>* entry_caps = nullptr);

// New CaseSpec with coordinate slots renamed j -> perm[j] in every LinForm
// and generator letters remapped by gen_map (1-based values); id gains "*".
CaseSpec apply_symmetry(const CaseSpec& c, const std::array<int, 10>& perm,
                        const std::array<int, 4>& gen_map);

struct CoverageStats {
    long long total = 0;  // points scanned: {0..max_entry}^10 with a4 = 0
    long long covered_zero = 0;
    long long covered_one = 0;
    long long covered_multi = 0;
    struct Overlap {
        std::string first, second;
        PBWIndex point;
    };
    // pairs of regions sharing a point at which both are fully strict
    std::vector<Overlap> strict_overlaps;
    std::optional<PBWIndex> uncovered_example;  // lex-smallest
};

// Scans the box {0..max_entry}^10 restricted to a4 = 0; no shipped region
// constrains a4, so the restriction loses nothing and tames the box size.
CoverageStats coverage_stats(const CaseTable& t, int max_entry);

}  // namespace a4cb
