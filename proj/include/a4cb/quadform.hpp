#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <a4cb/cases.hpp>

namespace a4cb {

// Raised for form-file parse errors and arity mismatches.
struct form_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integral quadratic form q(x) = sum_i diag[i]*x_i^2 + sum_{i<j} off(i,j)*x_i*x_j
// on integer vectors of length n.  Off-diagonal storage is symmetric.  The
// diagonal defaults to 1 (unit form); QP3 keeps an explicit diagonal because
// its correction term contributes 2*w^2, so q(unit at w) = 2 there.
struct QuadForm {
    std::string name;
    int n = 0;
    std::vector<int> diag;  // size n
    std::vector<int> off;   // packed strict upper triangle

    // n-variable form with diagonal 1 and all off-diagonal entries 0.
    static QuadForm unit(std::string name, int n);

    int coeff(int i, int j) const;        // i == j reads the diagonal
    void set_coeff(int i, int j, int c);  // symmetric; i == j sets the diagonal
    // Adds scale * (u.x) * (w.x); u, w are coefficient vectors of length n.
    void add_product(const std::vector<int>& u, const std::vector<int>& w, int scale);
    bool is_unit() const;  // every diagonal entry equals 1

    long long eval(const std::vector<int>& x) const;  // throws form_error on arity mismatch
    // Renders in the form-file format: "n=<arity>" then "q i j <coeff>" lines.
    std::string to_string() const;
};

// Outcome of the bounded witness search over the box {0..bound}^n.
// weakly_positive: no nonzero x in the box has q(x) <= 0 (strict threshold).
// nonnegative: no x in the box has q(x) < 0 (weaker threshold; reported
// alongside because the two thresholds differ exactly when some nonzero x
// gives q(x) = 0).  Each witness, when present, is the lexicographically
// smallest offender for its threshold and re-verifies by eval.
struct PositivityVerdict {
    std::string form_name;
    int search_bound = 0;
    bool weakly_positive = true;
    std::optional<std::vector<int>> witness;  // q(witness) <= 0, witness != 0
    long long witness_value = 0;
    bool nonnegative = true;
    std::optional<std::vector<int>> negative_witness;  // q(...) < 0
    long long negative_value = 0;
    unsigned long long nodes_visited = 0;

    std::string to_string() const;
};

// Exhaustive search with branch-and-bound pruning on partial sums.
// bound must be in 1..10000.
PositivityVerdict weakly_positive(const QuadForm& q, int bound);

// Linear form whose coefficients are integer-affine in a1..a10:
//   value(a, x) = sum_j coeffs[j](a) * (atoms[j] . x).
// For LM/LP1/LP2 the atoms are the coordinates x1..x7,m,s,p themselves.
// LP3's defining display groups x7-w and x4-x3-x6-w, with both groups
// nonnegative on its summation domain; those groups are kept as atoms so
// that coefficient nonnegativity on the case region is visible per atom
// (the raw w-coefficient, -2*(a5-a1), is negative whenever a5 > a1).
struct ParamLinearForm {
    std::string name;
    int arity = 0;  // length of raw vectors x
    std::vector<std::string> atom_names;
    std::vector<std::vector<int>> atoms;  // each of length arity
    std::vector<LinForm> coeffs;          // one per atom

    std::vector<long long> materialize(const PBWIndex& a) const;
    long long eval(const PBWIndex& a, const std::vector<int>& x) const;
    std::string to_string() const;
};

struct LNonnegCounterexample {
    PBWIndex point;
    std::string atom;
    long long value = 0;
};

// Scan result: holds iff every atom coefficient of L is >= 0 at every point
// of {0..max_entry}^10 that the region contains.
struct LNonnegReport {
    std::string form_name;
    bool holds = true;
    long long points_checked = 0;
    std::vector<LNonnegCounterexample> counterexamples;  // capped at 16

    std::string to_string() const;
};

// A region with no inequalities certifies nothing and yields an empty scan
// (holds vacuously); this differs from Region::contains, where an empty
// conjunction is satisfied everywhere.
LNonnegReport region_implies_L_nonneg(const ParamLinearForm& L, const Region& r, int max_entry);

// The forms from the degree bounds behind the one-variable case table:
// linear LM, LP1, LP2, LP3 and quadratic QM, QP1, QP2 (both equal to QM by
// definition), QP3 = QM + 2*(x4-x3-x6-w)*(x7-w) with arity 11.
// Variable order: x1..x7, m, s, p (indices 0..9), then w (index 10).
struct FormLibrary {
    std::map<std::string, ParamLinearForm> linear;
    std::map<std::string, QuadForm> quadratic;
};
const FormLibrary& builtin_forms();

// Parses "n=<arity>" followed by "q i j <coeff>" lines (1-based indices,
// i == j overrides the unit diagonal, duplicate pairs rejected).  '#' starts
// a comment.  Unmentioned off-diagonal entries are 0, diagonal entries 1.
QuadForm load_quad_form(const std::string& text, const std::string& name = "custom");

}  // namespace a4cb
