#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <a4cb/cases.hpp>

namespace a4cb {

struct checker_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One (case, point) verification: region membership, bar-fixed coefficients,
// expansion through the shuffle engine, and the congruence with E^A modulo
// v^-1 L.  A report passes iff region_ok, bar_invariant, and
// congruence.congruent_to_target all hold and nothing was skipped.
struct VerificationReport {
    std::string case_id;
    PBWIndex point;
    bool region_ok = false;
    bool bar_invariant = false;
    std::size_t term_count = 0;
    CongruenceReport congruence;
    double elapsed_ms = 0.0;                 // excluded from both renderings
    std::optional<std::string> skip_reason;  // height cap or sampling shortfall
    std::optional<std::string> error;        // instantiation failure text

    enum class Outcome { pass, fail, skip };
    Outcome outcome() const;
    bool pass() const { return outcome() == Outcome::pass; }
    std::string to_text() const;  // one line
    std::string to_json() const;  // one object, stable field names
};

// Empirical selection of the realization's free parameters: every
// combination is probed with the quantum Serre relations and with sample
// congruences of the monomial case; survivors are grouped into behavioral
// classes by comparing their root vectors and expansions.  Distinct
// surviving combinations that compute identical word sums differ only in
// labeling, so acceptance is per class, and exactly one class must survive.
struct PinningRecord {
    struct Probe {
        Convention conv;
        bool serre_ok = false;
        bool samples_ok = false;
        int cls = -1;  // behavioral class among survivors, -1 for rejects
        bool accepted() const { return serre_ok && samples_ok; }
    };
    std::vector<Probe> probes;  // all 16 combinations
    int accepted_count = 0;
    int class_count = 0;
    Convention representative;  // member of the unique surviving class

    std::string to_text() const;
};

// Cached; throws checker_error unless exactly one behavioral class survives
// or the shipped pinned convention is not in it.
const PinningRecord& pin_conventions();

// Batch outcome over a table; reports and counts follow table order.
// to_text contains no timing, so identical inputs render byte-identically.
struct BatchSummary {
    struct CaseCounts {
        std::string case_id;
        int passed = 0;
        int failed = 0;
        int skipped = 0;
    };
    std::vector<CaseCounts> cases;
    std::vector<VerificationReport> reports;   // every verification, table order
    std::vector<VerificationReport> failures;  // the failing subset
    int total_pass = 0;
    int total_fail = 0;
    int total_skip = 0;
    PinningRecord pinning;

    bool all_passed() const { return total_fail == 0; }
    std::string to_text() const;
};

// True iff every instantiated coefficient equals its own bar image
// (v -> v^-1).  Divided-power words are bar-fixed, so this is the
// structural part of bar invariance of the whole element.
// Throws table_error when a lies outside the case region.
bool bar_invariant(const CaseSpec& c, const PBWIndex& a);

// Never throws for in-contract inputs: region failure and instantiation
// errors are recorded in the report, and an engine height-cap rejection
// yields a skip report.
VerificationReport verify_case_at(const CaseSpec& c, const PBWIndex& a);

// Samples points of the case region (most binding inequalities first, a4
// capped at 1 since no region constrains a4 and each unit of a4 adds 4 to
// the height) and verifies each.  When fewer than `samples` points exist
// within the bounds, the shortfall is reported as skips so the requested
// count is always accounted for.
std::vector<VerificationReport> verify_case(const CaseSpec& c, int samples = 2,
                                            int max_entry = 3, int max_height = 12);

// verify_case over every table entry; jobs > 1 distributes cases across
// threads, with reports merged in table order either way.
BatchSummary verify_all(const CaseTable& t, int samples = 2, int max_entry = 3,
                        int max_height = 12, int jobs = 1);

// Collapse probe for one-variable cases at points where the stored bracket
// top evaluates to -1 (the printed top L(a)-1+u with L(a) = 0): every u >= 1
// coefficient vanishes, so the sum must equal its u=0 monomial, both as a
// term list and after expansion.
struct DegenerationProbe {
    std::string case_id;
    PBWIndex point;
    bool applicable = false;      // one-variable case, top(a) == -1, a in region
    bool single_term = false;     // instantiation is exactly the u=0 monomial, coefficient 1
    bool expansion_equal = false; // PBW expansion equals that of the u=0 monomial

    bool pass() const { return applicable && single_term && expansion_equal; }
    std::string to_text() const;
};

DegenerationProbe degeneration_check(const CaseSpec& c, const PBWIndex& a);

}  // namespace a4cb
