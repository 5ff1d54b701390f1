#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "a4cb/checker.hpp"

#include <json.hpp>

#include <string>
#include <vector>

using namespace a4cb;

namespace {

// case 3.3 with its region chain reversed; admits points whose word is not
// congruent to a single basis monomial
const char* kReversed33 =
    "case 3.3r\n"
    "var u <= a2\n"
    "coeff u top= a5-a1-1\n"
    "term e1^(a4)\n"
    "term e3^(a2-u)\n"
    "term e2^(a3+a4+a6)\n"
    "term e4^(a1+a2)\n"
    "term e1^(a7+a9)\n"
    "term e3^(a3+a4+a5+a6+u)\n"
    "term e2^(a7+a8+a9)\n"
    "term e4^(a3+a4)\n"
    "term e1^(a10)\n"
    "term e3^(a7)\n"
    "region a8+a9 >= a5+a6 ; a3+a6 >= a7+a9 ; a8 >= a1\n"
    "region a1 >= a5 ; a5 >= a10 ; a6 >= a2\n"
    "end\n";

}  // namespace

TEST_CASE("convention pinning selects a single behavioral class") {
    const PinningRecord& pin = pin_conventions();
    CHECK(pin.probes.size() == 16);
    CHECK(pin.accepted_count == 4);
    CHECK(pin.class_count == 1);
    CHECK(pin.representative == Convention::pinned());

    int accepted = 0;
    for (const PinningRecord::Probe& p : pin.probes) {
        CHECK(p.accepted() == (p.cls >= 0));
        if (!p.accepted()) continue;
        ++accepted;
        CHECK(p.cls == 0);
        // survivors differ only in labeling: commutator side and sign are pinned
        CHECK(p.conv.comm_exp == -1);
        CHECK_FALSE(p.conv.comm_swap);
    }
    CHECK(accepted == 4);
    CHECK(!pin.to_text().empty());
}

TEST_CASE("single point verification fixture") {
    const CaseTable& t = embedded_case_table();
    PBWIndex a = PBWIndex::parse("(1,1,0,0,1,0,1,0,0,1)");
    VerificationReport r = verify_case_at(*t.find("1.1"), a);
    CHECK(r.outcome() == VerificationReport::Outcome::pass);
    CHECK(r.pass());
    CHECK(r.region_ok);
    CHECK(r.bar_invariant);
    CHECK(r.term_count == 2);
    CHECK(r.congruence.in_lattice);
    CHECK(r.congruence.congruent_to_target);
    CHECK(r.to_text() == "1.1 @ (1,1,0,0,1,0,1,0,0,1): pass terms=2");

    nlohmann::json j = nlohmann::json::parse(r.to_json());
    CHECK(j["case"] == "1.1");
    CHECK(j["outcome"] == "pass");
    CHECK(j["term_count"] == 2);
    CHECK(j["point"] == nlohmann::json::array({1, 1, 0, 0, 1, 0, 1, 0, 0, 1}));
}

TEST_CASE("out-of-region point fails without throwing") {
    const CaseTable& t = embedded_case_table();
    PBWIndex outside = PBWIndex::parse("(0,0,0,0,0,0,0,1,0,0)");
    VerificationReport r = verify_case_at(*t.find("1.1"), outside);
    CHECK(r.outcome() == VerificationReport::Outcome::fail);
    CHECK_FALSE(r.region_ok);
}

TEST_CASE("height cap failures are reported as skips") {
    const CaseTable& t = embedded_case_table();
    PBWIndex tall = PBWIndex::parse("(2,2,2,0,2,2,2,2,2,2)");
    REQUIRE(region_contains(t.find("1.1")->region, tall));
    VerificationReport r = verify_case_at(*t.find("1.1"), tall);
    CHECK(r.outcome() == VerificationReport::Outcome::skip);
    REQUIRE(r.skip_reason.has_value());
    CHECK(r.skip_reason->find("height cap") != std::string::npos);
}

TEST_CASE("bar invariance of instantiated coefficients") {
    const CaseTable& t = embedded_case_table();
    CHECK(bar_invariant(*t.find("1.1"), PBWIndex::parse("(1,1,0,0,1,0,1,0,0,1)")));
    CHECK_THROWS_AS(bar_invariant(*t.find("1.1"), PBWIndex::parse("(0,0,0,0,0,0,0,1,0,0)")),
                    table_error);
}

TEST_CASE("sampling shortfall is accounted as skips") {
    const CaseTable& t = embedded_case_table();
    std::vector<VerificationReport> reps = verify_case(*t.find("1.1"), 5, 1, 2);
    REQUIRE(reps.size() == 5);
    int passed = 0, skipped = 0;
    for (const VerificationReport& r : reps) {
        if (r.outcome() == VerificationReport::Outcome::pass) ++passed;
        if (r.outcome() == VerificationReport::Outcome::skip) {
            ++skipped;
            REQUIRE(r.skip_reason.has_value());
            CHECK(r.skip_reason->find("sampling shortfall") != std::string::npos);
        }
    }
    CHECK(passed == 3);
    CHECK(skipped == 2);
}

TEST_CASE("batch verification agrees across thread counts") {
    const CaseTable& t = embedded_case_table();
    BatchSummary serial = verify_all(t, 1, 1, 6, 1);
    CHECK(serial.all_passed());
    CHECK(serial.total_pass == 75);
    CHECK(serial.total_fail == 0);
    CHECK(serial.total_skip == 0);
    CHECK(serial.reports.size() == 75);
    CHECK(serial.cases.size() == 75);
    int sum = 0;
    for (const BatchSummary::CaseCounts& c : serial.cases) sum += c.passed + c.failed + c.skipped;
    CHECK(sum == 75);
    // reports come back in table order
    for (std::size_t i = 0; i < serial.reports.size(); ++i)
        CHECK(serial.reports[i].case_id == t.cases[i].id);

    BatchSummary threaded = verify_all(t, 1, 1, 6, 3);
    CHECK(threaded.to_text() == serial.to_text());
}

TEST_CASE("reversed region chain is caught by verification") {
    CaseTable mt = load_cases(kReversed33, "mutant");
    PBWIndex w = PBWIndex::parse("(0,0,0,0,0,1,0,1,0,0)");
    VerificationReport r = verify_case_at(mt.cases[0], w);
    CHECK(r.outcome() == VerificationReport::Outcome::fail);
    CHECK(r.region_ok);
    CHECK(r.bar_invariant);
    CHECK(r.congruence.in_lattice);
    CHECK_FALSE(r.congruence.congruent_to_target);
    CHECK(!r.congruence.offenders.empty());

    // the shipped chain excludes the offending point
    const CaseTable& t = embedded_case_table();
    CHECK_FALSE(region_contains(t.find("3.3")->region, w));
}

TEST_CASE("degeneration collapse at stored-top points") {
    const CaseTable& t = embedded_case_table();

    DegenerationProbe d1 = degeneration_check(*t.find("1.1"), PBWIndex::parse("(1,1,0,0,1,0,1,0,1,1)"));
    CHECK(d1.applicable);
    CHECK(d1.single_term);
    CHECK(d1.expansion_equal);
    CHECK(d1.pass());

    DegenerationProbe d2 = degeneration_check(*t.find("3.3"), PBWIndex::parse("(1,0,0,0,1,0,0,1,0,1)"));
    CHECK(d2.pass());

    // not applicable: no summation variable, or the stored top is not -1
    CHECK_FALSE(degeneration_check(*t.find("M1.1"), PBWIndex{}).applicable);
    CHECK_FALSE(
        degeneration_check(*t.find("1.1"), PBWIndex::parse("(1,1,0,0,1,0,1,0,0,1)")).applicable);
}
