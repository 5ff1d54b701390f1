#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "a4cb/cases.hpp"
#include "a4cb/engine.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

using namespace a4cb;

namespace {

// sum of instantiated terms as an element of the word algebra
WordSum case_value(const CaseSpec& c, const PBWIndex& a) {
    WordSum acc;
    for (const MonomialTerm& m : instantiate(c, a))
        acc.add_scaled(eval_divided_word(m.word), m.coeff);
    return acc;
}

const char* kMutant33 =
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

TEST_CASE("linear form parse, eval, round trip") {
    LinForm f = LinForm::parse("a5+a6-a8-a9-1");
    PBWIndex a = PBWIndex::parse("(0,0,0,0,2,1,0,1,0,0)");
    CHECK(f.eval(a) == 2 + 1 - 1 - 0 - 1);
    CHECK(LinForm::parse(f.to_string()).to_string() == f.to_string());
    CHECK(LinForm::parse("2*a3+1").eval(a) == 1);
    CHECK(LinForm::parse("0").is_zero());
    CHECK_THROWS_AS(LinForm::parse("a11"), table_error);
    CHECK_THROWS_AS(LinForm::parse("u"), table_error);
    CHECK_THROWS_AS(LinForm::parse("a5 +"), table_error);

    ExponentExpr e = ExponentExpr::parse("a3+a4+u-w");
    CHECK(e.uses_var(0));
    CHECK(e.uses_var(1));
    CHECK(e.eval(a, 2, 1) == 0 + 0 + 2 - 1);
    CHECK(ExponentExpr::parse(e.to_string()).to_string() == e.to_string());
    CHECK_FALSE(ExponentExpr::parse("a1").uses_var(0));
}

TEST_CASE("embedded table census") {
    const CaseTable& t = embedded_case_table();
    CHECK(t.cases.size() == 75);
    CHECK(t.checksum != 0);
    CHECK(t.find("1.1") != nullptr);
    CHECK(t.find("3.3") != nullptr);
    CHECK(t.find("nope") == nullptr);

    int one_var = 0;
    std::vector<std::string> extras;
    std::map<std::string, int> family;
    for (const CaseSpec& c : t.cases) {
        if (c.vars.size() == 1) {
            ++one_var;
            family[c.id.substr(0, c.id.find('.'))]++;
        } else {
            extras.push_back(c.id);
        }
    }
    CHECK(one_var == 72);
    CHECK(extras == std::vector<std::string>{"M1.1", "R2.a", "R2.b"});
    CHECK(t.find("M1.1")->vars.empty());
    CHECK(t.find("R2.a")->vars.size() == 2);
    CHECK(t.find("R2.b")->vars.size() == 2);

    // 13 families with 3 variants, 15 with 2, 3 with 1
    std::map<int, int> hist;
    for (const auto& [name, variants] : family) hist[variants]++;
    CHECK(hist == std::map<int, int>{{1, 3}, {2, 15}, {3, 13}});

    // every case re-parses from its own rendering to the same rendering
    for (const CaseSpec& c : t.cases) {
        CaseTable round = load_cases(c.to_string(), "round");
        REQUIRE(round.cases.size() == 1);
        CHECK(round.cases[0].to_string() == c.to_string());
    }
}

TEST_CASE("case grammar rejects malformed input") {
    CHECK_THROWS_AS(load_cases("", "t"), table_error);
    CHECK_THROWS_AS(load_cases("case a\nend\ncase a\nend\n", "t"), table_error);
    CHECK_THROWS_AS(load_cases("case a\nterm e5^(a1)\nregion a1 >= a2\nend\n", "t"), table_error);
    CHECK_THROWS_AS(load_cases("case a\nterm e1^(a1)\nregion a1 >= u\nend\n", "t"), table_error);
    CHECK_THROWS_AS(load_cases("case a\nterm e1^(a1+w)\nregion a1 >= a2\nend\n", "t"), table_error);
    CHECK_THROWS_AS(load_cases("case a\nterm e1^(a1)\n", "t"), table_error);
    CHECK_THROWS_AS(load_cases("var u <= a1\n", "t"), table_error);
    CHECK_THROWS_AS(load_cases("case a\nbogus x\nend\n", "t"), table_error);
    // comments and blank lines are fine
    CaseTable t = load_cases("# header\n\ncase a # trail\nterm e1^(a1)\nregion a1 >= a10\nend\n", "t");
    CHECK(t.cases.size() == 1);
}

TEST_CASE("region membership and locate") {
    const CaseTable& t = embedded_case_table();
    PBWIndex p = PBWIndex::parse("(1,1,0,0,1,0,1,0,1,1)");
    CHECK(locate(t, p) == std::vector<std::string>{"1.1", "1.2", "1.3", "20.1", "M1.1"});
    for (const std::string& id : locate(t, p)) CHECK(region_contains(t.find(id)->region, p));

    // zero point lies in every region: all inequalities are homogeneous
    PBWIndex zero;
    CHECK(locate(t, zero).size() == t.cases.size());

    const Region& r = t.find("1.1")->region;
    CHECK(r.strict_count(zero) == 0);
    CHECK(r.strict_count(p) >= 1);
}

TEST_CASE("instantiate frozen fixture and error paths") {
    const CaseTable& t = embedded_case_table();
    const CaseSpec* c = t.find("1.1");
    REQUIRE(c != nullptr);
    PBWIndex a = PBWIndex::parse("(1,1,0,0,1,0,1,0,0,1)");
    std::vector<MonomialTerm> terms = instantiate(*c, a);
    REQUIRE(terms.size() == 2);
    CHECK(terms[0].coeff == LaurentPoly::one());
    CHECK(terms[0].word.to_string() == "e3 e4^(2) e3 e1^(2) e2 e3");
    CHECK(terms[1].coeff == LaurentPoly::parse("-1"));
    CHECK(terms[1].word.to_string() == "e3 e4^(2) e3^(2) e1^(2) e2");
    for (const MonomialTerm& m : terms) CHECK(m.word.weight() == weight_of(a));

    // outside the region
    PBWIndex b = PBWIndex::parse("(0,0,0,0,0,0,0,1,0,0)");
    CHECK_FALSE(region_contains(c->region, b));
    CHECK_THROWS_AS(instantiate(*c, b), table_error);
}

TEST_CASE("sampler invariants") {
    const CaseTable& t = embedded_case_table();
    const Region& r = t.find("2.1")->region;
    std::vector<PBWIndex> pts = sample_points(r, 2, 12, 7);
    CHECK(!pts.empty());
    CHECK(pts.size() <= 7);
    std::set<PBWIndex> seen;
    for (const PBWIndex& p : pts) {
        CHECK(region_contains(r, p));
        CHECK(p.height() <= 12);
        for (int i = 0; i < 10; ++i) {
            CHECK(p[i] >= 0);
            CHECK(p[i] <= 2);
        }
        CHECK(seen.insert(p).second);
    }
    // deterministic
    CHECK(sample_points(r, 2, 12, 7) == pts);
    // per-coordinate caps are honored
    std::array<int, 10> caps{2, 2, 2, 0, 2, 2, 2, 2, 2, 2};
    for (const PBWIndex& p : sample_points(r, 2, 12, 7, &caps)) CHECK(p[3] == 0);
}

TEST_CASE("two-variable sum is invariant under renaming the bound variables") {
    const CaseTable& t = embedded_case_table();
    const CaseSpec* c = t.find("R2.a");
    REQUIRE(c != nullptr);
    PBWIndex a = PBWIndex::parse("(1,1,1,0,2,0,0,0,0,0)");
    REQUIRE(instantiate(*c, a).size() == 3);

    // swap the roles of u and w everywhere they are referenced
    CaseSpec renamed = *c;
    std::swap(renamed.vars[0], renamed.vars[1]);
    renamed.vars[0].name = "u";
    renamed.vars[1].name = "w";
    std::swap(renamed.factors[0], renamed.factors[1]);
    renamed.factors[0].var = "u";
    renamed.factors[1].var = "w";
    for (PatternFactor& pf : renamed.pattern) std::swap(pf.exp.var_coeff[0], pf.exp.var_coeff[1]);
    CHECK(case_value(renamed, a) == case_value(*c, a));
}

TEST_CASE("diagram symmetry is an involution on case data") {
    const CaseTable& t = embedded_case_table();
    // letters 1..4 reverse; interval slots map accordingly
    std::array<int, 10> perm{9, 8, 6, 3, 7, 5, 2, 4, 1, 0};
    std::array<int, 4> gmap{4, 3, 2, 1};
    for (const char* id : {"1.1", "3.3", "M1.1", "R2.a"}) {
        const CaseSpec* c = t.find(id);
        REQUIRE(c != nullptr);
        CaseSpec once = apply_symmetry(*c, perm, gmap);
        CHECK(once.id == c->id + "*");
        CaseSpec twice = apply_symmetry(once, perm, gmap);
        std::string expect = c->to_string();
        expect.replace(expect.find(c->id), c->id.size(), c->id + "**");
        CHECK(twice.to_string() == expect);
    }
    std::array<int, 10> bad_perm{0, 0, 2, 3, 4, 5, 6, 7, 8, 9};
    CHECK_THROWS_AS(apply_symmetry(*t.find("1.1"), bad_perm, gmap), table_error);
}

TEST_CASE("chamber coverage census") {
    const CaseTable& t = embedded_case_table();
    CoverageStats s = coverage_stats(t, 2);
    CHECK(s.total == 19683);
    CHECK(s.covered_zero == 10777);
    CHECK(s.covered_one == 2449);
    CHECK(s.covered_multi == 6457);
    CHECK(s.covered_zero + s.covered_one + s.covered_multi == s.total);
    CHECK(s.strict_overlaps.empty());
    REQUIRE(s.uncovered_example.has_value());
    CHECK(*s.uncovered_example == PBWIndex::parse("(0,0,0,0,0,0,1,1,0,1)"));

    CoverageStats s1 = coverage_stats(t, 1);
    CHECK(s1.total == 512);
    CHECK(s1.covered_zero == 179);
    CHECK(s1.covered_one == 45);
    CHECK(s1.covered_multi == 288);
    CHECK(s1.strict_overlaps.empty());
}

TEST_CASE("reversed region chain admits a non-canonical point") {
    // the shipped chain for 3.3 runs a5 >= a1 >= a8 >= a10; reversing it
    // admits (0,0,0,0,0,1,0,1,0,0), whose instantiated word collapses to
    // e2 e3 e2 and is not congruent to a single basis monomial
    const CaseTable& t = embedded_case_table();
    const CaseSpec* shipped = t.find("3.3");
    CaseTable mt = load_cases(kMutant33, "mutant");
    const CaseSpec& mutant = mt.cases[0];

    PBWIndex w = PBWIndex::parse("(0,0,0,0,0,1,0,1,0,0)");
    CHECK_FALSE(region_contains(shipped->region, w));
    CHECK(region_contains(mutant.region, w));

    std::vector<MonomialTerm> terms = instantiate(mutant, w);
    REQUIRE(terms.size() == 1);
    CHECK(terms[0].word.to_string() == "e2 e3 e2");

    // same bracket data, so the two specs agree on shared region points
    PBWIndex p = PBWIndex::parse("(0,0,0,0,0,0,0,0,0,0)");
    CHECK(region_contains(shipped->region, p));
    CHECK(region_contains(mutant.region, p));
}
