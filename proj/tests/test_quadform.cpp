#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "a4cb/quadform.hpp"

#include <string>
#include <vector>

using namespace a4cb;

TEST_CASE("quadratic form storage and eval") {
    QuadForm q = QuadForm::unit("t", 3);
    CHECK(q.is_unit());
    CHECK(q.coeff(0, 0) == 1);
    CHECK(q.coeff(0, 2) == 0);
    q.set_coeff(0, 2, -1);
    CHECK(q.coeff(2, 0) == -1);
    CHECK(q.eval({1, 0, 1}) == 1);       // 1 + 1 - 1
    CHECK(q.eval({2, 1, 2}) == 5);       // 4 + 1 + 4 - 4
    q.set_coeff(1, 1, 2);
    CHECK_FALSE(q.is_unit());
    CHECK(q.eval({0, 1, 0}) == 2);
    CHECK_THROWS_AS(q.eval({1, 2}), form_error);
    CHECK_THROWS_AS(q.coeff(0, 3), form_error);

    QuadForm p = QuadForm::unit("p", 2);
    p.add_product({1, -1}, {1, 1}, 2);  // 2*(x1-x2)*(x1+x2) = 2x1^2 - 2x2^2
    CHECK(p.eval({1, 0}) == 3);
    CHECK(p.eval({0, 1}) == -1);
    CHECK_THROWS_AS(p.add_product({1}, {1, 1}, 1), form_error);
}

TEST_CASE("form file parsing and round trip") {
    QuadForm q = load_quad_form("n=2\nq 1 2 -3\n", "m");
    CHECK(q.n == 2);
    CHECK(q.coeff(0, 0) == 1);
    CHECK(q.coeff(0, 1) == -3);
    CHECK(load_quad_form(q.to_string(), "m").to_string() == q.to_string());

    // diagonal override and comments
    QuadForm d = load_quad_form("# c\nn=3\nq 2 2 5 # inline\nq 1 3 -1\n", "d");
    CHECK(d.coeff(1, 1) == 5);
    CHECK(d.coeff(0, 0) == 1);
    CHECK(d.coeff(0, 2) == -1);

    CHECK_THROWS_AS(load_quad_form("", "t"), form_error);
    CHECK_THROWS_AS(load_quad_form("n=0\n", "t"), form_error);
    CHECK_THROWS_AS(load_quad_form("q 1 2 3\n", "t"), form_error);
    CHECK_THROWS_AS(load_quad_form("n=2\nq 1 3 1\n", "t"), form_error);
    CHECK_THROWS_AS(load_quad_form("n=2\nq 1 2 1\nq 2 1 4\n", "t"), form_error);
    CHECK_THROWS_AS(load_quad_form("n=2\nnoise\n", "t"), form_error);
}

TEST_CASE("builtin library layout") {
    const FormLibrary& lib = builtin_forms();
    CHECK(lib.linear.size() == 4);
    CHECK(lib.quadratic.size() == 4);
    for (const char* name : {"LM", "LP1", "LP2", "LP3"}) CHECK(lib.linear.count(name) == 1);
    for (const char* name : {"QM", "QP1", "QP2", "QP3"}) CHECK(lib.quadratic.count(name) == 1);

    CHECK(lib.quadratic.at("QM").n == 10);
    CHECK(lib.quadratic.at("QP3").n == 11);
    CHECK(lib.linear.at("LP3").arity == 11);
    for (const auto& [name, L] : lib.linear) {
        CHECK(L.atoms.size() == L.coeffs.size());
        CHECK(L.atom_names.size() == L.atoms.size());
        for (const auto& atom : L.atoms) CHECK(static_cast<int>(atom.size()) == L.arity);
    }

    // the two printed variants coincide with the main form coefficientwise
    const QuadForm& qm = lib.quadratic.at("QM");
    for (const char* name : {"QP1", "QP2"}) {
        const QuadForm& qp = lib.quadratic.at(name);
        CHECK(qp.n == qm.n);
        CHECK(qp.diag == qm.diag);
        CHECK(qp.off == qm.off);
    }
}

TEST_CASE("main form is weakly positive on the search box") {
    const FormLibrary& lib = builtin_forms();
    PositivityVerdict v = weakly_positive(lib.quadratic.at("QM"), 6);
    CHECK(v.weakly_positive);
    CHECK(v.nonnegative);
    CHECK_FALSE(v.witness.has_value());
    CHECK(v.nodes_visited == 40384);

    // identical verdicts for the coinciding variants
    for (const char* name : {"QP1", "QP2"}) {
        PositivityVerdict w = weakly_positive(lib.quadratic.at(name), 6);
        CHECK(w.weakly_positive == v.weakly_positive);
        CHECK(w.nonnegative == v.nonnegative);
        CHECK(w.nodes_visited == v.nodes_visited);
    }

    CHECK_THROWS_AS(weakly_positive(lib.quadratic.at("QM"), 0), form_error);
    CHECK_THROWS_AS(weakly_positive(lib.quadratic.at("QM"), 10001), form_error);
}

TEST_CASE("corrected form vanishes off the diagonal subcone") {
    const FormLibrary& lib = builtin_forms();
    PositivityVerdict v = weakly_positive(lib.quadratic.at("QP3"), 4);
    CHECK_FALSE(v.weakly_positive);
    CHECK(v.nonnegative);
    REQUIRE(v.witness.has_value());
    CHECK(*v.witness == std::vector<int>{0, 1, 0, 0, 0, 1, 1, 0, 0, 0, 0});
    CHECK(v.witness_value == 0);
    CHECK_FALSE(v.negative_witness.has_value());
}

TEST_CASE("corrected form dominates the main form where both groups are nonnegative") {
    // QP3(x, w) - QM(x) = 2*(x4 - x3 - x6 - w)*(x7 - w); on the subcone where
    // both factors are >= 0 the correction only adds
    const FormLibrary& lib = builtin_forms();
    const QuadForm& qm = lib.quadratic.at("QM");
    const QuadForm& qp3 = lib.quadratic.at("QP3");
    long long subcone = 0;
    std::vector<int> x(11, 0);
    for (;;) {
        std::vector<int> head(x.begin(), x.begin() + 10);
        long long g1 = x[3] - x[2] - x[5] - x[10];
        long long g2 = x[6] - x[10];
        long long diff = qp3.eval(x) - qm.eval(head);
        CHECK(diff == 2 * g1 * g2);
        if (g1 >= 0 && g2 >= 0) {
            ++subcone;
            CHECK(diff >= 0);
        }
        int i = 10;
        while (i >= 0 && x[i] == 2) x[i--] = 0;
        if (i < 0) break;
        ++x[i];
    }
    CHECK(subcone == 28431);
}

TEST_CASE("mutants lose positivity with concrete witnesses") {
    // a file mutant: unit diagonal with cross term -3
    QuadForm m = load_quad_form("n=2\nq 1 2 -3\n", "m");
    PositivityVerdict v = weakly_positive(m, 1);
    CHECK_FALSE(v.weakly_positive);
    CHECK_FALSE(v.nonnegative);
    REQUIRE(v.witness.has_value());
    CHECK(*v.witness == std::vector<int>{1, 1});
    CHECK(v.witness_value == -1);

    // the same cross term planted into the main form
    QuadForm qm = builtin_forms().quadratic.at("QM");
    qm.set_coeff(0, 1, -3);
    PositivityVerdict w = weakly_positive(qm, 2);
    CHECK_FALSE(w.weakly_positive);
    CHECK_FALSE(w.nonnegative);
    REQUIRE(w.negative_witness.has_value());
    CHECK(*w.negative_witness == std::vector<int>{1, 1, 0, 0, 0, 0, 0, 0, 0, 0});
    CHECK(w.negative_value == -1);
}

TEST_CASE("parametrized linear forms evaluate through their atoms") {
    const FormLibrary& lib = builtin_forms();
    const ParamLinearForm& L = lib.linear.at("LP1");
    PBWIndex a = PBWIndex::parse("(1,1,0,0,1,0,1,0,1,1)");
    std::vector<long long> c = L.materialize(a);
    REQUIRE(static_cast<int>(c.size()) == static_cast<int>(L.atoms.size()));
    std::vector<int> x(static_cast<std::size_t>(L.arity), 1);
    long long direct = L.eval(a, x);
    long long from_atoms = 0;
    for (std::size_t j = 0; j < L.atoms.size(); ++j) {
        long long dot = 0;
        for (int i = 0; i < L.arity; ++i) dot += L.atoms[j][std::size_t(i)] * x[std::size_t(i)];
        from_atoms += c[j] * dot;
    }
    CHECK(direct == from_atoms);
    CHECK_THROWS_AS(L.eval(a, std::vector<int>{1, 2}), form_error);
}

TEST_CASE("region scans certify coefficient nonnegativity") {
    const FormLibrary& lib = builtin_forms();
    const CaseTable& t = embedded_case_table();
    struct Pair {
        const char* form;
        const char* case_id;
        long long points;
    };
    for (Pair p : {Pair{"LM", "M1.1", 2004}, Pair{"LP1", "1.1", 1959}, Pair{"LP2", "1.2", 2307},
                   Pair{"LP3", "1.3", 2112}}) {
        LNonnegReport rep =
            region_implies_L_nonneg(lib.linear.at(p.form), t.find(p.case_id)->region, 2);
        CHECK(rep.holds);
        CHECK(rep.points_checked == p.points);
        CHECK(rep.counterexamples.empty());
    }

    // an empty region certifies nothing and scans nothing
    LNonnegReport vac = region_implies_L_nonneg(lib.linear.at("LP1"), Region{}, 2);
    CHECK(vac.holds);
    CHECK(vac.points_checked == 0);

    // failing scan carries a counterexample
    ParamLinearForm bad;
    bad.name = "bad";
    bad.arity = 1;
    bad.atom_names = {"x1"};
    bad.atoms = {{1}};
    bad.coeffs = {LinForm::parse("a1-a2")};
    Region r;
    r.ineqs.push_back(Inequality{LinForm::parse("a2"), LinForm::parse("a1")});
    LNonnegReport rep = region_implies_L_nonneg(bad, r, 1);
    CHECK_FALSE(rep.holds);
    REQUIRE(!rep.counterexamples.empty());
    CHECK(rep.counterexamples[0].atom == "x1");
    CHECK(rep.counterexamples[0].value < 0);
}
