#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "a4cb/checker.hpp"
#include "a4cb/quadform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace a4cb;

namespace {

PBWIndex to_index(const std::vector<int>& pt) {
    if (pt.size() != 10) throw py::value_error("point must have exactly 10 entries");
    PBWIndex a;
    for (int i = 0; i < 10; ++i) {
        if (pt[std::size_t(i)] < 0) throw py::value_error("point entries must be nonnegative");
        a[i] = pt[std::size_t(i)];
    }
    return a;
}

std::vector<int> from_index(const PBWIndex& a) {
    return std::vector<int>(a.a.begin(), a.a.end());
}

const CaseSpec& find_case(const std::string& id) {
    const CaseSpec* c = embedded_case_table().find(id);
    if (!c) throw py::value_error("unknown case id: " + id);
    return *c;
}

py::list expansion_to_list(const PBWVector& pv) {
    py::list out;
    for (const auto& [idx, coeff] : pv.terms())
        out.append(py::make_tuple(from_index(idx), coeff.to_string()));
    return out;
}

py::dict report_to_dict(const VerificationReport& r) {
    py::dict d;
    d["case"] = r.case_id;
    d["point"] = from_index(r.point);
    switch (r.outcome()) {
        case VerificationReport::Outcome::pass: d["outcome"] = "pass"; break;
        case VerificationReport::Outcome::fail: d["outcome"] = "fail"; break;
        case VerificationReport::Outcome::skip: d["outcome"] = "skip"; break;
    }
    d["region_ok"] = r.region_ok;
    d["bar_invariant"] = r.bar_invariant;
    d["term_count"] = r.term_count;
    d["in_lattice"] = r.congruence.in_lattice;
    d["congruent"] = r.congruence.congruent_to_target;
    if (r.skip_reason) d["skip_reason"] = *r.skip_reason;
    if (r.error) d["error"] = *r.error;
    return d;
}

}  // namespace

PYBIND11_MODULE(_a4cb, m) {
    m.doc() = "exact canonical-basis workbench for type A4";

    py::register_exception<parse_error>(m, "ParseError", PyExc_ValueError);
    py::register_exception<table_error>(m, "TableError", PyExc_ValueError);
    py::register_exception<form_error>(m, "FormError", PyExc_ValueError);
    py::register_exception<height_cap_error>(m, "HeightCapError", PyExc_RuntimeError);
    py::register_exception<resource_error>(m, "ResourceError", PyExc_RuntimeError);

    m.def("check_identity_i", &check_identity_i, py::arg("m"), py::arg("k"), py::arg("delta"),
          "exact q-binomial identity of the first kind");
    m.def("check_identity_ii", &check_identity_ii, py::arg("m"), py::arg("k"), py::arg("n"),
          py::arg("delta"), "exact q-binomial identity of the second kind");
    m.def(
        "q_binomial",
        [](long long n, long long k) { return q_binomial(n, k).to_string(); },
        py::arg("n"), py::arg("k"), "balanced Gaussian binomial as a Laurent-polynomial string");

    m.def("height_cap", &height_cap, "current weight-height cap for engine operations");
    m.def("set_height_cap", &set_height_cap, py::arg("cap"));

    m.def(
        "expand_word",
        [](const std::string& text) {
            return expansion_to_list(express_in_pbw(eval_divided_word(DividedWord::parse(text))));
        },
        py::arg("word"),
        "PBW expansion of a divided-power word, as (index, coefficient) pairs");
    m.def(
        "expand_case",
        [](const std::string& id, const std::vector<int>& point) {
            const CaseSpec& c = find_case(id);
            PBWIndex a = to_index(point);
            WordSum acc;
            for (const MonomialTerm& t : instantiate(c, a))
                acc.add_scaled(eval_divided_word(t.word), t.coeff);
            return expansion_to_list(express_in_pbw(acc));
        },
        py::arg("case_id"), py::arg("point"),
        "PBW expansion of a table entry instantiated at a point");

    m.def(
        "locate",
        [](const std::vector<int>& point) { return locate(embedded_case_table(), to_index(point)); },
        py::arg("point"), "ids of all cases whose region contains the point");
    m.def(
        "instantiate",
        [](const std::string& id, const std::vector<int>& point) {
            py::list out;
            for (const MonomialTerm& t : instantiate(find_case(id), to_index(point)))
                out.append(py::make_tuple(t.coeff.to_string(), t.word.to_string()));
            return out;
        },
        py::arg("case_id"), py::arg("point"),
        "instantiated terms of a table entry as (coefficient, word) pairs");
    m.def(
        "case_ids",
        [] {
            std::vector<std::string> ids;
            for (const CaseSpec& c : embedded_case_table().cases) ids.push_back(c.id);
            return ids;
        },
        "ids of the bundled table entries, in table order");
    m.def(
        "case_text", [](const std::string& id) { return find_case(id).to_string(); },
        py::arg("case_id"), "table entry rendered in the case-file grammar");

    m.def(
        "verify",
        [](const std::string& id, const std::vector<int>& point) {
            return report_to_dict(verify_case_at(find_case(id), to_index(point)));
        },
        py::arg("case_id"), py::arg("point"),
        "verify one table entry at one point: region, bar invariance, congruence");
    m.def(
        "verify_case",
        [](const std::string& id, int samples, int max_entry, int max_height) {
            py::list out;
            for (const VerificationReport& r :
                 verify_case(find_case(id), samples, max_entry, max_height))
                out.append(report_to_dict(r));
            return out;
        },
        py::arg("case_id"), py::arg("samples") = 2, py::arg("max_entry") = 3,
        py::arg("max_height") = 12, "verify one table entry at sampled region points");

    m.def(
        "weakly_positive",
        [](const std::string& form, int bound) {
            const FormLibrary& lib = builtin_forms();
            auto it = lib.quadratic.find(form);
            QuadForm q = it != lib.quadratic.end() ? it->second : load_quad_form(form, "custom");
            PositivityVerdict v = weakly_positive(q, bound);
            py::dict d;
            d["form"] = v.form_name;
            d["bound"] = v.search_bound;
            d["weakly_positive"] = v.weakly_positive;
            d["nonnegative"] = v.nonnegative;
            if (v.witness) d["witness"] = *v.witness;
            if (v.negative_witness) d["negative_witness"] = *v.negative_witness;
            d["nodes_visited"] = v.nodes_visited;
            return d;
        },
        py::arg("form"), py::arg("bound"),
        "bounded positivity search; form is a builtin name (QM, QP1, QP2, QP3) or form-file text");

    m.def(
        "coverage",
        [](int max_entry) {
            CoverageStats s = coverage_stats(embedded_case_table(), max_entry);
            py::dict d;
            d["max_entry"] = max_entry;
            d["total"] = s.total;
            d["covered_zero"] = s.covered_zero;
            d["covered_one"] = s.covered_one;
            d["covered_multi"] = s.covered_multi;
            d["strict_overlaps"] = s.strict_overlaps.size();
            if (s.uncovered_example) d["uncovered_example"] = from_index(*s.uncovered_example);
            return d;
        },
        py::arg("max_entry") = 2,
        "region-coverage census of the box {0..max_entry}^10 with a4 = 0");
}
