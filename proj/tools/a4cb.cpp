#include "a4cb/checker.hpp"
#include "a4cb/quadform.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;      // verification / positivity failure
constexpr int kExitUsage = 2;     // bad flags, unknown names, malformed input
constexpr int kExitResource = 3;  // height cap or expansion budget

using nlohmann::ordered_json;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --cases PATH overrides the embedded table
a4cb::CaseTable load_table(const std::string& cases_path) {
    if (cases_path.empty()) return a4cb::embedded_case_table();
    return a4cb::load_cases(slurp(cases_path), cases_path);
}

a4cb::PBWIndex parse_point(const std::string& text) {
    try {
        return a4cb::PBWIndex::parse(text);
    } catch (const a4cb::parse_error& e) {
        throw usage_error(std::string("bad --point: ") + e.what());
    }
}

bool json_mode(const std::string& format) {
    if (format == "text") return false;
    if (format == "json") return true;
    throw usage_error("unknown --format (expected text or json): " + format);
}

int cmd_identities(const std::string& kind, int m_max, int n_max, int delta_max, const std::string& format) {
    const bool js = json_mode(format);
    if (kind != "i" && kind != "ii") throw usage_error("unknown --kind (expected i or ii): " + kind);
    const bool second = kind == "ii";
    if (m_max < 0) m_max = second ? 6 : 8;
    if (delta_max < 0) delta_max = second ? 4 : 5;
    if (n_max < 0) n_max = 4;

    long long checked = 0;
    std::vector<std::array<long long, 4>> failures;
    for (long long m = 0; m <= m_max; ++m) {
        for (long long k = 0; k <= m; ++k) {
            for (long long d = 0; d <= delta_max; ++d) {
                if (second) {
                    for (long long n = 0; n <= n_max; ++n) {
                        ++checked;
                        if (!a4cb::check_identity_ii(m, k, n, d)) failures.push_back({m, k, n, d});
                    }
                } else {
                    ++checked;
                    if (!a4cb::check_identity_i(m, k, d)) failures.push_back({m, k, -1, d});
                }
            }
        }
    }
    if (js) {
        ordered_json out;
        out["kind"] = kind;
        out["checked"] = checked;
        out["failures"] = ordered_json::array();
        for (const auto& f : failures) {
            ordered_json rec;
            rec["m"] = f[0];
            rec["k"] = f[1];
            if (second) rec["n"] = f[2];
            rec["delta"] = f[3];
            out["failures"].push_back(rec);
        }
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "identity " << kind << ": checked " << checked << " instances, " << failures.size()
                  << " failures\n";
        for (const auto& f : failures) {
            std::cout << "  FAIL m=" << f[0] << " k=" << f[1];
            if (second) std::cout << " n=" << f[2];
            std::cout << " delta=" << f[3] << "\n";
        }
    }
    return failures.empty() ? kExitOk : kExitFail;
}

int cmd_verify(const std::string& cases_path, bool all, const std::string& case_id, const std::string& point,
               int samples, int max_entry, int max_height, int jobs, const std::string& format) {
    const bool js = json_mode(format);
    const a4cb::CaseTable table = load_table(cases_path);
    if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    if (all) {
        a4cb::BatchSummary s = a4cb::verify_all(table, samples, max_entry, max_height, jobs);
        if (js) {
            ordered_json out;
            out["cases"] = s.cases.size();
            out["pass"] = s.total_pass;
            out["fail"] = s.total_fail;
            out["skip"] = s.total_skip;
            out["reports"] = ordered_json::array();
            for (const a4cb::VerificationReport& r : s.reports) out["reports"].push_back(ordered_json::parse(r.to_json()));
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << s.to_text();
        }
        return s.all_passed() ? kExitOk : kExitFail;
    }

    if (case_id.empty()) throw usage_error("verify needs --all or --case <id>");
    const a4cb::CaseSpec* c = table.find(case_id);
    if (c == nullptr) throw usage_error("unknown case id: " + case_id);

    std::vector<a4cb::VerificationReport> reports;
    if (!point.empty()) {
        reports.push_back(a4cb::verify_case_at(*c, parse_point(point)));
    } else {
        reports = a4cb::verify_case(*c, samples, max_entry, max_height);
    }
    bool failed = false;
    ordered_json arr = ordered_json::array();
    for (const a4cb::VerificationReport& r : reports) {
        if (r.outcome() == a4cb::VerificationReport::Outcome::fail) failed = true;
        if (js) {
            arr.push_back(ordered_json::parse(r.to_json()));
        } else {
            std::cout << r.to_text() << "\n";
        }
    }
    if (js) std::cout << arr.dump(2) << "\n";
    return failed ? kExitFail : kExitOk;
}

int cmd_locate(const std::string& cases_path, const std::string& point, const std::string& format) {
    const bool js = json_mode(format);
    const a4cb::CaseTable table = load_table(cases_path);
    const a4cb::PBWIndex a = parse_point(point);
    const std::vector<std::string> ids = a4cb::locate(table, a);
    if (js) {
        ordered_json out;
        out["point"] = std::vector<int>(a.a.begin(), a.a.end());
        out["cases"] = ids;
        std::cout << out.dump(2) << "\n";
    } else {
        for (const std::string& id : ids) std::cout << id << "\n";
        if (ids.empty()) std::cout << "(no region contains " << a.to_string() << ")\n";
    }
    return kExitOk;
}

int cmd_expand(const std::string& cases_path, const std::string& word, const std::string& case_id,
               const std::string& point, const std::string& format) {
    const bool js = json_mode(format);
    if (word.empty() == (case_id.empty() && point.empty()))
        throw usage_error("expand needs either --word or --case with --point");

    a4cb::WordSum sum;
    if (!word.empty()) {
        sum = a4cb::eval_divided_word(a4cb::DividedWord::parse(word));
    } else {
        if (case_id.empty() || point.empty()) throw usage_error("expand needs both --case and --point");
        const a4cb::CaseTable table = load_table(cases_path);
        const a4cb::CaseSpec* c = table.find(case_id);
        if (c == nullptr) throw usage_error("unknown case id: " + case_id);
        const a4cb::PBWIndex a = parse_point(point);
        for (const a4cb::MonomialTerm& t : a4cb::instantiate(*c, a)) {
            sum.add_scaled(a4cb::eval_divided_word(t.word), t.coeff);
        }
    }
    const a4cb::PBWVector pv = a4cb::express_in_pbw(sum);
    if (js) {
        ordered_json arr = ordered_json::array();
        for (const auto& [idx, coeff] : pv.terms()) {
            ordered_json rec;
            rec["index"] = std::vector<int>(idx.a.begin(), idx.a.end());
            rec["coeff"] = coeff.to_string();
            arr.push_back(rec);
        }
        std::cout << arr.dump(2) << "\n";
    } else {
        for (const auto& [idx, coeff] : pv.terms()) {
            std::cout << "E^" << idx.to_string() << ": " << coeff.to_string() << "\n";
        }
        if (pv.terms().empty()) std::cout << "0\n";
    }
    return kExitOk;
}

int cmd_quadform(const std::string& cases_path, const std::string& builtin, const std::string& file, int bound,
                 const std::string& region_case, int max_entry, const std::string& format) {
    const bool js = json_mode(format);
    if (builtin.empty() == file.empty()) throw usage_error("quadform needs exactly one of --builtin or --file");

    const a4cb::FormLibrary& lib = a4cb::builtin_forms();
    if (!builtin.empty() && lib.linear.count(builtin)) {
        const a4cb::ParamLinearForm& L = lib.linear.at(builtin);
        if (region_case.empty()) {
            std::cout << L.to_string();
            return kExitOk;
        }
        const a4cb::CaseTable table = load_table(cases_path);
        const a4cb::CaseSpec* c = table.find(region_case);
        if (c == nullptr) throw usage_error("unknown case id: " + region_case);
        a4cb::LNonnegReport rep = a4cb::region_implies_L_nonneg(L, c->region, max_entry);
        if (js) {
            ordered_json out;
            out["form"] = rep.form_name;
            out["region"] = region_case;
            out["holds"] = rep.holds;
            out["points_checked"] = rep.points_checked;
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << rep.to_string() << "\n";
        }
        return rep.holds ? kExitOk : kExitFail;
    }

    a4cb::QuadForm q;
    if (!builtin.empty()) {
        auto it = lib.quadratic.find(builtin);
        if (it == lib.quadratic.end()) throw usage_error("unknown builtin form: " + builtin);
        q = it->second;
    } else {
        q = a4cb::load_quad_form(slurp(file), file);
    }
    const a4cb::PositivityVerdict v = a4cb::weakly_positive(q, bound);
    if (js) {
        ordered_json out;
        out["form"] = v.form_name;
        out["bound"] = v.search_bound;
        out["weakly_positive"] = v.weakly_positive;
        out["nonnegative"] = v.nonnegative;
        if (v.witness) out["witness"] = *v.witness;
        if (v.negative_witness) out["negative_witness"] = *v.negative_witness;
        out["nodes_visited"] = v.nodes_visited;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << v.to_string() << "\n";
    }
    return v.weakly_positive ? kExitOk : kExitFail;
}

int cmd_coverage(const std::string& cases_path, int max_entry, const std::string& format) {
    const bool js = json_mode(format);
    const a4cb::CaseTable table = load_table(cases_path);
    const a4cb::CoverageStats s = a4cb::coverage_stats(table, max_entry);
    if (js) {
        ordered_json out;
        out["max_entry"] = max_entry;
        out["total"] = s.total;
        out["covered_zero"] = s.covered_zero;
        out["covered_one"] = s.covered_one;
        out["covered_multi"] = s.covered_multi;
        out["strict_overlaps"] = ordered_json::array();
        for (const auto& o : s.strict_overlaps) {
            ordered_json rec;
            rec["first"] = o.first;
            rec["second"] = o.second;
            rec["point"] = std::vector<int>(o.point.a.begin(), o.point.a.end());
            out["strict_overlaps"].push_back(rec);
        }
        if (s.uncovered_example) out["uncovered_example"] = std::vector<int>(s.uncovered_example->a.begin(), s.uncovered_example->a.end());
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "box {0.." << max_entry << "}^10 with a4=0: total=" << s.total << " covered_zero=" << s.covered_zero
                  << " covered_one=" << s.covered_one << " covered_multi=" << s.covered_multi << "\n";
        std::cout << "strict overlaps: " << s.strict_overlaps.size() << "\n";
        for (const auto& o : s.strict_overlaps) {
            std::cout << "  " << o.first << " & " << o.second << " @ " << o.point.to_string() << "\n";
        }
        if (s.uncovered_example) std::cout << "uncovered example: " << s.uncovered_example->to_string() << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact canonical-basis workbench for type A4"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string format = "text";
    app.add_option("--format", format, "output format: text or json")->capture_default_str();

    std::string id_kind;
    int id_m_max = -1, id_n_max = -1, id_delta_max = -1;
    CLI::App* identities = app.add_subcommand("identities", "check the q-binomial identity suite on a grid");
    identities->add_option("--kind", id_kind, "identity to check: i or ii")->required();
    identities->add_option("--m-max", id_m_max, "grid bound for m (default 8 for i, 6 for ii)");
    identities->add_option("--n-max", id_n_max, "grid bound for n, identity ii only (default 4)");
    identities->add_option("--delta-max", id_delta_max, "grid bound for delta (default 5 for i, 4 for ii)");

    std::string cases_path, case_id, point;
    bool all = false;
    int samples = 2, max_entry = 3, max_height = 12, jobs = 0;
    CLI::App* verify = app.add_subcommand("verify", "verify canonical-basis claims at sampled or given points");
    verify->add_option("--cases", cases_path, "case file (default: bundled table)");
    verify->add_flag("--all", all, "verify every case in the table");
    verify->add_option("--case", case_id, "single case id");
    verify->add_option("--point", point, "point a1,...,a10 (with --case)");
    verify->add_option("--samples", samples, "points sampled per case")->capture_default_str();
    verify->add_option("--max-entry", max_entry, "sampling box bound per coordinate")->capture_default_str();
    verify->add_option("--max-height", max_height, "sampling height bound")->capture_default_str();
    verify->add_option("--jobs", jobs, "worker threads (default: available parallelism)");

    std::string loc_cases, loc_point;
    CLI::App* locate = app.add_subcommand("locate", "list cases whose region contains a point");
    locate->add_option("--cases", loc_cases, "case file (default: bundled table)");
    locate->add_option("--point", loc_point, "point a1,...,a10")->required();

    std::string ex_cases, ex_word, ex_case, ex_point;
    CLI::App* expand = app.add_subcommand("expand", "expand a divided word or an instantiated case in the PBW basis");
    expand->add_option("--cases", ex_cases, "case file (default: bundled table)");
    expand->add_option("--word", ex_word, "divided word, e.g. \"e2 e3^(2) e1\"");
    expand->add_option("--case", ex_case, "case id (with --point)");
    expand->add_option("--point", ex_point, "point a1,...,a10 (with --case)");

    std::string qf_cases, qf_builtin, qf_file, qf_region;
    int qf_bound = 6, qf_max_entry = 2;
    CLI::App* quadform = app.add_subcommand("quadform", "weak-positivity search or region nonnegativity for a form");
    quadform->add_option("--cases", qf_cases, "case file for --region (default: bundled table)");
    quadform->add_option("--builtin", qf_builtin, "builtin form name: QM QP1 QP2 QP3 LM LP1 LP2 LP3");
    quadform->add_option("--file", qf_file, "custom quadratic form file (n=<arity>, q i j c lines)");
    quadform->add_option("--bound", qf_bound, "per-coordinate search bound")->capture_default_str();
    quadform->add_option("--region", qf_region, "case id whose region gates a linear form's coefficients");
    quadform->add_option("--max-entry", qf_max_entry, "box bound for --region checks")->capture_default_str();

    std::string cov_cases;
    int cov_max_entry = 2;
    CLI::App* coverage = app.add_subcommand("coverage", "region coverage census over a coordinate box");
    coverage->add_option("--cases", cov_cases, "case file (default: bundled table)");
    coverage->add_option("--max-entry", cov_max_entry, "box bound per coordinate")->capture_default_str();

    try {
        app.parse(argc, argv);
        if (identities->parsed()) return cmd_identities(id_kind, id_m_max, id_n_max, id_delta_max, format);
        if (verify->parsed())
            return cmd_verify(cases_path, all, case_id, point, samples, max_entry, max_height, jobs, format);
        if (locate->parsed()) return cmd_locate(loc_cases, loc_point, format);
        if (expand->parsed()) return cmd_expand(ex_cases, ex_word, ex_case, ex_point, format);
        if (quadform->parsed())
            return cmd_quadform(qf_cases, qf_builtin, qf_file, qf_bound, qf_region, qf_max_entry, format);
        if (coverage->parsed()) return cmd_coverage(cov_cases, cov_max_entry, format);
        std::cerr << "no subcommand\n";
        return kExitUsage;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const a4cb::height_cap_error& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return kExitResource;
    } catch (const a4cb::resource_error& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return kExitResource;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const a4cb::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const a4cb::table_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const a4cb::form_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
