#include <a4cb/checker.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <thread>

#include <json.hpp>

namespace a4cb {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

WordSum expand_terms(const std::vector<MonomialTerm>& terms, const Convention& conv) {
    WordSum sum;
    for (const MonomialTerm& t : terms) sum.add_scaled(eval_divided_word(t.word, conv), t.coeff);
    return sum;
}

// quantum Serre relations on plain generators:
//   adjacent pair:  E_i^2 E_j - [2] E_i E_j E_i + E_j E_i^2 = 0
//   distant pair:   E_i E_j = E_j E_i
bool serre_holds(const Convention& conv) {
    const LaurentPoly two = q_int(2);
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j) {
            if (i == j) continue;
            WordSum ei = generator_power(i, 1, conv);
            WordSum ej = generator_power(j, 1, conv);
            if (std::abs(i - j) == 1) {
                WordSum iij = shuffle_mul(shuffle_mul(ei, ei, conv), ej, conv);
                WordSum iji = shuffle_mul(shuffle_mul(ei, ej, conv), ei, conv);
                WordSum jii = shuffle_mul(ej, shuffle_mul(ei, ei, conv), conv);
                iij.add_scaled(iji, -two);
                iij.add_scaled(jii, LaurentPoly::one());
                if (!iij.is_zero()) return false;
            } else {
                WordSum ij = shuffle_mul(ei, ej, conv);
                WordSum ji = shuffle_mul(ej, ei, conv);
                if (!(ij == ji)) return false;
            }
        }
    return true;
}

// sample points of the monomial case used to discriminate conventions
const std::vector<PBWIndex>& pinning_points(const CaseSpec& m11) {
    static const std::vector<PBWIndex> pts =
        sample_points(m11.region, 1, 6, 3);
    return pts;
}

bool monomial_samples_hold(const CaseSpec& m11, const Convention& conv) {
    try {
        for (const PBWIndex& a : pinning_points(m11)) {
            WordSum sum = expand_terms(instantiate(m11, a), conv);
            CongruenceReport rep = lattice_verdict(express_in_pbw(sum, conv), a);
            if (!rep.congruent_to_target) return false;
        }
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

// Behavioral fingerprint of a surviving convention at the observable
// interface: PBW coordinates of a battery of divided words, plus of the
// monomial-case instances at the pinning points.  Raw word sums are NOT
// compared: the twist sign relabels the internal word pairing without
// changing any expansion the workbench can print.
std::string behavior_signature(const CaseSpec& m11, const Convention& conv) {
    static const char* kWords[] = {
        "e1^(2) e2 e3 e4",
        "e4 e3 e2 e1",
        "e2^(2) e3^(2) e2 e1",
        "e2 e3 e4 e2 e3 e2",
    };
    std::string sig;
    for (const char* text : kWords) {
        DividedWord w = DividedWord::parse(text);
        sig += express_in_pbw(eval_divided_word(w, conv), conv).to_string();
        sig += '\n';
    }
    for (const PBWIndex& a : pinning_points(m11)) {
        sig += express_in_pbw(expand_terms(instantiate(m11, a), conv), conv).to_string();
        sig += '\n';
    }
    return sig;
}

PinningRecord run_pinning() {
    const CaseTable& table = embedded_case_table();
    const CaseSpec* m11 = table.find("M1.1");
    if (!m11) throw checker_error("pin_conventions: monomial case M1.1 missing from table");

    PinningRecord rec;
    for (int twist : {+1, -1})
        for (int ce : {-1, +1})
            for (bool swap_ : {false, true})
                for (bool left : {false, true}) {
                    PinningRecord::Probe p;
                    p.conv = Convention{twist, ce, swap_, left};
                    p.serre_ok = serre_holds(p.conv);
                    p.samples_ok = p.serre_ok && monomial_samples_hold(*m11, p.conv);
                    rec.probes.push_back(p);
                }

    std::vector<std::string> signatures;
    for (PinningRecord::Probe& p : rec.probes) {
        if (!p.accepted()) continue;
        ++rec.accepted_count;
        std::string sig = behavior_signature(*m11, p.conv);
        auto it = std::find(signatures.begin(), signatures.end(), sig);
        if (it == signatures.end()) {
            signatures.push_back(std::move(sig));
            p.cls = int(signatures.size()) - 1;
        } else {
            p.cls = int(it - signatures.begin());
        }
    }
    rec.class_count = int(signatures.size());

    if (rec.accepted_count == 0)
        throw checker_error("pin_conventions: no convention combination passes the probes");
    if (rec.class_count != 1)
        throw checker_error("pin_conventions: ambiguous — " + std::to_string(rec.class_count) +
                            " behaviorally distinct classes survive:\n" + rec.to_text());
    bool pinned_accepted = false;
    for (const PinningRecord::Probe& p : rec.probes)
        if (p.accepted() && p.conv == Convention::pinned()) pinned_accepted = true;
    if (!pinned_accepted)
        throw checker_error("pin_conventions: the shipped convention is not in the surviving class:\n" +
                            rec.to_text());
    rec.representative = Convention::pinned();
    return rec;
}

nlohmann::ordered_json report_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["case"] = r.case_id;
    j["point"] = r.point.a;
    switch (r.outcome()) {
        case VerificationReport::Outcome::pass: j["outcome"] = "pass"; break;
        case VerificationReport::Outcome::fail: j["outcome"] = "fail"; break;
        case VerificationReport::Outcome::skip: j["outcome"] = "skip"; break;
    }
    j["region_ok"] = r.region_ok;
    j["bar_invariant"] = r.bar_invariant;
    j["term_count"] = r.term_count;
    j["in_lattice"] = r.congruence.in_lattice;
    j["congruent"] = r.congruence.congruent_to_target;
    if (r.skip_reason) j["skip_reason"] = *r.skip_reason;
    if (r.error) j["error"] = *r.error;
    return j;
}

}  // namespace

VerificationReport::Outcome VerificationReport::outcome() const {
    if (skip_reason) return Outcome::skip;
    if (error) return Outcome::fail;
    return (region_ok && bar_invariant && congruence.congruent_to_target) ? Outcome::pass
                                                                          : Outcome::fail;
}

std::string VerificationReport::to_text() const {
    std::string s = case_id + " @ " + point.to_string() + ": ";
    switch (outcome()) {
        case Outcome::skip:
            return s + "skip (" + *skip_reason + ")";
        case Outcome::pass:
            return s + "pass terms=" + std::to_string(term_count);
        case Outcome::fail:
            break;
    }
    if (error) return s + "FAIL error: " + *error;
    s += "FAIL region=" + std::string(region_ok ? "ok" : "violated") +
         " bar=" + (bar_invariant ? "ok" : "broken") +
         " congruent=" + (congruence.congruent_to_target ? "yes" : "no") +
         " terms=" + std::to_string(term_count);
    for (std::size_t i = 0; i < congruence.offenders.size() && i < 3; ++i)
        s += "\n    offender E^" + congruence.offenders[i].first.to_string() + ": " +
             congruence.offenders[i].second.to_string();
    return s;
}

std::string VerificationReport::to_json() const { return report_json(*this).dump(); }

std::string PinningRecord::to_text() const {
    std::string s = "convention pinning: " + std::to_string(probes.size()) + " probed, " +
                    std::to_string(accepted_count) + " accepted, " +
                    std::to_string(class_count) + " behavioral class" +
                    (class_count == 1 ? "" : "es") + "\n";
    for (const Probe& p : probes) {
        if (!p.accepted()) continue;
        s += "  accepted " + p.conv.to_string() + " class " + std::to_string(p.cls);
        if (p.conv == representative) s += "  (representative)";
        s += "\n";
    }
    return s;
}

const PinningRecord& pin_conventions() {
    static const PinningRecord rec = run_pinning();
    return rec;
}

bool bar_invariant(const CaseSpec& c, const PBWIndex& a) {
    for (const MonomialTerm& t : instantiate(c, a))
        if (!(t.coeff.bar() == t.coeff)) return false;
    return true;
}

VerificationReport verify_case_at(const CaseSpec& c, const PBWIndex& a) {
    VerificationReport r;
    r.case_id = c.id;
    r.point = a;
    auto t0 = Clock::now();
    r.region_ok = c.region.contains(a);
    if (!r.region_ok) {
        r.elapsed_ms = ms_since(t0);
        return r;
    }
    try {
        std::vector<MonomialTerm> terms = instantiate(c, a);
        r.term_count = terms.size();
        r.bar_invariant = true;
        for (const MonomialTerm& t : terms)
            if (!(t.coeff.bar() == t.coeff)) r.bar_invariant = false;
        WordSum sum = expand_terms(terms, Convention::pinned());
        r.congruence = lattice_verdict(express_in_pbw(sum), a);
    } catch (const height_cap_error& e) {
        r.skip_reason = e.what();
    } catch (const resource_error& e) {
        r.skip_reason = e.what();
    } catch (const table_error& e) {
        r.error = e.what();
    }
    r.elapsed_ms = ms_since(t0);
    return r;
}

std::vector<VerificationReport> verify_case(const CaseSpec& c, int samples, int max_entry,
                                            int max_height) {
    std::vector<VerificationReport> out;
    if (samples <= 0) return out;
    std::array<int, 10> caps;
    caps.fill(max_entry);
    caps[3] = std::min(max_entry, 1);
    std::vector<PBWIndex> pts =
        sample_points(c.region, max_entry, max_height, std::size_t(samples), &caps);
    out.reserve(std::size_t(samples));
    for (const PBWIndex& a : pts) out.push_back(verify_case_at(c, a));
    for (std::size_t i = pts.size(); i < std::size_t(samples); ++i) {
        VerificationReport r;
        r.case_id = c.id;
        r.skip_reason = "sampling shortfall: only " + std::to_string(pts.size()) + " of " +
                        std::to_string(samples) + " points exist with entries <= " +
                        std::to_string(max_entry) + ", height <= " + std::to_string(max_height);
        out.push_back(std::move(r));
    }
    return out;
}

BatchSummary verify_all(const CaseTable& t, int samples, int max_entry, int max_height,
                        int jobs) {
    BatchSummary s;
    s.pinning = pin_conventions();
    const std::size_t n = t.cases.size();
    std::vector<std::vector<VerificationReport>> per_case(n);

    jobs = std::clamp(jobs, 1, 64);
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            per_case[i] = verify_case(t.cases[i], samples, max_entry, max_height);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        auto worker = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    per_case[i] = verify_case(t.cases[i], samples, max_entry, max_height);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        };
        std::vector<std::thread> pool;
        for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    for (std::size_t i = 0; i < n; ++i) {
        BatchSummary::CaseCounts cc;
        cc.case_id = t.cases[i].id;
        for (VerificationReport& r : per_case[i]) {
            switch (r.outcome()) {
                case VerificationReport::Outcome::pass: ++cc.passed; break;
                case VerificationReport::Outcome::fail: ++cc.failed; break;
                case VerificationReport::Outcome::skip: ++cc.skipped; break;
            }
            if (r.outcome() == VerificationReport::Outcome::fail) s.failures.push_back(r);
            s.reports.push_back(std::move(r));
        }
        s.total_pass += cc.passed;
        s.total_fail += cc.failed;
        s.total_skip += cc.skipped;
        s.cases.push_back(std::move(cc));
    }
    return s;
}

std::string BatchSummary::to_text() const {
    std::string s = "verified " + std::to_string(cases.size()) +
                    " cases: pass=" + std::to_string(total_pass) +
                    " fail=" + std::to_string(total_fail) +
                    " skip=" + std::to_string(total_skip) + "\n";
    s += pinning.to_text();
    for (const CaseCounts& cc : cases)
        s += "  " + cc.case_id + ": pass=" + std::to_string(cc.passed) +
             " fail=" + std::to_string(cc.failed) + " skip=" + std::to_string(cc.skipped) + "\n";
    if (failures.empty()) {
        s += "failures: none\n";
    } else {
        s += "failures:\n";
        for (const VerificationReport& r : failures) s += "  " + r.to_text() + "\n";
    }
    return s;
}

DegenerationProbe degeneration_check(const CaseSpec& c, const PBWIndex& a) {
    DegenerationProbe p;
    p.case_id = c.id;
    p.point = a;
    if (!c.one_variable() || c.factors.size() != 1) return p;
    if (!c.region.contains(a)) return p;
    if (c.factors[0].top.eval(a) != -1) return p;
    p.applicable = true;

    DividedWord w0;
    for (const PatternFactor& pf : c.pattern) {
        long long e = pf.exp.eval(a, 0, 0);
        if (e < 0) return p;  // malformed table; leave probe failing
        if (e > 0) w0.factors.emplace_back(pf.letter, int(e));
    }
    std::vector<MonomialTerm> terms = instantiate(c, a);
    p.single_term = terms.size() == 1 && terms[0].coeff == LaurentPoly::one() &&
                    terms[0].word.factors == w0.factors;
    p.expansion_equal =
        express_in_pbw(expand_terms(terms, Convention::pinned())) ==
        express_in_pbw(eval_divided_word(w0));
    return p;
}

std::string DegenerationProbe::to_text() const {
    std::string s = "degeneration " + case_id + " @ " + point.to_string() + ": ";
    if (!applicable) return s + "not applicable";
    return s + (pass() ? "collapse verified" : std::string("FAIL") +
                                                   " single_term=" + (single_term ? "yes" : "no") +
                                                   " expansion_equal=" +
                                                   (expansion_equal ? "yes" : "no"));
}

}  // namespace a4cb
