#include "good/checker.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace good {

const char* to_string(RefinementRule r) {
    switch (r) {
    case RefinementRule::R1_Invariant: return "R1_invariant";
    case RefinementRule::R2_Precondition: return "R2_precondition";
    case RefinementRule::R3_Postcondition: return "R3_postcondition";
    }
    return "?";
}

const char* to_string(ObligationStatus s) {
    return s == ObligationStatus::TriviallyDischarged ? "trivially_discharged"
                                                      : "manual";
}

// ---------------------------------------------------------------------------
// Interval fragment
// ---------------------------------------------------------------------------

namespace {

constexpr long long kLo = std::numeric_limits<long long>::min();
constexpr long long kHi = std::numeric_limits<long long>::max();

/// Sorted, pairwise-disjoint closed intervals over the integers.
using IntervalSet = std::vector<std::pair<long long, long long>>;

IntervalSet whole_line() { return {{kLo, kHi}}; }

IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
    IntervalSet out;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        long long lo = std::max(a[i].first, b[j].first);
        long long hi = std::min(a[i].second, b[j].second);
        if (lo <= hi) out.emplace_back(lo, hi);
        if (a[i].second < b[j].second) ++i;
        else ++j;
    }
    return out;
}

/// Satisfying set of `term OP k`. Ops are normalized ("=" for equality).
std::optional<IntervalSet> comparison_set(const std::string& op, long long k) {
    IntervalSet s;
    if (op == "=") {
        s = {{k, k}};
    } else if (op == "!=") {
        if (k > kLo) s.emplace_back(kLo, k - 1);
        if (k < kHi) s.emplace_back(k + 1, kHi);
    } else if (op == "<") {
        if (k == kLo) return IntervalSet{};
        s = {{kLo, k - 1}};
    } else if (op == "<=") {
        s = {{kLo, k}};
    } else if (op == ">") {
        if (k == kHi) return IntervalSet{};
        s = {{k + 1, kHi}};
    } else if (op == ">=") {
        s = {{k, kHi}};
    } else {
        return std::nullopt;
    }
    return s;
}

std::string mirror_op(const std::string& op) {
    if (op == "<") return ">";
    if (op == "<=") return ">=";
    if (op == ">") return "<";
    if (op == ">=") return "<=";
    return op; // = and != are symmetric
}

std::optional<long long> int_constant(const ClauseExpr& e) {
    if (e.kind == ExprKind::IntLit) return e.value;
    if (e.kind == ExprKind::Unary && e.name == "-" &&
        e.children[0].kind == ExprKind::IntLit)
        return -e.children[0].value;
    return std::nullopt;
}

bool is_comparison_op(const std::string& op) {
    return op == "=" || op == "!=" || op == "<" || op == "<=" || op == ">" ||
           op == ">=";
}

/// Splits a conjunction into comparisons of one shared term against integer
/// constants; nullopt when the expression leaves the fragment.
bool collect_fragment(const ClauseExpr& e, std::optional<ClauseExpr>& term,
                      IntervalSet& acc) {
    if (e.kind == ExprKind::Binary && e.name == "&&")
        return collect_fragment(e.children[0], term, acc) &&
               collect_fragment(e.children[1], term, acc);
    if (e.kind != ExprKind::Binary || !is_comparison_op(e.name)) return false;

    const ClauseExpr& lhs = e.children[0];
    const ClauseExpr& rhs = e.children[1];
    std::string op = e.name;
    const ClauseExpr* t = nullptr;
    std::optional<long long> k;
    if ((k = int_constant(rhs))) {
        t = &lhs;
    } else if ((k = int_constant(lhs))) {
        t = &rhs;
        op = mirror_op(op);
    } else {
        return false;
    }
    if (int_constant(*t)) return false; // constant-vs-constant: outside fragment
    if (!term) term = *t;
    else if (!(*term == *t)) return false;
    auto set = comparison_set(op, *k);
    if (!set) return false;
    acc = intersect(acc, *set);
    return true;
}

std::optional<std::pair<ClauseExpr, IntervalSet>> fragment_set(const ClauseExpr& e) {
    std::optional<ClauseExpr> term;
    IntervalSet acc = whole_line();
    if (!collect_fragment(e, term, acc) || !term) return std::nullopt;
    return std::make_pair(*term, acc);
}

} // namespace

Disjointness check_disjoint_interval(const ClauseExpr& a, const ClauseExpr& b) {
    auto fa = fragment_set(a);
    auto fb = fragment_set(b);
    if (!fa || !fb) return Disjointness::Unknown;
    if (!(fa->first == fb->first)) return Disjointness::Unknown;
    return intersect(fa->second, fb->second).empty() ? Disjointness::Disjoint
                                                     : Disjointness::Overlapping;
}

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

namespace {

struct Checker {
    MasterDocument doc;
    std::vector<Diagnostic> out;

    explicit Checker(MasterDocument d) : doc(std::move(d)) {}

    SourceSpan span_of(const std::string& node_id) const {
        auto it = doc.source_spans.find(node_id);
        return it == doc.source_spans.end() ? SourceSpan{} : it->second;
    }

    void emit(const std::string& code, Severity sev, Subject subject,
              const std::string& msg, const std::string& span_node) {
        out.push_back({code, sev, std::move(subject), msg, span_of(span_node)});
    }

    static bool clause_uses_old(const Clause& c) {
        return c.raw.find("\\old") != std::string::npos;
    }

    /// Conjunction of a subspec's preconditions, when fully formal.
    static std::optional<ClauseExpr> precondition_conjunction(const SubSpec& sub) {
        std::optional<ClauseExpr> conj;
        for (const auto& c : sub.preconditions) {
            if (!c.expr) return std::nullopt;
            if (!conj) {
                conj = *c.expr;
            } else {
                ClauseExpr node;
                node.kind = ExprKind::Binary;
                node.name = "&&";
                node.children = {std::move(*conj), *c.expr};
                conj = std::move(node);
            }
        }
        return conj;
    }

    void check_block(const SpecBlock& b, const Subject& subject, bool is_external,
                     const std::string& span_node) {
        if (b.pure && !b.assignable.empty())
            emit("E002", Severity::Error, subject,
                 "@pure together with non-empty @assignable", span_node);
        if (is_external && !b.represents.empty())
            emit("E003", Severity::Error, subject,
                 "@represents inside an external spec block", span_node);
        if (b.mixes_flat_and_subspecs())
            emit("E005", Severity::Error, subject,
                 "flat requires/ensures/signals mixed with @sub blocks", span_node);

        std::set<std::string> labels;
        for (const auto& sub : b.subspecs) {
            if (!labels.insert(sub.label).second)
                emit("E006", Severity::Error, subject,
                     "duplicate subspec label '" + sub.label + "'", span_node);
            if (!sub.signals.empty() && sub.preconditions.empty())
                emit("E004", Severity::Error, subject,
                     "@signals in subspec '" + sub.label + "' whose @requires is empty",
                     span_node);
            if (sub.signals.empty() && sub.preconditions.empty())
                emit("W006", Severity::Warning, subject,
                     "subspec '" + sub.label + "' has no @requires", span_node);
            for (const auto& c : sub.preconditions)
                if (clause_uses_old(c))
                    emit("W005", Severity::Warning, subject,
                         "\\old used in a precondition: '" + c.raw + "'", span_node);
        }
        for (const auto& c : b.preconditions)
            if (clause_uses_old(c))
                emit("W005", Severity::Warning, subject,
                     "\\old used in a precondition: '" + c.raw + "'", span_node);
        for (const auto& c : b.invariants)
            if (clause_uses_old(c))
                emit("W005", Severity::Warning, subject,
                     "\\old used in an invariant: '" + c.raw + "'", span_node);

        // pairwise disjointness of subspec preconditions, interval fragment
        for (size_t i = 0; i < b.subspecs.size(); ++i) {
            for (size_t j = i + 1; j < b.subspecs.size(); ++j) {
                auto ci = precondition_conjunction(b.subspecs[i]);
                auto cj = precondition_conjunction(b.subspecs[j]);
                Disjointness d = Disjointness::Unknown;
                if (ci && cj) d = check_disjoint_interval(*ci, *cj);
                if (d != Disjointness::Disjoint)
                    emit("W003", Severity::Warning, subject,
                         "preconditions of subspecs '" + b.subspecs[i].label +
                             "' and '" + b.subspecs[j].label +
                             "' are not checkably disjoint",
                         span_node);
            }
        }
    }

    static std::vector<std::string> subspec_labels(const SpecBlock& b) {
        std::vector<std::string> ls;
        for (const auto& s : b.subspecs) ls.push_back(s.label);
        return ls;
    }

    void run() {
        for (const auto& cls : doc.classes) {
            Subject cs{cls.name, std::nullopt};
            check_block(cls.external_spec, cs, true, cls.name + "#external");
            if (cls.internal_spec)
                check_block(*cls.internal_spec, cs, false, cls.name + "#internal");

            for (const auto& m : cls.members) {
                Subject ms{cls.name, member_key(m)};
                std::string mid = cls.name + "." + member_key(m);
                if (m.external_spec)
                    check_block(*m.external_spec, ms, true, mid + "#external");
                if (m.internal_spec)
                    check_block(*m.internal_spec, ms, false, mid + "#internal");

                bool has_ext_desc = m.external_spec && m.external_spec->desc;
                bool has_int_desc = m.internal_spec && m.internal_spec->desc;
                if (m.visibility == Visibility::Public && !has_ext_desc)
                    emit("E001", Severity::Error, ms,
                         "public member missing external @desc", mid);
                if (m.visibility == Visibility::Private && !has_ext_desc &&
                    !has_int_desc)
                    emit("W001", Severity::Warning, ms,
                         "private member lacking any @desc", mid);
                if (m.visibility == Visibility::Public &&
                    m.kind != MemberKind::Attribute && m.external_spec &&
                    !m.internal_spec)
                    emit("W002", Severity::Warning, ms,
                         "public " + std::string(to_string(m.kind)) +
                             " with external spec but no internal spec "
                             "(identity refinement assumed)",
                         mid);
                if (m.external_spec && m.internal_spec) {
                    auto ext = subspec_labels(*m.external_spec);
                    auto inn = subspec_labels(*m.internal_spec);
                    std::set<std::string> eset(ext.begin(), ext.end());
                    std::set<std::string> iset(inn.begin(), inn.end());
                    if (eset != iset) {
                        std::string unmatched;
                        for (const auto& l : eset)
                            if (!iset.count(l))
                                unmatched += (unmatched.empty() ? "" : ", ") + l;
                        for (const auto& l : iset)
                            if (!eset.count(l))
                                unmatched += (unmatched.empty() ? "" : ", ") + l;
                        emit("W004", Severity::Warning, ms,
                             "subspec labels unmatched between spec levels: " +
                                 unmatched,
                             mid);
                    }
                }
            }
        }
    }
};

} // namespace

std::vector<Diagnostic> check(const MasterDocument& doc) {
    // run on the canonical form so structurally equal inputs report identically
    Checker c(normalize(doc));
    c.run();
    return std::move(c.out);
}

// ---------------------------------------------------------------------------
// Refinement obligations
// ---------------------------------------------------------------------------

namespace {

std::vector<Clause> collect_represents(const ClassUnit& cls) {
    std::vector<Clause> rep;
    if (cls.internal_spec)
        for (const auto& c : cls.internal_spec->represents) rep.push_back(c);
    for (const auto& m : cls.members) {
        if (m.kind != MemberKind::Attribute || !m.internal_spec) continue;
        for (const auto& c : m.internal_spec->represents) rep.push_back(c);
    }
    return rep;
}

std::vector<Clause> concat(std::vector<Clause> a, const std::vector<Clause>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

} // namespace

Obligation discharge_trivial(Obligation ob) {
    std::set<std::string> ante;
    for (const auto& c : ob.antecedents) ante.insert(normalize_text(c.raw));
    bool subset = std::all_of(ob.consequent.begin(), ob.consequent.end(),
                              [&](const Clause& c) {
                                  return ante.count(normalize_text(c.raw)) > 0;
                              });
    ob.status = subset ? ObligationStatus::TriviallyDischarged
                       : ObligationStatus::Manual; // empty consequent => subset
    return ob;
}

std::vector<Obligation> refinement_obligations(const ClassUnit& cls) {
    ClassUnit canon = normalize(cls);
    std::vector<Obligation> out;
    std::vector<Clause> represents = collect_represents(canon);

    {
        Obligation r1;
        r1.rule = RefinementRule::R1_Invariant;
        r1.subject = {canon.name, std::nullopt};
        r1.antecedents = represents;
        if (canon.internal_spec)
            r1.antecedents = concat(std::move(r1.antecedents),
                                    canon.internal_spec->invariants);
        r1.consequent = canon.external_spec.invariants;
        out.push_back(discharge_trivial(std::move(r1)));
    }

    for (const auto& m : canon.members) {
        if (m.visibility != Visibility::Public) continue;
        if (m.kind == MemberKind::Attribute) continue;
        if (!m.external_spec) continue;
        const SpecBlock& ext = *m.external_spec;
        const SpecBlock& internal = m.internal_spec ? *m.internal_spec : ext;
        Subject subject{canon.name, member_key(m)};

        auto make = [&](RefinementRule rule, std::optional<std::string> label,
                        std::vector<Clause> ante, std::vector<Clause> cons) {
            Obligation ob;
            ob.rule = rule;
            ob.subject = subject;
            ob.subspec_label = std::move(label);
            ob.antecedents = std::move(ante);
            ob.consequent = std::move(cons);
            out.push_back(discharge_trivial(std::move(ob)));
        };

        if (ext.subspecs.empty() && internal.subspecs.empty()) {
            make(RefinementRule::R2_Precondition, std::nullopt,
                 concat(represents, ext.preconditions), internal.preconditions);
            make(RefinementRule::R3_Postcondition, std::nullopt,
                 concat(represents, internal.postconditions), ext.postconditions);
        } else {
            for (const auto& esub : ext.subspecs) {
                const SubSpec* isub = nullptr;
                for (const auto& s : internal.subspecs)
                    if (s.label == esub.label) isub = &s;
                if (!isub) continue; // unmatched labels surface as W004
                make(RefinementRule::R2_Precondition, esub.label,
                     concat(represents, esub.preconditions), isub->preconditions);
                make(RefinementRule::R3_Postcondition, esub.label,
                     concat(represents, isub->postconditions), esub.postconditions);
            }
        }
    }
    return out;
}

} // namespace good
