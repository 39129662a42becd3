#include "good/model.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace good {

const char* to_string(ViewKind k) {
    switch (k) {
    case ViewKind::External: return "external";
    case ViewKind::Internal: return "internal";
    case ViewKind::Code: return "code";
    }
    return "?";
}

const char* to_string(Visibility v) {
    switch (v) {
    case Visibility::Public: return "public";
    case Visibility::Private: return "private";
    case Visibility::Package: return "package";
    }
    return "?";
}

const char* to_string(MemberKind k) {
    switch (k) {
    case MemberKind::Constructor: return "constructor";
    case MemberKind::Method: return "method";
    case MemberKind::Attribute: return "attribute";
    }
    return "?";
}

const char* to_string(Formality f) {
    switch (f) {
    case Formality::Informal: return "informal";
    case Formality::Formal: return "formal";
    case Formality::Mixed: return "mixed";
    }
    return "?";
}

const char* to_string(Severity s) {
    return s == Severity::Error ? "error" : "warning";
}

std::optional<ViewKind> view_kind_from_string(const std::string& s) {
    if (s == "external") return ViewKind::External;
    if (s == "internal") return ViewKind::Internal;
    if (s == "code") return ViewKind::Code;
    return std::nullopt;
}

bool SpecBlock::empty() const {
    return !desc && invariants.empty() && preconditions.empty() &&
           postconditions.empty() && signals.empty() && assignable.empty() &&
           !pure && represents.empty() && subspecs.empty();
}

bool SpecBlock::mixes_flat_and_subspecs() const {
    return !subspecs.empty() &&
           (!preconditions.empty() || !postconditions.empty() || !signals.empty());
}

std::string member_key(const Member& m) {
    std::string key = m.signature.name + "(";
    for (size_t i = 0; i < m.signature.params.size(); ++i) {
        if (i) key += ",";
        key += m.signature.params[i].type.text;
    }
    key += ")";
    return key;
}

const Member* ClassUnit::find_member(const std::string& name) const {
    for (const auto& m : members)
        if (m.signature.name == name) return &m;
    return nullptr;
}

const ClassUnit* MasterDocument::find_class(const std::string& name) const {
    for (const auto& c : classes)
        if (c.name == name) return &c;
    return nullptr;
}

const ClassUnit* ViewDocument::find_class(const std::string& name) const {
    for (const auto& c : classes)
        if (c.name == name) return &c;
    return nullptr;
}

std::vector<std::string> MasterDocument::node_ids() const {
    std::vector<std::string> ids;
    for (const auto& c : classes) {
        ids.push_back(c.name);
        if (!c.external_spec.empty()) ids.push_back(c.name + "#external");
        if (c.internal_spec) ids.push_back(c.name + "#internal");
        for (const auto& m : c.members) {
            std::string mid = c.name + "." + member_key(m);
            ids.push_back(mid);
            if (m.external_spec) ids.push_back(mid + "#external");
            if (m.internal_spec) ids.push_back(mid + "#internal");
        }
    }
    return ids;
}

bool member_view_membership(const Member& m, ViewKind kind) {
    if (kind == ViewKind::External) return m.visibility == Visibility::Public;
    return true;
}

std::string normalize_text(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = true; // swallow leading whitespace
    for (char ch : s) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out += ' ';
        in_space = false;
        out += ch;
    }
    return out;
}

std::string normalize_block(const std::string& s) {
    std::vector<std::string> lines;
    std::string cur;
    for (size_t i = 0; i < s.size(); ++i) {
        char ch = s[i];
        if (ch == '\r') {
            if (i + 1 < s.size() && s[i + 1] == '\n') continue;
            ch = '\n';
        }
        if (ch == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    lines.push_back(cur);
    for (auto& line : lines) {
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
    }
    while (!lines.empty() && lines.front().empty()) lines.erase(lines.begin());
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    std::string out;
    for (size_t i = 0; i < lines.size(); ++i) {
        if (i) out += '\n';
        out += lines[i];
    }
    return out;
}

Clause normalize(const Clause& c) {
    Clause out = c;
    out.raw = normalize_text(c.raw);
    return out;
}

static SignalClause normalize(const SignalClause& s) {
    SignalClause out = s;
    out.exception_type = normalize_text(s.exception_type);
    if (s.message) out.message = *s.message; // message text is literal, keep verbatim
    if (s.condition) out.condition = normalize(*s.condition);
    return out;
}

static std::vector<Clause> normalize_clauses(const std::vector<Clause>& cs) {
    std::vector<Clause> out;
    out.reserve(cs.size());
    for (const auto& c : cs) out.push_back(normalize(c));
    return out;
}

SpecBlock normalize(const SpecBlock& b) {
    SpecBlock out = b;
    if (b.desc) out.desc = normalize(*b.desc);
    out.invariants = normalize_clauses(b.invariants);
    out.preconditions = normalize_clauses(b.preconditions);
    out.postconditions = normalize_clauses(b.postconditions);
    out.represents = normalize_clauses(b.represents);
    out.signals.clear();
    for (const auto& s : b.signals) out.signals.push_back(normalize(s));
    for (auto& a : out.assignable) a = normalize_text(a);
    for (auto& sub : out.subspecs) {
        sub.label = normalize_text(sub.label);
        sub.preconditions = normalize_clauses(sub.preconditions);
        sub.postconditions = normalize_clauses(sub.postconditions);
        std::vector<SignalClause> sigs;
        for (const auto& s : sub.signals) sigs.push_back(normalize(s));
        sub.signals = std::move(sigs);
        for (auto& a : sub.assignable) a = normalize_text(a);
    }
    return out;
}

ClassUnit normalize(const ClassUnit& c) {
    ClassUnit out = c;
    out.external_spec = normalize(c.external_spec);
    if (c.internal_spec) out.internal_spec = normalize(*c.internal_spec);
    for (auto& m : out.members) {
        if (m.external_spec) m.external_spec = normalize(*m.external_spec);
        if (m.internal_spec) m.internal_spec = normalize(*m.internal_spec);
        if (m.body) m.body = normalize_block(*m.body);
    }
    return out;
}

MasterDocument normalize(const MasterDocument& doc) {
    MasterDocument out;
    out.source_name = doc.source_name;
    out.source_spans = doc.source_spans;
    out.classes.reserve(doc.classes.size());
    for (const auto& c : doc.classes) out.classes.push_back(normalize(c));
    return out;
}

bool structurally_equal(const MasterDocument& a, const MasterDocument& b) {
    return normalize(a).classes == normalize(b).classes;
}

bool structurally_equal(const ViewDocument& a, const ViewDocument& b) {
    if (a.kind != b.kind) return false;
    std::vector<ClassUnit> na, nb;
    for (const auto& c : a.classes) na.push_back(normalize(c));
    for (const auto& c : b.classes) nb.push_back(normalize(c));
    return na == nb;
}

} // namespace good
