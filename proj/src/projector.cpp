#include "good/projector.hpp"

#include <algorithm>
#include <sstream>

namespace good {

namespace {

SpecBlock strip_represents(SpecBlock b) {
    b.represents.clear();
    return b;
}

ClassUnit project_class(const ClassUnit& c, ViewKind kind) {
    if (kind == ViewKind::Code) return c;
    ClassUnit out;
    out.name = c.name;
    out.type_params = c.type_params;
    if (kind == ViewKind::External) {
        out.external_spec = strip_represents(c.external_spec);
        out.internal_spec = std::nullopt;
    } else {
        out.external_spec = c.external_spec;
        out.internal_spec = c.internal_spec;
    }
    for (const auto& m : c.members) {
        if (!member_view_membership(m, kind)) continue;
        Member pm;
        pm.kind = m.kind;
        pm.visibility = m.visibility;
        pm.signature = m.signature;
        if (kind == ViewKind::External) {
            if (m.external_spec) pm.external_spec = strip_represents(*m.external_spec);
        } else {
            pm.external_spec = m.external_spec;
            pm.internal_spec = m.internal_spec;
        }
        pm.body = std::nullopt;
        out.members.push_back(std::move(pm));
    }
    return out;
}

} // namespace

ViewDocument project(const MasterDocument& doc, ViewKind kind) {
    MasterDocument canon = normalize(doc);
    ViewDocument view;
    view.kind = kind;
    view.provenance = doc.source_name;
    view.classes.reserve(canon.classes.size());
    for (const auto& c : canon.classes) view.classes.push_back(project_class(c, kind));
    return view;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

struct Renderer {
    std::ostringstream out;

    void comment(const SpecBlock& b, int indent, bool tagged_desc) {
        std::string ind(indent, ' ');
        out << ind << "/**\n";
        auto line = [&](const std::string& text) {
            if (text.empty()) out << ind << " *\n";
            else out << ind << " * " << text << "\n";
        };
        if (b.desc) {
            if (tagged_desc) line("@desc " + b.desc->raw);
            else line(b.desc->raw);
        }
        for (const auto& c : b.invariants) line("@inv " + c.raw);
        for (const auto& c : b.represents) line("@represents " + c.raw);
        if (b.pure) line("@pure");
        if (!b.assignable.empty()) line("@assignable " + join(b.assignable));
        for (const auto& c : b.preconditions) line("@requires " + c.raw);
        for (const auto& c : b.postconditions) line("@ensures " + c.raw);
        for (const auto& s : b.signals) line("@signals " + signal_text(s));
        for (const auto& sub : b.subspecs) {
            line("@sub " + sub.label + " {");
            for (const auto& c : sub.preconditions) line("  @requires " + c.raw);
            for (const auto& c : sub.postconditions) line("  @ensures " + c.raw);
            for (const auto& s : sub.signals) line("  @signals " + signal_text(s));
            if (!sub.assignable.empty())
                line("  @assignable " + join(sub.assignable));
            line("}");
        }
        out << ind << " */\n";
    }

    static std::string join(const std::vector<std::string>& xs) {
        std::string s;
        for (size_t i = 0; i < xs.size(); ++i) {
            if (i) s += ", ";
            s += xs[i];
        }
        return s;
    }

    static std::string signal_text(const SignalClause& s) {
        std::string t = s.exception_type;
        if (s.message) t += "(\"" + *s.message + "\")";
        if (s.condition) t += " " + s.condition->raw;
        return t;
    }

    static std::string declaration(const Member& m) {
        std::string d;
        if (m.visibility == Visibility::Public) d += "public ";
        else if (m.visibility == Visibility::Private) d += "private ";
        switch (m.kind) {
        case MemberKind::Attribute:
            if (m.signature.declared_type) d += m.signature.declared_type->text + " ";
            d += m.signature.name + ";";
            return d;
        case MemberKind::Constructor:
            d += m.signature.name + m.signature.name_suffix;
            break;
        case MemberKind::Method:
            if (m.signature.return_type) d += m.signature.return_type->text + " ";
            d += m.signature.name;
            break;
        }
        d += "(";
        for (size_t i = 0; i < m.signature.params.size(); ++i) {
            if (i) d += ", ";
            d += m.signature.params[i].type.text + " " + m.signature.params[i].name;
        }
        d += ")";
        return d;
    }

    void clazz(const ClassUnit& c, ViewKind kind) {
        if (!c.external_spec.empty()) comment(c.external_spec, 0, false);
        out << "public class " << c.name;
        if (!c.type_params.empty()) {
            out << "<";
            for (size_t i = 0; i < c.type_params.size(); ++i) {
                if (i) out << ", ";
                out << c.type_params[i];
            }
            out << ">";
        }
        out << " {\n";
        if (kind != ViewKind::External && c.internal_spec && !c.internal_spec->empty())
            comment(*c.internal_spec, 2, false);
        for (const auto& m : c.members) {
            out << "\n";
            // Public members: external comment above, internal after the
            // declaration. Non-public members never appear externally, so
            // their internal spec is the comment above (the attribute
            // convention of the worked example).
            bool is_public = m.visibility == Visibility::Public;
            bool have_internal = kind != ViewKind::External && m.internal_spec &&
                                 !m.internal_spec->empty();
            bool has_internal = is_public && have_internal; // rendered after decl
            if (is_public) {
                if (m.external_spec && !m.external_spec->empty())
                    comment(*m.external_spec, 2, true);
            } else {
                if (have_internal) comment(*m.internal_spec, 2, true);
                else if (m.external_spec && !m.external_spec->empty())
                    comment(*m.external_spec, 2, true);
            }
            std::string decl = declaration(m);
            bool has_body = kind == ViewKind::Code && m.body && !m.body->empty();
            if (has_body && !has_internal) {
                // single-line bodies share the declaration line
                std::vector<std::string> lines = body_lines(*m.body);
                out << "  " << decl << " " << lines[0] << "\n";
                for (size_t i = 1; i < lines.size(); ++i) out << lines[i] << "\n";
            } else {
                out << "  " << decl << "\n";
                if (has_internal) comment(*m.internal_spec, 2, true);
                if (has_body) {
                    for (const auto& l : body_lines(*m.body)) out << l << "\n";
                }
            }
        }
        out << "}\n";
    }

    static std::vector<std::string> body_lines(const std::string& body) {
        std::vector<std::string> lines;
        std::string cur;
        for (char ch : body) {
            if (ch == '\n') {
                lines.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        lines.push_back(cur);
        return lines;
    }
};

} // namespace

std::string render_class(const ClassUnit& cls, ViewKind kind) {
    Renderer r;
    r.clazz(normalize(cls), kind);
    return r.out.str();
}

std::string render(const ViewDocument& view) {
    std::string text;
    for (size_t i = 0; i < view.classes.size(); ++i) {
        if (i) text += "\n";
        text += render_class(view.classes[i], view.kind);
    }
    return text;
}

// ---------------------------------------------------------------------------
// Diff
// ---------------------------------------------------------------------------

namespace {

void diff_clause_lists(const std::string& cls, const std::string& member,
                       const std::string& field, const std::vector<Clause>& exp,
                       const std::vector<Clause>& act, std::vector<ViewDelta>& out) {
    if (exp == act) return;
    ChangeKind kind = ChangeKind::Changed;
    if (!exp.empty() && act.empty()) kind = ChangeKind::Removed;
    else if (exp.empty() && !act.empty()) kind = ChangeKind::Added;
    std::string detail = std::to_string(exp.size()) + " clause(s) expected, " +
                         std::to_string(act.size()) + " found";
    out.push_back({cls, member, field, kind, detail});
}

void diff_spec(const std::string& cls, const std::string& member,
               const std::string& prefix, const SpecBlock& exp, const SpecBlock& act,
               std::vector<ViewDelta>& out) {
    auto field = [&](const char* f) { return prefix + "." + f; };
    if (!(exp.desc == act.desc))
        out.push_back({cls, member, field("desc"), ChangeKind::Changed,
                       exp.desc ? (act.desc ? "text differs" : "missing") : "unexpected"});
    diff_clause_lists(cls, member, field("inv"), exp.invariants, act.invariants, out);
    diff_clause_lists(cls, member, field("requires"), exp.preconditions,
                      act.preconditions, out);
    diff_clause_lists(cls, member, field("ensures"), exp.postconditions,
                      act.postconditions, out);
    diff_clause_lists(cls, member, field("represents"), exp.represents, act.represents,
                      out);
    if (exp.signals != act.signals)
        out.push_back({cls, member, field("signals"), ChangeKind::Changed,
                       "signal clauses differ"});
    if (exp.assignable != act.assignable)
        out.push_back({cls, member, field("assignable"), ChangeKind::Changed,
                       "assignable targets differ"});
    if (exp.pure != act.pure)
        out.push_back({cls, member, field("pure"), ChangeKind::Changed,
                       exp.pure ? "@pure removed" : "@pure added"});
    if (exp.subspecs != act.subspecs) {
        // name the first differing label for the report
        std::string detail = "subspecs differ";
        size_t n = std::min(exp.subspecs.size(), act.subspecs.size());
        for (size_t i = 0; i < n; ++i) {
            if (!(exp.subspecs[i] == act.subspecs[i])) {
                detail = "subspec '" + exp.subspecs[i].label + "' differs";
                break;
            }
        }
        if (exp.subspecs.size() != act.subspecs.size())
            detail = std::to_string(exp.subspecs.size()) + " subspec(s) expected, " +
                     std::to_string(act.subspecs.size()) + " found";
        out.push_back({cls, member, field("subspecs"), ChangeKind::Changed, detail});
    }
}

void diff_optional_spec(const std::string& cls, const std::string& member,
                        const std::string& prefix, const std::optional<SpecBlock>& exp,
                        const std::optional<SpecBlock>& act,
                        std::vector<ViewDelta>& out) {
    if (!exp && !act) return;
    if (exp && !act) {
        out.push_back({cls, member, prefix, ChangeKind::Removed, "spec block missing"});
        return;
    }
    if (!exp && act) {
        out.push_back({cls, member, prefix, ChangeKind::Added, "unexpected spec block"});
        return;
    }
    diff_spec(cls, member, prefix, *exp, *act, out);
}

void diff_member(const std::string& cls, const Member& exp, const Member& act,
                 std::vector<ViewDelta>& out) {
    std::string key = member_key(exp);
    if (exp.kind != act.kind)
        out.push_back({cls, key, "kind", ChangeKind::Changed,
                       std::string(to_string(exp.kind)) + " vs " + to_string(act.kind)});
    if (exp.visibility != act.visibility)
        out.push_back({cls, key, "visibility", ChangeKind::Changed,
                       std::string(to_string(exp.visibility)) + " vs " +
                           to_string(act.visibility)});
    if (!(exp.signature == act.signature))
        out.push_back({cls, key, "signature", ChangeKind::Changed,
                       "declared signature differs"});
    diff_optional_spec(cls, key, "external", exp.external_spec, act.external_spec, out);
    diff_optional_spec(cls, key, "internal", exp.internal_spec, act.internal_spec, out);
    if (!(exp.body == act.body))
        out.push_back({cls, key, "body", ChangeKind::Changed, "body differs"});
}

} // namespace

std::vector<ViewDelta> diff_views(const ViewDocument& expected, const ViewDocument& actual) {
    std::vector<ViewDelta> out;
    if (expected.kind != actual.kind) {
        out.push_back({"", "", "kind", ChangeKind::Changed,
                       std::string("cannot diff a ") + to_string(expected.kind) +
                           " view against a " + to_string(actual.kind) + " view"});
        return out;
    }
    std::vector<ClassUnit> exp, act;
    for (const auto& c : expected.classes) exp.push_back(normalize(c));
    for (const auto& c : actual.classes) act.push_back(normalize(c));

    auto not_permitted = [&](const Member& m) {
        return !member_view_membership(m, expected.kind);
    };

    for (const auto& ec : exp) {
        const ClassUnit* ac = nullptr;
        for (const auto& c : act)
            if (c.name == ec.name) ac = &c;
        if (!ac) {
            out.push_back({ec.name, "", "class", ChangeKind::Removed, "class missing"});
            continue;
        }
        if (ec.type_params != ac->type_params)
            out.push_back({ec.name, "", "type_params", ChangeKind::Changed,
                           "type parameters differ"});
        diff_spec(ec.name, "", "external", ec.external_spec, ac->external_spec, out);
        diff_optional_spec(ec.name, "", "internal", ec.internal_spec, ac->internal_spec,
                           out);
        // members, keyed by (name, parameter types)
        for (const auto& em : ec.members) {
            const Member* am = nullptr;
            for (const auto& m : ac->members)
                if (member_key(m) == member_key(em)) am = &m;
            if (!am) {
                out.push_back({ec.name, member_key(em), "member", ChangeKind::Removed,
                               "member missing"});
                continue;
            }
            diff_member(ec.name, em, *am, out);
        }
        for (const auto& am : ac->members) {
            bool found = std::any_of(ec.members.begin(), ec.members.end(),
                                     [&](const Member& m) {
                                         return member_key(m) == member_key(am);
                                     });
            if (!found) {
                std::string detail = "unexpected member";
                if (not_permitted(am))
                    detail += std::string(" (not permitted in a ") +
                              to_string(expected.kind) + " view)";
                out.push_back({ec.name, member_key(am), "member", ChangeKind::Added,
                               detail});
            }
        }
    }
    for (const auto& acl : act) {
        bool found = std::any_of(exp.begin(), exp.end(),
                                 [&](const ClassUnit& c) { return c.name == acl.name; });
        if (!found)
            out.push_back({acl.name, "", "class", ChangeKind::Added, "unexpected class"});
    }
    return out;
}

} // namespace good
