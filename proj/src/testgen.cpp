#include "good/testgen.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include <json.hpp>

namespace good {

const char* to_string(PartitionKind k) {
    return k == PartitionKind::Equivalence ? "equivalence" : "boundary";
}

// ---------------------------------------------------------------------------
// Model file parsing
// ---------------------------------------------------------------------------

namespace {

struct Cursor {
    const std::string& s;
    size_t i = 0;

    explicit Cursor(const std::string& text) : s(text) {}

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    bool eat_word(const char* w) {
        skip_ws();
        size_t len = std::string(w).size();
        if (s.compare(i, len, w) != 0) return false;
        size_t after = i + len;
        if (after < s.size() &&
            (std::isalnum(static_cast<unsigned char>(s[after])) || s[after] == '_'))
            return false;
        i = after;
        return true;
    }
    std::optional<std::string> word() {
        skip_ws();
        size_t j = i;
        while (j < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
            ++j;
        if (j == i) return std::nullopt;
        std::string w = s.substr(i, j - i);
        i = j;
        return w;
    }
    std::optional<std::string> quoted() {
        skip_ws();
        if (i >= s.size() || s[i] != '"') return std::nullopt;
        size_t j = i + 1;
        std::string out;
        while (j < s.size() && s[j] != '"') {
            if (s[j] == '\\' && j + 1 < s.size()) ++j;
            out += s[j++];
        }
        if (j >= s.size()) return std::nullopt;
        i = j + 1;
        return out;
    }
    /// Integer (optionally signed), quoted string (kept with quotes), or a
    /// bare word. Returned as literal text.
    std::optional<std::string> literal() {
        skip_ws();
        if (i >= s.size()) return std::nullopt;
        if (s[i] == '"') {
            size_t start = i;
            if (!quoted()) return std::nullopt;
            return s.substr(start, i - start);
        }
        size_t j = i;
        if (s[j] == '-' || s[j] == '+') ++j;
        size_t body = j;
        while (j < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' ||
                s[j] == '.'))
            ++j;
        if (j == body) return std::nullopt;
        std::string lit = s.substr(i, j - i);
        i = j;
        return lit;
    }
};

struct ModelParser {
    std::vector<ParseDiagnostic> diags;

    void error(const std::string& code, const std::string& msg, int line) {
        diags.push_back({Severity::Error, code, msg, {line, 1, line, 1}});
    }

    std::optional<Observation> parse_observation(Cursor& c) {
        auto call = c.word();
        if (!call) return std::nullopt;
        Observation obs;
        obs.call = *call;
        if (!c.eat('(')) return std::nullopt;
        if (!c.eat(')')) {
            for (;;) {
                auto arg = c.literal();
                if (!arg) return std::nullopt;
                obs.args.push_back(*arg);
                if (c.eat(',')) continue;
                if (c.eat(')')) break;
                return std::nullopt;
            }
        }
        if (!c.eat('=')) return std::nullopt;
        auto expected = c.literal();
        if (!expected) return std::nullopt;
        obs.expected = *expected;
        return obs;
    }

    std::optional<FixtureOp> parse_fixture_op(Cursor& c) {
        auto op = c.word();
        if (!op) return std::nullopt;
        FixtureOp fop;
        fop.op = *op;
        if (!c.eat('(')) return std::nullopt;
        if (c.eat(')')) return fop;
        for (;;) {
            auto arg = c.literal();
            if (!arg) return std::nullopt;
            fop.args.push_back(*arg);
            if (c.eat(',')) continue;
            if (c.eat(')')) return fop;
            return std::nullopt;
        }
    }
};

} // namespace

std::pair<TestModel, std::vector<ParseDiagnostic>>
load_test_model(const std::string& text, const ViewDocument& view) {
    TestModel model;
    ModelParser mp;

    std::istringstream in(text);
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        Cursor c(line);
        if (c.done()) continue;
        if (line[c.i] == '#') continue;

        if (c.eat_word("subject")) {
            c.skip_ws();
            size_t hash = line.find('#', c.i);
            if (hash == std::string::npos) {
                mp.error("T004", "subject must be Class#member", ln);
                continue;
            }
            std::string cls = line.substr(c.i, hash - c.i);
            std::string mem = line.substr(hash + 1);
            model.class_name = normalize_text(cls);
            model.member_name = normalize_text(mem);
            continue;
        }
        if (c.eat_word("fixture")) {
            auto name = c.word();
            if (!name || !c.eat(':')) {
                mp.error("T004", "fixture line must be 'fixture name: op(args); ...'", ln);
                continue;
            }
            Fixture f;
            f.name = *name;
            for (;;) {
                auto op = mp.parse_fixture_op(c);
                if (!op) {
                    mp.error("T004", "malformed fixture op", ln);
                    break;
                }
                f.ops.push_back(*op);
                if (c.eat(';')) continue;
                break;
            }
            if (!c.done()) mp.error("T004", "trailing text after fixture ops", ln);
            model.fixtures.push_back(std::move(f));
            continue;
        }
        if (c.eat_word("domain")) {
            auto name = c.word();
            if (!name || !c.eat(':')) {
                mp.error("T004", "domain line must start 'domain name: ...'", ln);
                continue;
            }
            Partition p;
            if (c.eat_word("boundary")) p.kind = PartitionKind::Boundary;
            else if (c.eat_word("equivalence")) p.kind = PartitionKind::Equivalence;
            else {
                mp.error("T004", "partition kind must be 'equivalence' or 'boundary'", ln);
                continue;
            }
            auto label = c.quoted();
            if (!label) {
                mp.error("T004", "partition label must be quoted", ln);
                continue;
            }
            p.label = *label;
            if (!c.eat('=')) {
                mp.error("T004", "expected '=' before the representative literal", ln);
                continue;
            }
            auto rep = c.literal();
            if (!rep) {
                mp.error("T004", "expected a representative literal", ln);
                continue;
            }
            p.representative = *rep;
            c.skip_ws();
            if (c.i + 1 < line.size() && line.compare(c.i, 2, "->") == 0) {
                c.i += 2;
                if (!c.eat_word("subspec")) {
                    mp.error("T004", "'->' must be followed by subspec \"label\"", ln);
                    continue;
                }
                auto sub = c.quoted();
                if (!sub) {
                    mp.error("T004", "subspec label must be quoted", ln);
                    continue;
                }
                p.maps_to_subspec = *sub;
            }
            if (c.eat_word("expect")) {
                for (;;) {
                    auto obs = mp.parse_observation(c);
                    if (!obs) {
                        mp.error("T004", "malformed observation, expected call(args) = literal", ln);
                        break;
                    }
                    p.expectations.push_back(*obs);
                    if (c.eat(',')) continue;
                    break;
                }
            }
            if (!c.done()) mp.error("T004", "trailing text on domain line", ln);

            auto dom = std::find_if(model.domains.begin(), model.domains.end(),
                                    [&](const Domain& d) { return d.name == *name; });
            if (dom == model.domains.end()) {
                model.domains.push_back(Domain{*name, false, {}});
                dom = model.domains.end() - 1;
            }
            bool dup = std::any_of(dom->partitions.begin(), dom->partitions.end(),
                                   [&](const Partition& q) { return q.label == p.label; });
            if (dup)
                mp.error("T006", "duplicate partition label '" + p.label +
                                     "' in domain '" + *name + "'", ln);
            else
                dom->partitions.push_back(std::move(p));
            continue;
        }
        mp.error("T004", "unrecognized line: '" + line + "'", ln);
    }

    // validate against the view
    const ClassUnit* cls = view.find_class(model.class_name);
    const Member* member = cls ? cls->find_member(model.member_name) : nullptr;
    if (model.class_name.empty()) {
        mp.error("T001", "model does not name a subject", 1);
    } else if (!member) {
        mp.error("T001", "unknown subject " + model.class_name + "#" + model.member_name, 1);
    } else {
        for (auto& d : model.domains) {
            d.is_parameter = std::any_of(member->signature.params.begin(),
                                         member->signature.params.end(),
                                         [&](const Param& p) { return p.name == d.name; });
        }
        for (const auto& p : member->signature.params) {
            bool covered = std::any_of(model.domains.begin(), model.domains.end(),
                                       [&](const Domain& d) {
                                           return d.name == p.name &&
                                                  !d.partitions.empty();
                                       });
            if (!covered)
                mp.error("T002", "parameter '" + p.name + "' has no partitions", 1);
        }
    }
    return {std::move(model), std::move(mp.diags)};
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

std::string test_name(const std::string& member, const std::string& case_label) {
    auto upper_camel = [](const std::string& s) {
        std::string out;
        bool word_start = true;
        for (char ch : s) {
            if (!std::isalnum(static_cast<unsigned char>(ch))) {
                word_start = true;
                continue;
            }
            if (word_start && std::isalpha(static_cast<unsigned char>(ch)))
                out += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
            else
                out += ch;
            word_start = false;
        }
        return out;
    };
    return "test" + upper_camel(member) + upper_camel(case_label);
}

std::pair<std::vector<TestCase>, std::vector<ParseDiagnostic>>
enumerate_cases(const TestModel& model, const ViewDocument& view) {
    std::vector<TestCase> cases;
    std::vector<ParseDiagnostic> diags;

    const ClassUnit* cls = view.find_class(model.class_name);
    const Member* member = cls ? cls->find_member(model.member_name) : nullptr;
    if (!member) {
        diags.push_back({Severity::Error, "T001",
                         "unknown subject " + model.class_name + "#" + model.member_name,
                         {1, 1, 1, 1}});
        return {cases, diags};
    }

    // the spec block the view exposes for this member
    const SpecBlock* spec = nullptr;
    if (view.kind == ViewKind::External) {
        if (member->external_spec) spec = &*member->external_spec;
    } else {
        if (member->internal_spec) spec = &*member->internal_spec;
        else if (member->external_spec) spec = &*member->external_spec;
    }

    auto find_subspec = [&](const std::string& label) -> const SubSpec* {
        if (!spec) return nullptr;
        for (const auto& s : spec->subspecs)
            if (s.label == label) return &s;
        return nullptr;
    };

    // T003 — every mapped label must exist in the governing spec
    for (const auto& d : model.domains)
        for (const auto& p : d.partitions)
            if (p.maps_to_subspec && !find_subspec(*p.maps_to_subspec))
                diags.push_back({Severity::Error, "T003",
                                 "partition '" + p.label +
                                     "' maps to unknown subspec label '" +
                                     *p.maps_to_subspec + "'",
                                 {1, 1, 1, 1}});

    if (model.domains.empty()) return {cases, diags};
    for (const auto& d : model.domains)
        if (d.partitions.empty()) return {cases, diags};

    std::string fixture_name = model.fixtures.empty() ? "default"
                                                      : model.fixtures.front().name;
    std::set<std::string> used_names;

    std::vector<size_t> idx(model.domains.size(), 0);
    for (;;) {
        std::vector<const Partition*> combo;
        combo.reserve(idx.size());
        for (size_t d = 0; d < idx.size(); ++d)
            combo.push_back(&model.domains[d].partitions[idx[d]]);

        TestCase tc;
        tc.fixture = fixture_name;

        for (const auto* p : combo) {
            if (p->maps_to_subspec && !tc.bound_subspec)
                tc.bound_subspec = p->maps_to_subspec;
        }

        // inputs in declared parameter order
        for (const auto& param : member->signature.params) {
            for (size_t d = 0; d < model.domains.size(); ++d) {
                if (model.domains[d].name == param.name && model.domains[d].is_parameter) {
                    tc.inputs.push_back(combo[d]->representative);
                    break;
                }
            }
        }

        std::string label;
        if (tc.bound_subspec) {
            label = *tc.bound_subspec;
        } else {
            for (const auto* p : combo) {
                if (!label.empty()) label += ' ';
                label += p->label;
            }
        }
        std::string base = test_name(model.member_name, label);
        std::string name = base;
        for (int ordinal = 2; used_names.count(name); ++ordinal)
            name = base + std::to_string(ordinal);
        used_names.insert(name);
        tc.name = name;

        const SubSpec* bound = tc.bound_subspec ? find_subspec(*tc.bound_subspec)
                                                : nullptr;
        if (bound && !bound->signals.empty()) {
            tc.expectation.is_exception = true;
            tc.expectation.exception_type = bound->signals.front().exception_type;
            tc.expectation.exception_message = bound->signals.front().message;
        } else {
            for (const auto* p : combo)
                for (const auto& obs : p->expectations)
                    tc.expectation.observations.push_back(obs);
        }
        if (bound) {
            for (const auto& c : bound->postconditions)
                tc.governing_postconditions.push_back(c.raw);
        } else if (spec) {
            for (const auto& c : spec->postconditions)
                tc.governing_postconditions.push_back(c.raw);
        }
        cases.push_back(std::move(tc));

        // odometer, last domain varying fastest
        size_t d = idx.size();
        bool carried = true;
        while (d-- > 0) {
            if (++idx[d] < model.domains[d].partitions.size()) {
                carried = false;
                break;
            }
            idx[d] = 0;
        }
        if (carried) break;
    }
    return {cases, diags};
}

// ---------------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------------

namespace {

using ordered_json = nlohmann::ordered_json;

std::string call_text(const std::string& receiver, const std::string& op,
                      const std::vector<std::string>& args) {
    std::string s = receiver + "." + op + "(";
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) s += ", ";
        s += args[i];
    }
    s += ")";
    return s;
}

std::string upper_camel_word(const std::string& s) {
    std::string out = s;
    if (!out.empty())
        out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

} // namespace

std::string emit_manifest(const TestModel& model, const std::vector<TestCase>& cases,
                          ViewKind view) {
    ordered_json j;
    j["schema_version"] = 1;
    j["subject"] = {{"class", model.class_name}, {"member", model.member_name}};
    j["view"] = to_string(view);
    j["coverage"] = "all-combinations";
    j["fixtures"] = ordered_json::array();
    for (const auto& f : model.fixtures) {
        ordered_json jf;
        jf["name"] = f.name;
        jf["ops"] = ordered_json::array();
        for (const auto& op : f.ops)
            jf["ops"].push_back({{"op", op.op}, {"args", op.args}});
        j["fixtures"].push_back(jf);
    }
    j["cases"] = ordered_json::array();
    for (const auto& tc : cases) {
        ordered_json jc;
        jc["name"] = tc.name;
        jc["fixture"] = tc.fixture;
        jc["inputs"] = tc.inputs;
        if (tc.bound_subspec) jc["bound_subspec"] = *tc.bound_subspec;
        else jc["bound_subspec"] = nullptr;
        ordered_json je;
        if (tc.expectation.is_exception) {
            je["kind"] = "exception";
            je["type"] = tc.expectation.exception_type;
            if (tc.expectation.exception_message)
                je["message"] = *tc.expectation.exception_message;
            else
                je["message"] = nullptr;
        } else {
            je["kind"] = "observations";
            je["observations"] = ordered_json::array();
            for (const auto& obs : tc.expectation.observations)
                je["observations"].push_back(
                    {{"call", obs.call}, {"args", obs.args}, {"expected", obs.expected}});
        }
        jc["expectation"] = je;
        j["cases"].push_back(jc);
    }
    return j.dump(2) + "\n";
}

std::string emit_skeletons(const TestModel& model, const std::vector<TestCase>& cases,
                           SkeletonStyle) {
    std::ostringstream out;
    std::string suite = model.class_name + upper_camel_word(model.member_name) + "Tests";
    out << "import org.junit.jupiter.api.Test;\n";
    out << "import static org.junit.jupiter.api.Assertions.*;\n";
    out << "\n";
    out << "/** Specification-derived tests for " << model.class_name << "#"
        << model.member_name << " (all-combinations coverage). */\n";
    out << "public class " << suite << " {\n";

    const Fixture* fixture = model.fixtures.empty() ? nullptr : &model.fixtures.front();
    std::string receiver = fixture ? fixture->name : "subject";

    for (const auto& tc : cases) {
        out << "\n";
        if (tc.bound_subspec)
            out << "    /** Covers subspec \"" << *tc.bound_subspec << "\". */\n";
        out << "    @Test\n";
        out << "    public void " << tc.name << "() {\n";
        out << "        " << model.class_name << " " << receiver << " = new "
            << model.class_name << "();\n";
        if (fixture)
            for (const auto& op : fixture->ops)
                out << "        " << call_text(receiver, op.op, op.args) << ";\n";
        std::string call = call_text(receiver, model.member_name, tc.inputs);
        if (tc.expectation.is_exception) {
            out << "        " << tc.expectation.exception_type << " thrown = assertThrows("
                << tc.expectation.exception_type << ".class,\n";
            out << "            () -> " << call << ");\n";
            if (tc.expectation.exception_message)
                out << "        assertEquals(\"" << *tc.expectation.exception_message
                    << "\", thrown.getMessage());\n";
        } else {
            out << "        " << call << ";\n";
            if (tc.expectation.observations.empty()) {
                for (const auto& post : tc.governing_postconditions)
                    out << "        // TODO: assert @ensures " << post << "\n";
                if (tc.governing_postconditions.empty())
                    out << "        // TODO: assert the specified behavior\n";
            } else {
                for (const auto& obs : tc.expectation.observations)
                    out << "        assertEquals(" << obs.expected << ", "
                        << call_text(receiver, obs.call, obs.args) << ");\n";
            }
        }
        out << "    }\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace good
