#include "good/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace good {

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// ---------------------------------------------------------------------------
// Clause expression mini-grammar
// ---------------------------------------------------------------------------

enum class TokKind { Int, Ident, Keyword, Op, End };

struct Token {
    TokKind kind = TokKind::End;
    std::string text;
    long long value = 0;
};

struct ExprLexer {
    std::vector<Token> tokens;
    bool ok = true;

    explicit ExprLexer(const std::string& s) {
        size_t i = 0;
        const size_t n = s.size();
        while (i < n) {
            char c = s[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                size_t j = i;
                while (j < n && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
                Token t{TokKind::Int, s.substr(i, j - i), 0};
                t.value = std::stoll(t.text);
                tokens.push_back(t);
                i = j;
                continue;
            }
            if (is_ident_start(c)) {
                size_t j = i;
                while (j < n && is_ident_char(s[j])) ++j;
                tokens.push_back({TokKind::Ident, s.substr(i, j - i), 0});
                i = j;
                continue;
            }
            if (c == '\\') {
                size_t j = i + 1;
                while (j < n && is_ident_char(s[j])) ++j;
                std::string kw = s.substr(i + 1, j - i - 1);
                static const std::array<const char*, 6> known = {
                    "forall", "exists", "num_of", "sum", "old", "result"};
                if (std::find(known.begin(), known.end(), kw) == known.end()) {
                    ok = false;
                    return;
                }
                tokens.push_back({TokKind::Keyword, kw, 0});
                i = j;
                continue;
            }
            // multi-char operators first
            static const std::array<const char*, 7> two = {"::", "||", "&&",
                                                           "==", "!=", "<=", ">="};
            bool matched = false;
            for (const char* op : two) {
                if (s.compare(i, 2, op) == 0) {
                    tokens.push_back({TokKind::Op, op, 0});
                    i += 2;
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            static const std::string singles = "|:=<>+-*/%!()[],.";
            if (singles.find(c) != std::string::npos) {
                tokens.push_back({TokKind::Op, std::string(1, c), 0});
                ++i;
                continue;
            }
            ok = false; // character outside the fragment
            return;
        }
        tokens.push_back({TokKind::End, "", 0});
    }
};

struct ExprParser {
    const std::vector<Token>& toks;
    size_t pos = 0;
    bool failed = false;

    explicit ExprParser(const std::vector<Token>& t) : toks(t) {}

    const Token& peek() const { return toks[pos]; }
    bool at_op(const std::string& op) const {
        return peek().kind == TokKind::Op && peek().text == op;
    }
    bool eat_op(const std::string& op) {
        if (!at_op(op)) return false;
        ++pos;
        return true;
    }
    ClauseExpr fail() {
        failed = true;
        return {};
    }

    ClauseExpr parse_or() {
        ClauseExpr lhs = parse_and();
        while (!failed && at_op("||")) {
            ++pos;
            ClauseExpr rhs = parse_and();
            ClauseExpr node;
            node.kind = ExprKind::Binary;
            node.name = "||";
            node.children = {std::move(lhs), std::move(rhs)};
            lhs = std::move(node);
        }
        return lhs;
    }

    ClauseExpr parse_and() {
        ClauseExpr lhs = parse_cmp();
        while (!failed && at_op("&&")) {
            ++pos;
            ClauseExpr rhs = parse_cmp();
            ClauseExpr node;
            node.kind = ExprKind::Binary;
            node.name = "&&";
            node.children = {std::move(lhs), std::move(rhs)};
            lhs = std::move(node);
        }
        return lhs;
    }

    static bool is_cmp(const Token& t) {
        if (t.kind != TokKind::Op) return false;
        return t.text == "=" || t.text == "==" || t.text == "!=" ||
               t.text == "<" || t.text == "<=" || t.text == ">" || t.text == ">=";
    }

    // Chained comparisons (0 <= i < n) become a conjunction of the pairwise
    // comparisons; "==" is normalized to "=".
    ClauseExpr parse_cmp() {
        ClauseExpr first = parse_additive();
        if (failed || !is_cmp(peek())) return first;
        std::vector<std::string> ops;
        std::vector<ClauseExpr> operands;
        operands.push_back(std::move(first));
        while (!failed && is_cmp(peek())) {
            std::string op = peek().text;
            if (op == "==") op = "=";
            ++pos;
            ops.push_back(op);
            operands.push_back(parse_additive());
        }
        if (failed) return {};
        ClauseExpr result;
        for (size_t i = 0; i < ops.size(); ++i) {
            ClauseExpr cmp;
            cmp.kind = ExprKind::Binary;
            cmp.name = ops[i];
            cmp.children = {operands[i], operands[i + 1]};
            if (i == 0) {
                result = std::move(cmp);
            } else {
                ClauseExpr conj;
                conj.kind = ExprKind::Binary;
                conj.name = "&&";
                conj.children = {std::move(result), std::move(cmp)};
                result = std::move(conj);
            }
        }
        return result;
    }

    ClauseExpr parse_additive() {
        ClauseExpr lhs = parse_mul();
        while (!failed && (at_op("+") || at_op("-"))) {
            std::string op = peek().text;
            ++pos;
            ClauseExpr rhs = parse_mul();
            ClauseExpr node;
            node.kind = ExprKind::Binary;
            node.name = op;
            node.children = {std::move(lhs), std::move(rhs)};
            lhs = std::move(node);
        }
        return lhs;
    }

    ClauseExpr parse_mul() {
        ClauseExpr lhs = parse_unary();
        while (!failed && (at_op("*") || at_op("/") || at_op("%"))) {
            std::string op = peek().text;
            ++pos;
            ClauseExpr rhs = parse_unary();
            ClauseExpr node;
            node.kind = ExprKind::Binary;
            node.name = op;
            node.children = {std::move(lhs), std::move(rhs)};
            lhs = std::move(node);
        }
        return lhs;
    }

    ClauseExpr parse_unary() {
        if (at_op("!") || at_op("-")) {
            std::string op = peek().text;
            ++pos;
            ClauseExpr node;
            node.kind = ExprKind::Unary;
            node.name = op;
            node.children = {parse_unary()};
            return node;
        }
        return parse_postfix();
    }

    ClauseExpr parse_postfix() {
        ClauseExpr e = parse_primary();
        while (!failed) {
            if (eat_op("(")) {
                ClauseExpr call;
                call.kind = ExprKind::Call;
                call.children.push_back(std::move(e));
                if (!at_op(")")) {
                    call.children.push_back(parse_or());
                    while (!failed && eat_op(","))
                        call.children.push_back(parse_or());
                }
                if (!eat_op(")")) return fail();
                e = std::move(call);
            } else if (eat_op("[")) {
                ClauseExpr idx;
                idx.kind = ExprKind::Index;
                idx.children.push_back(std::move(e));
                idx.children.push_back(parse_or());
                if (!eat_op("]")) return fail();
                e = std::move(idx);
            } else if (at_op(".")) {
                ++pos;
                if (peek().kind != TokKind::Ident) return fail();
                ClauseExpr fld;
                fld.kind = ExprKind::Field;
                fld.name = peek().text;
                ++pos;
                fld.children.push_back(std::move(e));
                e = std::move(fld);
            } else {
                break;
            }
        }
        return e;
    }

    ClauseExpr parse_primary() {
        const Token& t = peek();
        if (t.kind == TokKind::Int) {
            ClauseExpr e;
            e.kind = ExprKind::IntLit;
            e.value = t.value;
            e.name = t.text;
            ++pos;
            return e;
        }
        if (t.kind == TokKind::Ident) {
            ClauseExpr e;
            e.kind = ExprKind::Ident;
            e.name = t.text;
            ++pos;
            return e;
        }
        if (t.kind == TokKind::Keyword) {
            if (t.text == "result") {
                ++pos;
                ClauseExpr e;
                e.kind = ExprKind::Result;
                return e;
            }
            if (t.text == "old") {
                ++pos;
                if (!eat_op("(")) return fail();
                ClauseExpr e;
                e.kind = ExprKind::Old;
                e.children.push_back(parse_or());
                if (!eat_op(")")) return fail();
                return e;
            }
            return parse_quantifier();
        }
        if (eat_op("(")) {
            ClauseExpr e = parse_or();
            if (!eat_op(")")) return fail();
            return e;
        }
        return fail();
    }

    ClauseExpr parse_quantifier() {
        const Token& t = peek();
        QuantKind q;
        if (t.text == "forall") q = QuantKind::ForAll;
        else if (t.text == "exists") q = QuantKind::Exists;
        else if (t.text == "num_of") q = QuantKind::NumOf;
        else if (t.text == "sum") q = QuantKind::Sum;
        else return fail();
        ++pos;
        ClauseExpr e;
        e.kind = ExprKind::Quantifier;
        e.quant = q;
        if (peek().kind != TokKind::Ident) return fail();
        e.binder = peek().text;
        ++pos;
        if (eat_op(":")) {
            if (peek().kind != TokKind::Ident) return fail();
            e.binder_type = peek().text;
            ++pos;
        }
        if (eat_op("|")) {
            e.has_guard = true;
            e.children.push_back(parse_or());
        }
        if (!eat_op("::")) return fail();
        e.children.push_back(parse_or());
        return e;
    }
};

bool contains_backslash_form(const std::string& s) {
    for (size_t i = 0; i + 1 < s.size(); ++i)
        if (s[i] == '\\' && std::isalpha(static_cast<unsigned char>(s[i + 1])))
            return true;
    return false;
}

} // namespace

std::optional<ClauseExpr> parse_clause_expression(const std::string& raw) {
    ExprLexer lex(raw);
    if (!lex.ok || lex.tokens.size() <= 1) return std::nullopt;
    ExprParser p(lex.tokens);
    ClauseExpr e = p.parse_or();
    if (p.failed || p.peek().kind != TokKind::End) return std::nullopt;
    return e;
}

Clause make_clause(const std::string& raw) {
    Clause c;
    c.raw = normalize_text(raw);
    c.expr = parse_clause_expression(c.raw);
    if (c.expr) {
        c.formality = Formality::Formal;
    } else {
        c.formality = contains_backslash_form(c.raw) ? Formality::Mixed
                                                     : Formality::Informal;
    }
    return c;
}

// ---------------------------------------------------------------------------
// Tag grammar
// ---------------------------------------------------------------------------

namespace {

const std::array<const char*, 9> kKnownTags = {
    "desc", "inv", "requires", "ensures", "signals",
    "assignable", "pure", "represents", "sub"};

bool is_known_tag(const std::string& word) {
    return std::find(kKnownTags.begin(), kKnownTags.end(), word) != kKnownTags.end();
}

std::string strip_gutter(const std::string& line) {
    size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i < line.size() && line[i] == '*') {
        ++i;
        if (i < line.size() && line[i] == ' ') ++i;
    }
    return line.substr(i);
}

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

/// A leading `@word` after optional whitespace; returns the word and the
/// offset of the payload, or nullopt.
std::optional<std::pair<std::string, size_t>> leading_tag(const std::string& line) {
    size_t i = 0;
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i >= line.size() || line[i] != '@') return std::nullopt;
    size_t j = i + 1;
    while (j < line.size() && is_ident_char(line[j])) ++j;
    if (j == i + 1) return std::nullopt;
    std::string word = line.substr(i + 1, j - i - 1);
    while (j < line.size() && (line[j] == ' ' || line[j] == '\t')) ++j;
    return std::make_pair(word, j);
}

void split_identifier_list(const std::string& payload, std::vector<std::string>& out) {
    std::string cur;
    for (char c : payload) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
}

SignalClause parse_signal_payload(const std::string& payload) {
    SignalClause sc;
    size_t i = 0;
    while (i < payload.size() && is_ident_char(payload[i])) ++i;
    sc.exception_type = payload.substr(0, i);
    while (i < payload.size() && std::isspace(static_cast<unsigned char>(payload[i]))) ++i;
    if (i < payload.size() && payload[i] == '(') {
        size_t depth = 0;
        size_t start = i;
        size_t end = std::string::npos;
        bool in_str = false;
        for (size_t j = i; j < payload.size(); ++j) {
            char c = payload[j];
            if (in_str) {
                if (c == '\\') ++j;
                else if (c == '"') in_str = false;
                continue;
            }
            if (c == '"') in_str = true;
            else if (c == '(') ++depth;
            else if (c == ')') {
                if (--depth == 0) {
                    end = j;
                    break;
                }
            }
        }
        if (end != std::string::npos) {
            std::string interior = trim(payload.substr(start + 1, end - start - 1));
            if (interior.size() >= 2 && interior.front() == '"' && interior.back() == '"')
                interior = interior.substr(1, interior.size() - 2);
            if (!interior.empty()) sc.message = interior;
            i = end + 1;
        }
    }
    std::string rest = trim(payload.substr(std::min(i, payload.size())));
    if (!rest.empty()) sc.condition = make_clause(rest);
    return sc;
}

struct SpecBlockBuilder {
    SpecBlock block;
    std::vector<ParseDiagnostic> diags;
    std::vector<std::string> desc_parts;

    void warn(const std::string& code, const std::string& msg, int line) {
        diags.push_back({Severity::Warning, code, msg, {line, 1, line, 1}});
    }
    void error(const std::string& code, const std::string& msg, int line) {
        diags.push_back({Severity::Error, code, msg, {line, 1, line, 1}});
    }

    void add_flat(const std::string& tag, const std::string& payload, int line) {
        std::string text = normalize_text(payload);
        if (text.empty() && tag != "pure") {
            warn("P010", "@" + tag + " with empty payload dropped", line);
            return;
        }
        if (tag == "desc") desc_parts.push_back(text);
        else if (tag == "inv") block.invariants.push_back(make_clause(text));
        else if (tag == "requires") block.preconditions.push_back(make_clause(text));
        else if (tag == "ensures") block.postconditions.push_back(make_clause(text));
        else if (tag == "represents") block.represents.push_back(make_clause(text));
        else if (tag == "signals") block.signals.push_back(parse_signal_payload(text));
        else if (tag == "assignable") split_identifier_list(text, block.assignable);
        else if (tag == "pure") block.pure = true;
    }

    void add_sub(SubSpec& sub, const std::string& tag, const std::string& payload,
                 int line) {
        std::string text = normalize_text(payload);
        if (text.empty()) {
            warn("P010", "@" + tag + " with empty payload dropped", line);
            return;
        }
        if (tag == "requires") sub.preconditions.push_back(make_clause(text));
        else if (tag == "ensures") sub.postconditions.push_back(make_clause(text));
        else if (tag == "signals") sub.signals.push_back(parse_signal_payload(text));
        else if (tag == "assignable") split_identifier_list(text, sub.assignable);
        else warn("P012", "@" + tag + " is not allowed inside a @sub block", line);
    }

    SpecBlock finish() {
        if (!desc_parts.empty()) {
            std::string joined;
            for (const auto& p : desc_parts) {
                if (!joined.empty()) joined += ' ';
                joined += p;
            }
            block.desc = make_clause(joined);
        }
        return block;
    }
};

} // namespace

std::pair<SpecBlock, std::vector<ParseDiagnostic>>
parse_spec_block(const std::string& comment) {
    SpecBlockBuilder b;

    // Gutter-stripped lines, 1-based.
    std::vector<std::string> lines;
    {
        std::string cur;
        for (size_t i = 0; i <= comment.size(); ++i) {
            if (i == comment.size() || comment[i] == '\n') {
                if (!cur.empty() && cur.back() == '\r') cur.pop_back();
                lines.push_back(strip_gutter(cur));
                cur.clear();
            } else {
                cur += comment[i];
            }
        }
    }

    // Current flat tag line under construction.
    TagLine cur;
    bool have_tag = false;
    auto flush_flat = [&] {
        if (have_tag) {
            std::string payload = cur.payload;
            for (const auto& cont : cur.continuation_lines) {
                payload += ' ';
                payload += cont;
            }
            b.add_flat(cur.tag, payload, cur.line);
        }
        have_tag = false;
        cur = TagLine{};
    };

    // Subspec scanning state.
    bool in_sub = false;
    SubSpec sub;
    std::string sub_tag, sub_payload;
    int sub_tag_line = 0;
    bool have_sub_tag = false;
    auto flush_sub_tag = [&] {
        if (have_sub_tag) b.add_sub(sub, sub_tag, sub_payload, sub_tag_line);
        have_sub_tag = false;
        sub_tag.clear();
        sub_payload.clear();
    };
    auto close_sub = [&](int line) {
        flush_sub_tag();
        if (sub.label.empty())
            b.warn("P010", "@sub with empty label", line);
        b.block.subspecs.push_back(std::move(sub));
        sub = SubSpec{};
        in_sub = false;
    };

    // Inside a @sub block tags may start mid-segment (the blocks hold nothing
    // but tags, so a known `@word` is unambiguous there). Returns consumed
    // prefix length up to the stop point.
    auto scan_sub_segment = [&](const std::string& seg, int line) {
        size_t i = 0;
        while (i < seg.size()) {
            char c = seg[i];
            if (c == '}') {
                close_sub(line);
                return i + 1;
            }
            if (c == '@') {
                size_t j = i + 1;
                while (j < seg.size() && is_ident_char(seg[j])) ++j;
                std::string word = seg.substr(i + 1, j - i - 1);
                bool at_boundary = i == 0 ||
                                   std::isspace(static_cast<unsigned char>(seg[i - 1]));
                if (at_boundary && is_known_tag(word)) {
                    flush_sub_tag();
                    if (word == "sub") {
                        // nested @sub is not a thing; close and reopen
                        b.warn("P012", "@sub is not allowed inside a @sub block", line);
                        i = j;
                        continue;
                    }
                    have_sub_tag = true;
                    sub_tag = word;
                    sub_tag_line = line;
                    while (j < seg.size() && (seg[j] == ' ' || seg[j] == '\t')) ++j;
                    i = j;
                    continue;
                }
            }
            if (have_sub_tag) sub_payload += c;
            ++i;
        }
        if (have_sub_tag) sub_payload += ' ';
        return seg.size();
    };

    for (size_t li = 0; li < lines.size(); ++li) {
        const std::string& line = lines[li];
        int ln = static_cast<int>(li) + 1;
        size_t offset = 0;
        if (in_sub) {
            offset = scan_sub_segment(line, ln);
            if (offset >= line.size()) continue;
            // fall through: text remaining on the line after the closing '}'
        }
        std::string rest = line.substr(offset);
        auto tag = leading_tag(rest);
        while (tag) {
            if (!is_known_tag(tag->first)) {
                flush_flat();
                b.warn("P004", "unknown tag @" + tag->first, ln);
                break; // skip the line (continuations belong to nothing)
            }
            if (tag->first == "sub") {
                flush_flat();
                std::string payload = rest.substr(tag->second);
                size_t brace = payload.find('{');
                if (brace == std::string::npos) {
                    b.error("P003", "@sub without an opening '{' on the same line", ln);
                    break;
                }
                in_sub = true;
                sub = SubSpec{};
                sub.label = trim(payload.substr(0, brace));
                size_t consumed = scan_sub_segment(payload.substr(brace + 1), ln);
                if (in_sub || brace + 1 + consumed >= payload.size()) break;
                // single-line sub followed by more text (e.g. another @sub)
                rest = trim(payload.substr(brace + 1 + consumed));
                tag = leading_tag(rest);
                continue;
            }
            flush_flat();
            have_tag = true;
            cur.tag = tag->first;
            cur.payload = rest.substr(tag->second);
            cur.line = ln;
            break;
        }
        if (tag) continue;
        std::string text = trim(rest);
        if (text.empty()) continue;
        if (have_tag) {
            cur.continuation_lines.push_back(text);
        } else if (!in_sub) {
            b.desc_parts.push_back(normalize_text(text));
        }
    }
    if (in_sub) {
        b.error("P003", "@sub block not closed before end of comment",
                static_cast<int>(lines.size()));
        close_sub(static_cast<int>(lines.size()));
    }
    flush_flat();
    return {b.finish(), std::move(b.diags)};
}

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

namespace {

/// A type-ish token: dotted identifier with optional generic arguments and
/// array suffixes, captured verbatim.
std::optional<std::string> scan_typeish(const std::string& s, size_t& i) {
    size_t start = i;
    if (i >= s.size() || !is_ident_start(s[i])) return std::nullopt;
    while (i < s.size() && is_ident_char(s[i])) ++i;
    while (i < s.size() && s[i] == '.') {
        size_t j = i + 1;
        if (j >= s.size() || !is_ident_start(s[j])) break;
        i = j;
        while (i < s.size() && is_ident_char(s[i])) ++i;
    }
    if (i < s.size() && s[i] == '<') {
        int depth = 0;
        size_t j = i;
        for (; j < s.size(); ++j) {
            if (s[j] == '<') ++depth;
            else if (s[j] == '>' && --depth == 0) {
                ++j;
                break;
            }
        }
        if (depth != 0) return std::nullopt;
        i = j;
    }
    while (i + 1 < s.size() && s[i] == '[' && s[i + 1] == ']') i += 2;
    return s.substr(start, i - start);
}

void skip_ws(const std::string& s, size_t& i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

bool is_modifier(const std::string& w) {
    static const std::array<const char*, 9> mods = {
        "public", "private", "protected", "static", "final",
        "abstract", "synchronized", "native", "transient"};
    return std::find(mods.begin(), mods.end(), w) != mods.end();
}

} // namespace

SignatureResult parse_signature(const std::string& decl) {
    SignatureResult r;
    std::string s = trim(decl);
    if (!s.empty() && s.back() == '{') s = trim(s.substr(0, s.size() - 1));
    bool had_semicolon = false;
    if (!s.empty() && s.back() == ';') {
        had_semicolon = true;
        s = trim(s.substr(0, s.size() - 1));
    }
    if (s.empty()) {
        r.error = "empty declaration";
        return r;
    }

    size_t i = 0;
    // modifiers
    for (;;) {
        skip_ws(s, i);
        size_t save = i;
        size_t j = i;
        while (j < s.size() && is_ident_char(s[j])) ++j;
        std::string word = s.substr(i, j - i);
        if (!is_modifier(word)) {
            i = save;
            break;
        }
        if (word == "public") r.visibility = Visibility::Public;
        else if (word == "private") r.visibility = Visibility::Private;
        else if (word == "protected") r.visibility = Visibility::Package;
        i = j;
    }
    skip_ws(s, i);
    auto first = scan_typeish(s, i);
    if (!first) {
        r.error = "expected a type or name";
        return r;
    }
    skip_ws(s, i);

    auto split_name = [](const std::string& tok, std::string& base, std::string& suffix) {
        size_t lt = tok.find('<');
        if (lt == std::string::npos) {
            base = tok;
            suffix.clear();
        } else {
            base = tok.substr(0, lt);
            suffix = tok.substr(lt);
        }
    };

    auto parse_params = [&](std::vector<Param>& out) -> bool {
        ++i; // '('
        skip_ws(s, i);
        if (i < s.size() && s[i] == ')') {
            ++i;
            return true;
        }
        for (;;) {
            skip_ws(s, i);
            auto ptype = scan_typeish(s, i);
            if (!ptype) return false;
            skip_ws(s, i);
            size_t j = i;
            while (j < s.size() && is_ident_char(s[j])) ++j;
            if (j == i) return false;
            std::string pname = s.substr(i, j - i);
            i = j;
            out.push_back({pname, TypeRef{*ptype}});
            skip_ws(s, i);
            if (i < s.size() && s[i] == ',') {
                ++i;
                continue;
            }
            if (i < s.size() && s[i] == ')') {
                ++i;
                return true;
            }
            return false;
        }
    };

    if (i < s.size() && s[i] == '(') {
        // constructor: a single type-ish token before the parameter list
        r.kind = MemberKind::Constructor;
        split_name(*first, r.signature.name, r.signature.name_suffix);
        if (!parse_params(r.signature.params)) {
            r.error = "malformed parameter list";
            return r;
        }
        skip_ws(s, i);
        if (i != s.size()) {
            r.error = "unexpected text after parameter list";
            return r;
        }
        // parameter names must be unique
        for (size_t a = 0; a < r.signature.params.size(); ++a)
            for (size_t c = a + 1; c < r.signature.params.size(); ++c)
                if (r.signature.params[a].name == r.signature.params[c].name) {
                    r.error = "duplicate parameter name '" +
                              r.signature.params[a].name + "'";
                    return r;
                }
        r.ok = true;
        return r;
    }

    auto second = scan_typeish(s, i);
    if (!second) {
        r.error = "expected a member name after the type";
        return r;
    }
    skip_ws(s, i);

    if (i < s.size() && s[i] == '(') {
        r.kind = MemberKind::Method;
        if (second->find('<') != std::string::npos ||
            second->find('.') != std::string::npos) {
            r.error = "method name must be a plain identifier";
            return r;
        }
        r.signature.name = *second;
        r.signature.return_type = TypeRef{*first};
        if (!parse_params(r.signature.params)) {
            r.error = "malformed parameter list";
            return r;
        }
        skip_ws(s, i);
        if (i != s.size()) {
            r.error = "unexpected text after parameter list";
            return r;
        }
        for (size_t a = 0; a < r.signature.params.size(); ++a)
            for (size_t c = a + 1; c < r.signature.params.size(); ++c)
                if (r.signature.params[a].name == r.signature.params[c].name) {
                    r.error = "duplicate parameter name '" +
                              r.signature.params[a].name + "'";
                    return r;
                }
        r.ok = true;
        return r;
    }

    // attribute: Type name [= initializer] ;
    r.kind = MemberKind::Attribute;
    if (second->find('<') != std::string::npos ||
        second->find('.') != std::string::npos) {
        r.error = "attribute name must be a plain identifier";
        return r;
    }
    r.signature.name = *second;
    r.signature.declared_type = TypeRef{*first};
    skip_ws(s, i);
    if (i < s.size() && s[i] == '=') {
        i = s.size(); // initializer text is dropped (normalization)
    }
    if (i != s.size()) {
        r.error = "unexpected text after attribute name";
        return r;
    }
    if (!had_semicolon) {
        r.error = "attribute declaration must end with ';'";
        return r;
    }
    r.ok = true;
    return r;
}

// ---------------------------------------------------------------------------
// Master document
// ---------------------------------------------------------------------------

namespace {

struct ClassHeader {
    bool ok = false;
    std::string name;
    std::vector<std::string> type_params;
    bool open_brace = false;
};

ClassHeader parse_class_header(const std::string& text) {
    ClassHeader h;
    std::string s = trim(text);
    size_t i = 0;
    bool saw_class = false;
    for (;;) {
        skip_ws(s, i);
        size_t j = i;
        while (j < s.size() && is_ident_char(s[j])) ++j;
        std::string word = s.substr(i, j - i);
        if (word == "class") {
            saw_class = true;
            i = j;
            break;
        }
        if (!is_modifier(word)) return h;
        i = j;
    }
    if (!saw_class) return h;
    skip_ws(s, i);
    size_t j = i;
    while (j < s.size() && is_ident_char(s[j])) ++j;
    if (j == i) return h;
    h.name = s.substr(i, j - i);
    i = j;
    skip_ws(s, i);
    if (i < s.size() && s[i] == '<') {
        size_t depth = 0;
        size_t start = i + 1;
        for (; i < s.size(); ++i) {
            if (s[i] == '<') ++depth;
            else if (s[i] == '>' && --depth == 0) break;
        }
        if (i >= s.size()) return h;
        std::string params = s.substr(start, i - start);
        ++i;
        split_identifier_list(params, h.type_params);
    }
    skip_ws(s, i);
    if (i < s.size() && s[i] == '{') {
        h.open_brace = true;
        ++i;
        skip_ws(s, i);
    }
    if (i != s.size()) return h;
    h.ok = h.open_brace; // the body must open on the header line
    return h;
}

/// Brace balance of a raw code line, ignoring string/char literals and
/// comments. `in_block_comment` carries /* */ state across lines.
int brace_delta(const std::string& line, bool& in_block_comment) {
    int delta = 0;
    bool in_str = false, in_chr = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_block_comment) {
            if (c == '*' && i + 1 < line.size() && line[i + 1] == '/') {
                in_block_comment = false;
                ++i;
            }
            continue;
        }
        if (in_str) {
            if (c == '\\') ++i;
            else if (c == '"') in_str = false;
            continue;
        }
        if (in_chr) {
            if (c == '\\') ++i;
            else if (c == '\'') in_chr = false;
            continue;
        }
        if (c == '"') in_str = true;
        else if (c == '\'') in_chr = true;
        else if (c == '/' && i + 1 < line.size() && line[i + 1] == '/') break;
        else if (c == '/' && i + 1 < line.size() && line[i + 1] == '*') {
            in_block_comment = true;
            ++i;
        } else if (c == '{') ++delta;
        else if (c == '}') --delta;
    }
    return delta;
}

struct MasterParser {
    std::vector<std::string> lines;
    MasterDocument doc;
    std::vector<ParseDiagnostic> diags;

    // pending forward doc comment
    bool have_pending = false;
    SpecBlock pending;
    int pending_begin = 0, pending_end = 0;
    bool pending_is_class_internal_candidate = false;

    ClassUnit* cls = nullptr;
    int class_open_line = 0;

    // open member window for backward (internal) comment / body attachment
    Member* open_member = nullptr;
    std::string open_member_id;
    int open_member_decl_end = 0;
    bool open_member_wants_internal = false;
    bool open_member_wants_body = false;

    void error(const std::string& code, const std::string& msg, int line, int col = 1) {
        diags.push_back({Severity::Error, code, msg, {line, col, line, col}});
    }
    void warn(const std::string& code, const std::string& msg, int line, int col = 1) {
        diags.push_back({Severity::Warning, code, msg, {line, col, line, col}});
    }

    void drop_pending(const char* why) {
        if (!have_pending) return;
        if (pending_is_class_internal_candidate && cls) {
            commit_class_internal();
            return;
        }
        warn("P011", std::string("dangling doc comment (") + why + ")", pending_begin);
        have_pending = false;
    }

    void commit_class_internal() {
        if (!have_pending || !cls) return;
        if (cls->internal_spec) {
            warn("P006", "extra class-level spec comment ignored", pending_begin);
        } else {
            cls->internal_spec = std::move(pending);
            doc.source_spans[cls->name + "#internal"] = {pending_begin, 1, pending_end, 1};
        }
        have_pending = false;
        pending_is_class_internal_candidate = false;
    }

    void on_doc_comment(SpecBlock&& block, int begin_line, int end_line) {
        // Backward attachment: the comment starts right after a body-less
        // constructor/method declaration.
        if (open_member && open_member_wants_internal &&
            begin_line <= open_member_decl_end + 1) {
            if (open_member->internal_spec) {
                warn("P006", "extra spec comment ignored", begin_line);
            } else {
                open_member->internal_spec = std::move(block);
                doc.source_spans[open_member_id + "#internal"] =
                    {begin_line, 1, end_line, 1};
            }
            open_member_wants_internal = false;
            return;
        }
        if (have_pending) {
            if (pending_is_class_internal_candidate) commit_class_internal();
            else drop_pending("superseded by a later comment");
        }
        pending = std::move(block);
        pending_begin = begin_line;
        pending_end = end_line;
        have_pending = true;
        pending_is_class_internal_candidate =
            cls != nullptr && cls->members.empty() && !cls->internal_spec &&
            begin_line == class_open_line + 1;
    }

    // Takes the pending comment for a declaration at `decl_line`, resolving
    // the class-internal candidate: a candidate directly followed by a
    // declaration belongs to the declaration.
    std::optional<SpecBlock> take_pending_for_decl(int decl_line) {
        if (!have_pending) return std::nullopt;
        if (pending_is_class_internal_candidate && decl_line > pending_end + 1) {
            commit_class_internal();
            return std::nullopt;
        }
        have_pending = false;
        pending_is_class_internal_candidate = false;
        return std::move(pending);
    }

    void close_member_window() {
        open_member = nullptr;
        open_member_wants_internal = false;
        open_member_wants_body = false;
    }

    void finish_class(int line) {
        if (!cls) return;
        if (have_pending) {
            if (pending_is_class_internal_candidate) commit_class_internal();
            else drop_pending("no declaration follows");
        }
        auto span = doc.source_spans.find(cls->name);
        if (span != doc.source_spans.end()) span->second.end_line = line;
        cls = nullptr;
        close_member_window();
    }
};

} // namespace

bool ParseResult::has_errors() const {
    return std::any_of(diagnostics.begin(), diagnostics.end(),
                       [](const ParseDiagnostic& d) { return d.severity == Severity::Error; });
}

ParseResult parse_master(const std::string& source, const std::string& source_name) {
    MasterParser mp;
    mp.doc.source_name = source_name;

    // split into lines, normalizing CRLF
    {
        std::string cur;
        for (size_t i = 0; i <= source.size(); ++i) {
            if (i == source.size()) {
                if (!cur.empty() || !mp.lines.empty()) mp.lines.push_back(cur);
            } else if (source[i] == '\n') {
                if (!cur.empty() && cur.back() == '\r') cur.pop_back();
                mp.lines.push_back(cur);
                cur.clear();
            } else {
                cur += source[i];
            }
        }
    }

    enum class Mode { Code, BlockComment, DocComment, Body, SkipBlock };
    Mode mode = Mode::Code;
    std::string doc_buf;
    int doc_begin = 0;
    std::vector<std::string> body_lines;
    int body_balance = 0;
    bool body_comment_state = false;
    int skip_balance = 0;
    bool skip_comment_state = false;

    auto finish_body = [&]() {
        std::string text;
        for (size_t i = 0; i < body_lines.size(); ++i) {
            if (i) text += '\n';
            text += body_lines[i];
        }
        if (mp.open_member) {
            mp.open_member->body = normalize_block(text);
        }
        body_lines.clear();
        mp.close_member_window();
    };

    for (size_t li = 0; li < mp.lines.size(); ++li) {
        const std::string& raw = mp.lines[li];
        int ln = static_cast<int>(li) + 1;

        if (mode == Mode::Body) {
            body_lines.push_back(raw);
            body_balance += brace_delta(raw, body_comment_state);
            if (body_balance <= 0) {
                finish_body();
                mode = Mode::Code;
            }
            continue;
        }
        if (mode == Mode::SkipBlock) {
            skip_balance += brace_delta(raw, skip_comment_state);
            if (skip_balance <= 0) mode = Mode::Code;
            continue;
        }
        if (mode == Mode::BlockComment) {
            size_t close = raw.find("*/");
            if (close != std::string::npos) mode = Mode::Code;
            continue;
        }
        if (mode == Mode::DocComment) {
            size_t close = raw.find("*/");
            if (close != std::string::npos) {
                doc_buf += raw.substr(0, close);
                auto [block, bdiags] = parse_spec_block(doc_buf);
                for (auto d : bdiags) {
                    d.span.begin_line += doc_begin - 1;
                    d.span.end_line += doc_begin - 1;
                    mp.diags.push_back(d);
                }
                mp.on_doc_comment(std::move(block), doc_begin, ln);
                doc_buf.clear();
                mode = Mode::Code;
                // anything after */ on this line is ignored apart from braces
            } else {
                doc_buf += raw;
                doc_buf += '\n';
            }
            continue;
        }

        // Mode::Code — strip comments, find code text
        std::string code;
        bool entered_doc = false;
        for (size_t i = 0; i < raw.size(); ++i) {
            char c = raw[i];
            if (c == '/' && i + 1 < raw.size() && raw[i + 1] == '/') break;
            if (c == '/' && i + 1 < raw.size() && raw[i + 1] == '*') {
                bool is_doc = i + 2 < raw.size() && raw[i + 2] == '*' &&
                              !(i + 3 < raw.size() && raw[i + 3] == '/');
                size_t close = raw.find("*/", i + 2);
                if (close != std::string::npos) {
                    if (is_doc) {
                        std::string interior = raw.substr(i + 3, close - i - 3);
                        auto [block, bdiags] = parse_spec_block(interior);
                        for (auto d : bdiags) {
                            d.span.begin_line += ln - 1;
                            d.span.end_line += ln - 1;
                            mp.diags.push_back(d);
                        }
                        mp.on_doc_comment(std::move(block), ln, ln);
                    }
                    i = close + 1;
                    continue;
                }
                if (is_doc) {
                    doc_buf = raw.substr(i + 3);
                    doc_buf += '\n';
                    doc_begin = ln;
                    mode = Mode::DocComment;
                } else {
                    mode = Mode::BlockComment;
                }
                entered_doc = true;
                break;
            }
            code += c;
        }
        std::string text = trim(code);
        if (text.empty()) {
            if (!entered_doc && mode == Mode::Code) {
                // blank line: a pending class-internal candidate is confirmed
                if (mp.have_pending && mp.pending_is_class_internal_candidate &&
                    ln > mp.pending_end)
                    mp.commit_class_internal();
                if (mp.open_member && ln > mp.open_member_decl_end)
                    mp.open_member_wants_internal = false;
            }
            continue;
        }

        if (!mp.cls) {
            ClassHeader h = parse_class_header(text);
            if (!h.ok) {
                mp.error("P002", "expected a class declaration: '" + text + "'", ln);
                bool cstate = false;
                int delta = brace_delta(raw, cstate);
                if (delta > 0) {
                    mode = Mode::SkipBlock;
                    skip_balance = delta;
                    skip_comment_state = cstate;
                }
                continue;
            }
            if (mp.doc.find_class(h.name)) {
                mp.error("P009", "duplicate class name '" + h.name + "' (skipped)", ln);
                mode = Mode::SkipBlock;
                skip_balance = 1;
                skip_comment_state = false;
                continue;
            }
            mp.doc.classes.push_back(ClassUnit{});
            mp.cls = &mp.doc.classes.back();
            mp.cls->name = h.name;
            mp.cls->type_params = h.type_params;
            mp.class_open_line = ln;
            if (auto ext = mp.take_pending_for_decl(ln)) {
                mp.cls->external_spec = std::move(*ext);
                mp.doc.source_spans[h.name + "#external"] =
                    {mp.pending_begin, 1, mp.pending_end, 1};
            }
            mp.doc.source_spans[h.name] = {ln, 1, ln, 1};
            continue;
        }

        // inside a class
        if (text == "}") {
            mp.finish_class(ln);
            continue;
        }

        // body opener for the open member
        if (text[0] == '{') {
            if (mp.open_member && mp.open_member_wants_body) {
                mp.open_member_wants_internal = false;
                size_t brace_col = raw.find('{');
                std::string tail = raw.substr(brace_col);
                body_lines.clear();
                body_lines.push_back(tail);
                body_comment_state = false;
                bool cstate = false;
                body_balance = brace_delta(tail, cstate);
                body_comment_state = cstate;
                if (body_balance <= 0) {
                    finish_body();
                } else {
                    mode = Mode::Body;
                }
            } else {
                mp.error("P002", "unexpected '{'", ln);
                bool cstate = false;
                int delta = brace_delta(raw, cstate);
                if (delta > 0) {
                    mode = Mode::SkipBlock;
                    skip_balance = delta;
                    skip_comment_state = cstate;
                }
            }
            continue;
        }

        // member declaration; a body may open on the same line
        std::string decl_text = text;
        std::string body_tail;
        size_t brace_pos = text.find('{');
        if (brace_pos != std::string::npos) {
            decl_text = trim(text.substr(0, brace_pos));
            body_tail = text.substr(brace_pos);
        }

        SignatureResult sig = parse_signature(decl_text);
        if (!sig.ok) {
            // maybe a nested class or garbage
            mp.error("P002", "malformed declaration: '" + decl_text + "' (" + sig.error + ")", ln);
            bool cstate = false;
            int delta = brace_delta(raw, cstate);
            if (delta > 0) {
                mode = Mode::SkipBlock;
                skip_balance = delta;
                skip_comment_state = cstate;
            }
            mp.drop_pending("declaration it preceded was skipped");
            continue;
        }
        if (sig.kind == MemberKind::Constructor && sig.signature.name != mp.cls->name) {
            mp.error("P002",
                     "malformed declaration: '" + decl_text +
                         "' (missing return type, or constructor name does not match class)",
                     ln);
            mp.drop_pending("declaration it preceded was skipped");
            continue;
        }

        Member m;
        m.kind = sig.kind;
        m.visibility = sig.visibility;
        m.signature = std::move(sig.signature);

        // duplicate (name, parameter types)?
        std::string key = member_key(m);
        bool dup = std::any_of(mp.cls->members.begin(), mp.cls->members.end(),
                               [&](const Member& other) { return member_key(other) == key; });
        if (dup) {
            mp.error("P008", "duplicate member signature '" + key + "' (skipped)", ln);
            mp.drop_pending("declaration it preceded was skipped");
            continue;
        }

        mp.close_member_window();
        if (auto spec = mp.take_pending_for_decl(ln)) {
            // Public members: the preceding comment is the external spec.
            // Private/package members never appear externally, so theirs is
            // the internal spec (the §3 attribute convention).
            if (m.visibility == Visibility::Public)
                m.external_spec = std::move(spec);
            else
                m.internal_spec = std::move(spec);
        }
        if (m.kind == MemberKind::Attribute && m.internal_spec &&
            !m.internal_spec->preconditions.empty()) {
            mp.warn("P005", "@requires inside an attribute spec", ln);
        }
        if (m.kind == MemberKind::Attribute && m.external_spec &&
            !m.external_spec->preconditions.empty()) {
            mp.warn("P005", "@requires inside an attribute spec", ln);
        }

        mp.cls->members.push_back(std::move(m));
        Member* stored = &mp.cls->members.back();
        std::string mid = mp.cls->name + "." + key;
        mp.doc.source_spans[mid] = {ln, 1, ln, 1};
        if (stored->external_spec)
            mp.doc.source_spans[mid + "#external"] = {ln, 1, ln, 1};
        if (stored->internal_spec)
            mp.doc.source_spans[mid + "#internal"] = {ln, 1, ln, 1};

        mp.open_member = stored;
        mp.open_member_id = mid;
        mp.open_member_decl_end = ln;
        mp.open_member_wants_internal = stored->kind != MemberKind::Attribute;
        mp.open_member_wants_body = stored->kind != MemberKind::Attribute;

        if (!body_tail.empty()) {
            mp.open_member_wants_internal = false;
            body_lines.clear();
            body_lines.push_back(body_tail);
            bool cstate = false;
            body_balance = brace_delta(body_tail, cstate);
            body_comment_state = cstate;
            if (body_balance <= 0) {
                finish_body();
            } else {
                mode = Mode::Body;
            }
        }
    }

    bool eof_unclosed = false;
    if (mode == Mode::DocComment) {
        mp.error("P001", "unterminated comment", doc_begin);
    } else if (mode == Mode::BlockComment) {
        mp.error("P001", "unterminated comment", static_cast<int>(mp.lines.size()));
    } else if (mode == Mode::Body || mode == Mode::SkipBlock) {
        eof_unclosed = true;
        if (mode == Mode::Body) finish_body();
    }
    if (mp.cls) {
        eof_unclosed = true;
        mp.finish_class(static_cast<int>(mp.lines.size()));
    } else if (mp.have_pending) {
        mp.drop_pending("no declaration follows");
    }
    if (eof_unclosed)
        mp.warn("P007", "class body not closed at end of file",
                static_cast<int>(mp.lines.size()));

    return {std::move(mp.doc), std::move(mp.diags)};
}

} // namespace good
