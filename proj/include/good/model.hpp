// Document/spec/view data model shared by every other component. No I/O here;
// all types are plain values, immutable by convention once built.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace good {

enum class ViewKind { External, Internal, Code };
enum class Visibility { Public, Private, Package };
enum class MemberKind { Constructor, Method, Attribute };
enum class Formality { Informal, Formal, Mixed };
enum class Severity { Error, Warning };

const char* to_string(ViewKind k);
const char* to_string(Visibility v);
const char* to_string(MemberKind k);
const char* to_string(Formality f);
const char* to_string(Severity s);

std::optional<ViewKind> view_kind_from_string(const std::string& s);

/// Half-open is not used anywhere: lines and columns are 1-based and inclusive.
struct SourceSpan {
    int begin_line = 0;
    int begin_col = 0;
    int end_line = 0;
    int end_col = 0;

    bool operator==(const SourceSpan&) const = default;
};

// ---------------------------------------------------------------------------
// Clause expressions
// ---------------------------------------------------------------------------

enum class ExprKind {
    IntLit,     // value
    Ident,      // name
    Result,     // \result
    Old,        // \old(children[0])
    Call,       // children[0] = callee, children[1..] = arguments
    Field,      // children[0].name
    Index,      // children[0][children[1]]
    Unary,      // name = operator, children[0]
    Binary,     // name = operator, children[0], children[1]
    Quantifier, // binder/binder_type/quant; children = [guard,] body
};

enum class QuantKind { ForAll, Exists, NumOf, Sum };

/// Expression tree for the formal fragment of clause payloads. Quantifier
/// nodes always have a binder and a body; the guard is optional.
struct ClauseExpr {
    ExprKind kind = ExprKind::Ident;
    std::string name;      // identifier, field, or operator symbol
    long long value = 0;   // IntLit only
    QuantKind quant = QuantKind::ForAll;
    std::string binder;
    std::string binder_type; // may be empty (\forall i | ... :: ...)
    bool has_guard = false;
    std::vector<ClauseExpr> children;

    const ClauseExpr* guard() const { return has_guard ? &children[0] : nullptr; }
    const ClauseExpr& body() const { return children[has_guard ? 1 : 0]; }

    bool operator==(const ClauseExpr&) const = default;
};

/// One condition as written. `raw` is the payload text (never empty);
/// `expr` is present exactly when the payload parses as fully formal.
struct Clause {
    std::string raw;
    Formality formality = Formality::Informal;
    std::optional<ClauseExpr> expr;

    bool operator==(const Clause&) const = default;
};

struct SignalClause {
    std::string exception_type;
    std::optional<std::string> message;
    std::optional<Clause> condition;

    bool operator==(const SignalClause&) const = default;
};

/// A labeled `@sub ... { ... }` block: one input condition with its own
/// contract. Labels are free text, unique within the enclosing block.
struct SubSpec {
    std::string label;
    std::vector<Clause> preconditions;   // @requires
    std::vector<Clause> postconditions;  // @ensures
    std::vector<SignalClause> signals;
    std::vector<std::string> assignable;

    bool operator==(const SubSpec&) const = default;
};

/// All tags of one doc comment, for one member (or class) at one view level.
struct SpecBlock {
    std::optional<Clause> desc;
    std::vector<Clause> invariants;      // @inv
    std::vector<Clause> preconditions;   // @requires
    std::vector<Clause> postconditions;  // @ensures
    std::vector<SignalClause> signals;
    std::vector<std::string> assignable;
    bool pure = false;
    std::vector<Clause> represents;
    std::vector<SubSpec> subspecs;

    bool empty() const;
    /// Flat requires/ensures/signals coexisting with subspecs (the checker's E005).
    bool mixes_flat_and_subspecs() const;

    bool operator==(const SpecBlock&) const = default;
};

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

/// Type text is kept verbatim; generics and array suffixes are not interpreted.
struct TypeRef {
    std::string text;

    bool operator==(const TypeRef&) const = default;
};

struct Param {
    std::string name;
    TypeRef type;

    bool operator==(const Param&) const = default;
};

struct Signature {
    std::string name;
    std::string name_suffix; // constructor type-argument text, e.g. "<T>"
    std::vector<Param> params;
    std::optional<TypeRef> return_type;  // absent for constructors/attributes
    std::optional<TypeRef> declared_type; // attributes only

    bool operator==(const Signature&) const = default;
};

struct Member {
    MemberKind kind = MemberKind::Method;
    Visibility visibility = Visibility::Package;
    Signature signature;
    std::optional<SpecBlock> external_spec;
    std::optional<SpecBlock> internal_spec;
    std::optional<std::string> body; // opaque brace block, first char '{'

    bool operator==(const Member&) const = default;
};

/// "name(T,int)" — the identity under which overloads are distinguished.
std::string member_key(const Member& m);

struct ClassUnit {
    std::string name;
    std::vector<std::string> type_params;
    SpecBlock external_spec;
    std::optional<SpecBlock> internal_spec;
    std::vector<Member> members;

    const Member* find_member(const std::string& name) const;

    bool operator==(const ClassUnit&) const = default;
};

struct MasterDocument {
    std::vector<ClassUnit> classes;
    std::string source_name;
    std::map<std::string, SourceSpan> source_spans;

    const ClassUnit* find_class(const std::string& name) const;
    /// Node ids a span may legally refer to (classes, members, spec blocks).
    std::vector<std::string> node_ids() const;
};

/// A projection of a MasterDocument for one ViewKind. `provenance` names the
/// source document the view was projected from.
struct ViewDocument {
    ViewKind kind = ViewKind::External;
    std::vector<ClassUnit> classes;
    std::string provenance;

    const ClassUnit* find_class(const std::string& name) const;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// True iff the member appears in a projection of the given kind.
/// External keeps public members only; Internal and Code keep everything.
bool member_view_membership(const Member& m, ViewKind kind);

/// Trim, collapse interior whitespace runs to one space.
std::string normalize_text(const std::string& s);

/// Line endings to LF, trailing whitespace stripped per line, leading and
/// trailing blank lines dropped. Used for opaque bodies.
std::string normalize_block(const std::string& s);

/// Canonical form: normalized clause text, labels and bodies; idempotent.
MasterDocument normalize(const MasterDocument& doc);

ClassUnit normalize(const ClassUnit& c);
SpecBlock normalize(const SpecBlock& b);
Clause normalize(const Clause& c);

/// Equality of content, ignoring source names and spans; both sides are
/// normalized first, so this is stable under normalize().
bool structurally_equal(const MasterDocument& a, const MasterDocument& b);
bool structurally_equal(const ViewDocument& a, const ViewDocument& b);

} // namespace good
