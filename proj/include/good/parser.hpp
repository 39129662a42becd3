// Turns annotated source text into a MasterDocument: a Java-lite declaration
// grammar plus the GOOD tag grammar inside doc comments. Parsing is total —
// unrecoverable constructs are skipped with a diagnostic, never an abort.

#pragma once

#include "good/model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace good {

/// Diagnostic catalog (see README for the published table):
///   P001 error    unterminated comment
///   P002 error    malformed declaration (skipped)
///   P003 error    @sub block with unbalanced braces
///   P004 warning  unknown tag
///   P005 warning  @requires inside an attribute spec
///   P006 warning  extra spec comment ignored
///   P007 warning  class body not closed at end of file
///   P008 error    duplicate member signature (skipped)
///   P009 error    duplicate class name (skipped)
///   P010 warning  tag with empty payload (dropped)
///   P011 warning  dangling doc comment
///   P012 warning  tag not allowed inside @sub block
struct ParseDiagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string message;
    SourceSpan span;

    bool operator==(const ParseDiagnostic&) const = default;
};

/// One `@tag payload` line plus its untagged continuation lines, as scanned
/// from a doc comment body.
struct TagLine {
    std::string tag;
    std::string payload;
    std::vector<std::string> continuation_lines;
    int line = 0; // within the comment, 1-based
};

struct ParseResult {
    MasterDocument document;
    std::vector<ParseDiagnostic> diagnostics;

    bool has_errors() const;
};

/// Parse a whole source file. Never throws; every class and member that can
/// be recovered ends up in the document.
ParseResult parse_master(const std::string& source, const std::string& source_name);

/// Parse the interior of a `/** ... */` comment (gutters may still be
/// present) into a SpecBlock.
std::pair<SpecBlock, std::vector<ParseDiagnostic>>
parse_spec_block(const std::string& comment);

/// Best-effort expression parse of a clause payload. Absent when the payload
/// does not fully conform to the mini-grammar; never throws.
std::optional<ClauseExpr> parse_clause_expression(const std::string& raw);

/// Classify a payload: Formal when it fully parses, Mixed when a
/// backslash-form appears inside otherwise unparseable text, else Informal.
Clause make_clause(const std::string& raw);

/// Parse one declaration line (modifiers, optional generics, name, optional
/// parameter list). Returns the parsed signature with `kind`/`visibility`
/// taken from the modifiers, or a diagnostic on malformed input.
struct SignatureResult {
    bool ok = false;
    MemberKind kind = MemberKind::Method;
    Visibility visibility = Visibility::Package;
    Signature signature;
    std::string error;
};
SignatureResult parse_signature(const std::string& decl);

} // namespace good
