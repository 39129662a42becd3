// Structural consistency diagnostics plus generation (and trivial discharge)
// of the three refinement obligations the internal specification must satisfy
// relative to the external one.

#pragma once

#include "good/model.hpp"

#include <string>
#include <vector>

namespace good {

struct Subject {
    std::string class_name;
    std::optional<std::string> member; // member key

    bool operator==(const Subject&) const = default;
};

/// Catalog (see README):
///   E001  public member missing external @desc
///   E002  @pure together with non-empty @assignable
///   E003  @represents inside an external spec block
///   E004  @signals in a subspec whose @requires is empty
///   E005  flat requires/ensures/signals mixed with @sub blocks
///   E006  duplicate subspec labels
///   W001  private member lacking any @desc
///   W002  public method with external spec but no internal spec
///   W003  subspec preconditions not checkably disjoint
///   W004  subspec labels unmatched between spec levels
///   W005  \old used outside a postcondition
///   W006  subspec without @requires
struct Diagnostic {
    std::string code;
    Severity severity = Severity::Error;
    Subject subject;
    std::string message;
    SourceSpan span;

    bool operator==(const Diagnostic&) const = default;
};

enum class RefinementRule { R1_Invariant, R2_Precondition, R3_Postcondition };
enum class ObligationStatus { TriviallyDischarged, Manual };

const char* to_string(RefinementRule r);
const char* to_string(ObligationStatus s);

/// A proof obligation: antecedents together should imply every consequent.
/// R1 has no member subject; R2/R3 always do.
struct Obligation {
    RefinementRule rule = RefinementRule::R1_Invariant;
    Subject subject;
    std::optional<std::string> subspec_label;
    std::vector<Clause> antecedents;
    std::vector<Clause> consequent;
    ObligationStatus status = ObligationStatus::Manual;

    bool operator==(const Obligation&) const = default;
};

/// Deterministic structural diagnostics over the whole document.
std::vector<Diagnostic> check(const MasterDocument& doc);

/// R1 per class; R2/R3 per public constructor/method carrying an external
/// spec. A member without an internal spec refines by identity. When both
/// levels carry subspecs, obligations are emitted per like-labeled pair.
std::vector<Obligation> refinement_obligations(const ClassUnit& cls);

/// Marks the obligation trivially discharged iff the consequent clause set is
/// a subset of the antecedents under normalized textual equality, or empty.
Obligation discharge_trivial(Obligation ob);

enum class Disjointness { Disjoint, Overlapping, Unknown };

/// Decides disjointness for the interval fragment only: conjunctions of
/// comparisons of one shared integer-valued term against integer constants.
/// Everything else is Unknown.
Disjointness check_disjoint_interval(const ClauseExpr& a, const ClauseExpr& b);

} // namespace good
