// Produces the External / Internal / Code views from a MasterDocument,
// renders them in the listing style, and structurally diffs two views.

#pragma once

#include "good/model.hpp"

#include <string>
#include <vector>

namespace good {

enum class ChangeKind { Added, Removed, Changed };

struct ViewDelta {
    std::string class_name;
    std::string member; // member key, empty for class-level deltas
    std::string field;
    ChangeKind change = ChangeKind::Changed;
    std::string detail;

    bool operator==(const ViewDelta&) const = default;
};

/// Project a (normalized) master document onto one view. Member order is
/// preserved. External keeps public members and external spec blocks only,
/// with @represents stripped; Internal keeps everything but bodies; Code is
/// the identity modulo normalization.
ViewDocument project(const MasterDocument& doc, ViewKind kind);

/// Deterministic text rendering in the listing style: doc comment above each
/// declaration, `*` gutter, one tag per line, two-space indent, `@sub` blocks
/// braced. Byte-stable for equal inputs.
std::string render(const ViewDocument& view);

std::string render_class(const ClassUnit& cls, ViewKind kind);

/// Empty iff the views are structurally equal after normalization; otherwise
/// deltas naming the class, member and field that differ. Mismatched kinds
/// yield a single "kind" delta (usage error).
std::vector<ViewDelta> diff_views(const ViewDocument& expected, const ViewDocument& actual);

} // namespace good
