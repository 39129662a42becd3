// The activity/artifact dependency graph with its three relation kinds
// (is-input-for, needs, results-in) and progress linting over a project
// state snapshot. The needs rule: y can only be considered completed when
// x is completed; evolving together before that is fine.

#pragma once

#include "good/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace good {
namespace workflow {

enum class Column { External, Internal, Code, Tests };
enum class RowKind { Analysis, Design, Specification, Test, View };
enum class NodeType { Activity, Artifact };
enum class Relation { InputFor, Needs, ResultsIn };
enum class Status { Absent, Draft, Complete };

const char* to_string(Column c);
const char* to_string(RowKind k);
const char* to_string(NodeType t);
const char* to_string(Relation r);
const char* to_string(Status s);
std::optional<Status> status_from_string(const std::string& s);

struct Node {
    std::string name;
    NodeType type = NodeType::Activity;
    Column column = Column::External;
    RowKind kind = RowKind::Analysis;

    bool operator==(const Node&) const = default;
};

struct Edge {
    std::string from;
    std::string to;
    Relation relation = Relation::InputFor;

    bool operator==(const Edge&) const = default;
};

struct ActivityGraph {
    std::vector<Node> nodes;
    std::vector<Edge> edges;

    const Node* find(const std::string& name) const;
    /// Structural invariants: edge endpoints exist, results_in goes
    /// activity→artifact only, input_for ∪ results_in is acyclic.
    std::vector<std::string> validate() const;

    bool operator==(const ActivityGraph&) const = default;
};

/// Statuses per node. Artifacts are required to have one; analysis
/// activities (which produce no artifact) are tracked here too, and
/// producing activities derive theirs from their results_in artifacts.
struct ProjectState {
    std::map<std::string, Status> statuses;
    bool robustness_pass = false;
};

struct Violation {
    std::string completed; // y of the needs edge
    std::string required;  // x of the needs edge

    bool operator==(const Violation&) const = default;
};

struct WorkflowReport {
    std::vector<std::string> startable;
    std::vector<std::string> in_progress;
    std::vector<Violation> violations;
    std::vector<std::string> notes;
};

/// The graph reconstructed from the activity Input/Output contracts.
ActivityGraph default_graph();

Status effective_status(const ActivityGraph& g, const ProjectState& s,
                        const std::string& node);

/// Violations of the completion rule from the queried artifact's viewpoint
/// (the artifact itself or its producing activity as the completed side).
/// nullopt when the artifact is unknown — a usage error.
std::optional<std::vector<Violation>>
completion_check(const ActivityGraph& g, const ProjectState& s,
                 const std::string& artifact);

/// Startable activities (all input_for sources at least draft, deliverables
/// not yet complete), in-progress artifacts, and every completion violation.
/// Reports never block revisiting anything.
WorkflowReport status(const ActivityGraph& g, const ProjectState& s);

// graph/state (de)serialization, JSON with schema_version 1
std::string graph_to_json(const ActivityGraph& g);
std::optional<ActivityGraph> graph_from_json(const std::string& text, std::string& error);
std::optional<ProjectState> state_from_json(const std::string& text, std::string& error);

} // namespace workflow
} // namespace good
