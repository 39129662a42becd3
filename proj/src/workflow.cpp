#include "good/workflow.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

namespace good {
namespace workflow {

const char* to_string(Column c) {
    switch (c) {
    case Column::External: return "external";
    case Column::Internal: return "internal";
    case Column::Code: return "code";
    case Column::Tests: return "tests";
    }
    return "?";
}

const char* to_string(RowKind k) {
    switch (k) {
    case RowKind::Analysis: return "analysis";
    case RowKind::Design: return "design";
    case RowKind::Specification: return "specification";
    case RowKind::Test: return "test";
    case RowKind::View: return "view";
    }
    return "?";
}

const char* to_string(NodeType t) {
    return t == NodeType::Activity ? "activity" : "artifact";
}

const char* to_string(Relation r) {
    switch (r) {
    case Relation::InputFor: return "input_for";
    case Relation::Needs: return "needs";
    case Relation::ResultsIn: return "results_in";
    }
    return "?";
}

const char* to_string(Status s) {
    switch (s) {
    case Status::Absent: return "absent";
    case Status::Draft: return "draft";
    case Status::Complete: return "complete";
    }
    return "?";
}

std::optional<Status> status_from_string(const std::string& s) {
    if (s == "absent") return Status::Absent;
    if (s == "draft") return Status::Draft;
    if (s == "complete") return Status::Complete;
    return std::nullopt;
}

namespace {

std::optional<Column> column_from_string(const std::string& s) {
    if (s == "external") return Column::External;
    if (s == "internal") return Column::Internal;
    if (s == "code") return Column::Code;
    if (s == "tests") return Column::Tests;
    return std::nullopt;
}

std::optional<RowKind> kind_from_string(const std::string& s) {
    if (s == "analysis") return RowKind::Analysis;
    if (s == "design") return RowKind::Design;
    if (s == "specification") return RowKind::Specification;
    if (s == "test") return RowKind::Test;
    if (s == "view") return RowKind::View;
    return std::nullopt;
}

std::optional<Relation> relation_from_string(const std::string& s) {
    if (s == "input_for") return Relation::InputFor;
    if (s == "needs") return Relation::Needs;
    if (s == "results_in") return Relation::ResultsIn;
    return std::nullopt;
}

} // namespace

const Node* ActivityGraph::find(const std::string& name) const {
    for (const auto& n : nodes)
        if (n.name == name) return &n;
    return nullptr;
}

std::vector<std::string> ActivityGraph::validate() const {
    std::vector<std::string> issues;
    std::set<std::string> names;
    for (const auto& n : nodes)
        if (!names.insert(n.name).second)
            issues.push_back("duplicate node name '" + n.name + "'");
    for (const auto& e : edges) {
        const Node* from = find(e.from);
        const Node* to = find(e.to);
        if (!from) issues.push_back("edge from unknown node '" + e.from + "'");
        if (!to) issues.push_back("edge to unknown node '" + e.to + "'");
        if (!from || !to) continue;
        if (e.relation == Relation::ResultsIn &&
            (from->type != NodeType::Activity || to->type != NodeType::Artifact))
            issues.push_back("results_in edge must go activity->artifact: '" +
                             e.from + "' -> '" + e.to + "'");
    }

    // cycle check over input_for ∪ results_in
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& e : edges)
        if (e.relation != Relation::Needs) adj[e.from].push_back(e.to);
    std::map<std::string, int> mark; // 0 unvisited, 1 on stack, 2 done
    bool cyclic = false;
    auto dfs = [&](auto&& self, const std::string& u) -> void {
        mark[u] = 1;
        for (const auto& v : adj[u]) {
            if (mark[v] == 1) {
                cyclic = true;
                return;
            }
            if (mark[v] == 0) self(self, v);
            if (cyclic) return;
        }
        mark[u] = 2;
    };
    for (const auto& n : nodes) {
        if (mark[n.name] == 0) dfs(dfs, n.name);
        if (cyclic) break;
    }
    if (cyclic) issues.push_back("input_for/results_in subgraph contains a cycle");
    return issues;
}

ActivityGraph default_graph() {
    ActivityGraph g;
    auto activity = [&](const char* name, Column c, RowKind k) {
        g.nodes.push_back({name, NodeType::Activity, c, k});
    };
    auto artifact = [&](const char* name, Column c, RowKind k) {
        g.nodes.push_back({name, NodeType::Artifact, c, k});
    };

    activity("External Analysis", Column::External, RowKind::Analysis);
    activity("Writing External Design", Column::External, RowKind::Design);
    activity("Writing External Specification", Column::External, RowKind::Specification);
    activity("Internal Analysis", Column::Internal, RowKind::Analysis);
    activity("Writing Internal Design", Column::Internal, RowKind::Design);
    activity("Writing Internal Specification", Column::Internal, RowKind::Specification);
    activity("Code Analysis", Column::Code, RowKind::Analysis);
    activity("Writing Code Design", Column::Code, RowKind::Design);
    activity("Writing Code", Column::Code, RowKind::Specification);
    activity("Writing External Tests", Column::Tests, RowKind::Test);
    activity("Writing Internal Tests", Column::Tests, RowKind::Test);
    activity("Writing Code Tests", Column::Tests, RowKind::Test);

    artifact("External Design", Column::External, RowKind::Design);
    artifact("External View", Column::External, RowKind::View);
    artifact("Internal Design", Column::Internal, RowKind::Design);
    artifact("Internal View", Column::Internal, RowKind::View);
    artifact("Code Design", Column::Code, RowKind::Design);
    artifact("Annotated Code View", Column::Code, RowKind::View);
    artifact("External Tests", Column::Tests, RowKind::Test);
    artifact("Internal Tests", Column::Tests, RowKind::Test);
    artifact("Code Tests", Column::Tests, RowKind::Test);

    auto edge = [&](const char* from, const char* to, Relation r) {
        g.edges.push_back({from, to, r});
    };

    // analysis feeds its column's design and specification activities
    edge("External Analysis", "Writing External Design", Relation::InputFor);
    edge("External Analysis", "Writing External Specification", Relation::InputFor);
    edge("Internal Analysis", "Writing Internal Design", Relation::InputFor);
    edge("Internal Analysis", "Writing Internal Specification", Relation::InputFor);
    edge("Code Analysis", "Writing Code Design", Relation::InputFor);
    edge("Code Analysis", "Writing Code", Relation::InputFor);

    // internal activities take the external artifacts as input; code takes internal
    edge("External Design", "Writing Internal Design", Relation::InputFor);
    edge("External View", "Writing Internal Specification", Relation::InputFor);
    edge("Internal Design", "Writing Code Design", Relation::InputFor);
    edge("Internal View", "Writing Code", Relation::InputFor);

    // each view is the input its tests are written from
    edge("External View", "Writing External Tests", Relation::InputFor);
    edge("Internal View", "Writing Internal Tests", Relation::InputFor);
    edge("Annotated Code View", "Writing Code Tests", Relation::InputFor);

    // specification activities need their design artifact (evolve together)
    edge("Writing External Specification", "External Design", Relation::Needs);
    edge("Writing Internal Specification", "Internal Design", Relation::Needs);
    edge("Writing Code", "Code Design", Relation::Needs);
    edge("Writing Code", "Internal View", Relation::Needs);

    // tests cannot be complete before their view is
    edge("Writing External Tests", "External View", Relation::Needs);
    edge("Writing Internal Tests", "Internal View", Relation::Needs);
    edge("Writing Code Tests", "Annotated Code View", Relation::Needs);

    // activities produce artifacts
    edge("Writing External Design", "External Design", Relation::ResultsIn);
    edge("Writing Internal Design", "Internal Design", Relation::ResultsIn);
    edge("Writing Code Design", "Code Design", Relation::ResultsIn);
    edge("Writing External Specification", "External View", Relation::ResultsIn);
    edge("Writing Internal Specification", "Internal View", Relation::ResultsIn);
    edge("Writing Code", "Annotated Code View", Relation::ResultsIn);
    edge("Writing External Tests", "External Tests", Relation::ResultsIn);
    edge("Writing Internal Tests", "Internal Tests", Relation::ResultsIn);
    edge("Writing Code Tests", "Code Tests", Relation::ResultsIn);

    return g;
}

Status effective_status(const ActivityGraph& g, const ProjectState& s,
                        const std::string& node) {
    auto it = s.statuses.find(node);
    if (it != s.statuses.end()) return it->second;
    const Node* n = g.find(node);
    if (!n || n->type == NodeType::Artifact) return Status::Absent;
    // a producing activity is as done as its least-done artifact
    bool any = false;
    Status least = Status::Complete;
    for (const auto& e : g.edges) {
        if (e.relation != Relation::ResultsIn || e.from != node) continue;
        any = true;
        Status st = effective_status(g, s, e.to);
        if (static_cast<int>(st) < static_cast<int>(least)) least = st;
    }
    return any ? least : Status::Absent;
}

namespace {

std::vector<Violation> all_violations(const ActivityGraph& g, const ProjectState& s) {
    std::vector<Violation> out;
    for (const auto& e : g.edges) {
        if (e.relation != Relation::Needs) continue;
        if (effective_status(g, s, e.from) == Status::Complete &&
            effective_status(g, s, e.to) != Status::Complete)
            out.push_back({e.from, e.to});
    }
    return out;
}

} // namespace

std::optional<std::vector<Violation>>
completion_check(const ActivityGraph& g, const ProjectState& s,
                 const std::string& artifact) {
    const Node* node = g.find(artifact);
    if (!node || node->type != NodeType::Artifact) return std::nullopt;
    // the artifact's side of the rule: itself, or the activity producing it
    std::set<std::string> own{artifact};
    for (const auto& e : g.edges)
        if (e.relation == Relation::ResultsIn && e.to == artifact) own.insert(e.from);
    std::vector<Violation> out;
    for (const auto& v : all_violations(g, s))
        if (own.count(v.completed)) out.push_back(v);
    return out;
}

WorkflowReport status(const ActivityGraph& g, const ProjectState& s) {
    WorkflowReport report;
    for (const auto& n : g.nodes) {
        if (n.type != NodeType::Activity) continue;
        bool ready = true;
        for (const auto& e : g.edges) {
            if (e.relation != Relation::InputFor || e.to != n.name) continue;
            if (effective_status(g, s, e.from) == Status::Absent) {
                ready = false;
                break;
            }
        }
        if (!ready) continue;
        // deliverables not yet all complete
        bool produces = false, all_complete = true;
        for (const auto& e : g.edges) {
            if (e.relation != Relation::ResultsIn || e.from != n.name) continue;
            produces = true;
            if (effective_status(g, s, e.to) != Status::Complete) all_complete = false;
        }
        bool finished = produces ? all_complete
                                 : effective_status(g, s, n.name) == Status::Complete;
        if (!finished) report.startable.push_back(n.name);
    }
    for (const auto& n : g.nodes) {
        if (n.type == NodeType::Artifact &&
            effective_status(g, s, n.name) == Status::Draft)
            report.in_progress.push_back(n.name);
    }
    report.violations = all_violations(g, s);
    for (const auto& [name, st] : s.statuses) {
        if (!g.find(name))
            report.notes.push_back("state names an unknown node '" + name + "'");
    }
    if (s.robustness_pass)
        report.notes.push_back(
            "robustness pass: revisit every activity for the non-happy paths");
    return report;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

using ordered_json = nlohmann::ordered_json;

std::string graph_to_json(const ActivityGraph& g) {
    ordered_json j;
    j["schema_version"] = 1;
    j["nodes"] = ordered_json::array();
    for (const auto& n : g.nodes)
        j["nodes"].push_back({{"name", n.name},
                              {"type", to_string(n.type)},
                              {"column", to_string(n.column)},
                              {"kind", to_string(n.kind)}});
    j["edges"] = ordered_json::array();
    for (const auto& e : g.edges)
        j["edges"].push_back(
            {{"from", e.from}, {"to", e.to}, {"relation", to_string(e.relation)}});
    return j.dump(2) + "\n";
}

std::optional<ActivityGraph> graph_from_json(const std::string& text,
                                             std::string& error) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        error = "graph file is not valid JSON";
        return std::nullopt;
    }
    ActivityGraph g;
    try {
        for (const auto& jn : j.at("nodes")) {
            Node n;
            n.name = jn.at("name").get<std::string>();
            n.type = jn.at("type").get<std::string>() == "artifact" ? NodeType::Artifact
                                                                    : NodeType::Activity;
            auto col = column_from_string(jn.at("column").get<std::string>());
            auto kind = kind_from_string(jn.at("kind").get<std::string>());
            if (!col || !kind) {
                error = "node '" + n.name + "' has an unknown column or kind";
                return std::nullopt;
            }
            n.column = *col;
            n.kind = *kind;
            g.nodes.push_back(std::move(n));
        }
        for (const auto& je : j.at("edges")) {
            Edge e;
            e.from = je.at("from").get<std::string>();
            e.to = je.at("to").get<std::string>();
            auto rel = relation_from_string(je.at("relation").get<std::string>());
            if (!rel) {
                error = "edge '" + e.from + "' -> '" + e.to + "' has an unknown relation";
                return std::nullopt;
            }
            e.relation = *rel;
            g.edges.push_back(std::move(e));
        }
    } catch (const ordered_json::exception& ex) {
        error = std::string("graph file: ") + ex.what();
        return std::nullopt;
    }
    auto issues = g.validate();
    if (!issues.empty()) {
        error = "graph file invalid: " + issues.front();
        return std::nullopt;
    }
    return g;
}

std::optional<ProjectState> state_from_json(const std::string& text,
                                            std::string& error) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        error = "state file is not valid JSON";
        return std::nullopt;
    }
    ProjectState s;
    try {
        if (j.contains("robustness_pass"))
            s.robustness_pass = j.at("robustness_pass").get<bool>();
        for (const auto& [name, value] : j.at("statuses").items()) {
            auto st = status_from_string(value.get<std::string>());
            if (!st) {
                error = "status for '" + name +
                        "' must be absent, draft or complete";
                return std::nullopt;
            }
            s.statuses[name] = *st;
        }
    } catch (const ordered_json::exception& ex) {
        error = std::string("state file: ") + ex.what();
        return std::nullopt;
    }
    return s;
}

} // namespace workflow
} // namespace good
