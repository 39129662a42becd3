// The `good` command line tool: project | check | gen-tests | workflow.
// stdout carries reports, stderr carries logs. Exit codes: 0 clean,
// 1 findings, 2 parse errors, 3 environment/IO (highest wins).

#include "good/checker.hpp"
#include "good/parser.hpp"
#include "good/projector.hpp"
#include "good/report.hpp"
#include "good/testgen.hpp"
#include "good/workflow.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <unistd.h>

namespace fs = std::filesystem;
using namespace good;

namespace {

bool use_color() {
    if (std::getenv("GOOD_NO_COLOR") != nullptr) return false;
    return isatty(fileno(stdout)) != 0;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << text;
    return out.good();
}

/// `key = value` lines; '#' and ';' start comments. Recognized keys:
/// view, out.
std::map<std::string, std::string> load_config(const std::string& path) {
    std::map<std::string, std::string> cfg;
    auto text = read_file(path);
    if (!text) return cfg;
    std::istringstream in(*text);
    std::string line;
    while (std::getline(in, line)) {
        size_t comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](const std::string& s) {
            size_t b = s.find_first_not_of(" \t\r");
            size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);
        if (!key.empty()) cfg[key] = value;
    }
    return cfg;
}

struct ParsedFile {
    std::string path;
    bool readable = false;
    ParseResult result;
};

/// Files parse concurrently; results are joined in input order so reports
/// stay deterministic.
std::vector<ParsedFile> parse_files(const std::vector<std::string>& paths) {
    std::vector<std::future<ParsedFile>> futures;
    futures.reserve(paths.size());
    for (const auto& path : paths) {
        futures.push_back(std::async(std::launch::async, [path]() {
            ParsedFile pf;
            pf.path = path;
            auto text = read_file(path);
            if (!text) return pf;
            pf.readable = true;
            pf.result = parse_master(*text, path);
            return pf;
        }));
    }
    std::vector<ParsedFile> out;
    out.reserve(paths.size());
    for (auto& f : futures) out.push_back(f.get());
    return out;
}

int max_exit(int a, int b) { return a > b ? a : b; }

int cmd_project(const std::vector<std::string>& paths, ViewKind view,
                const std::string& out_dir) {
    bool color = use_color();
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "good: cannot create output directory '" << out_dir
                  << "': " << ec.message() << "\n";
        return 3;
    }
    int exit_code = 0;
    for (const auto& pf : parse_files(paths)) {
        if (!pf.readable) {
            std::cerr << "good: cannot read '" << pf.path << "'\n";
            exit_code = max_exit(exit_code, 3);
            continue;
        }
        for (const auto& d : pf.result.diagnostics)
            std::cout << human_line(to_entry(pf.path, d), color) << "\n";
        if (pf.result.has_errors()) exit_code = max_exit(exit_code, 2);

        ViewDocument projected = project(pf.result.document, view);
        for (const auto& cls : projected.classes) {
            ViewDocument single{view, {cls}, projected.provenance};
            std::string name = cls.name + "." + to_string(view) + ".java";
            fs::path target = fs::path(out_dir) / name;
            if (!write_file(target.string(), render(single))) {
                std::cerr << "good: cannot write '" << target.string() << "'\n";
                exit_code = max_exit(exit_code, 3);
                continue;
            }
            std::cerr << "wrote " << target.string() << "\n";
        }
    }
    return exit_code;
}

int cmd_check(const std::vector<std::string>& paths, const std::string& format) {
    bool color = use_color();
    std::vector<ReportEntry> entries;
    std::vector<Obligation> obligations;
    int exit_code = 0;
    for (const auto& pf : parse_files(paths)) {
        if (!pf.readable) {
            std::cerr << "good: cannot read '" << pf.path << "'\n";
            exit_code = max_exit(exit_code, 3);
            continue;
        }
        for (const auto& d : pf.result.diagnostics)
            entries.push_back(to_entry(pf.path, d));
        if (pf.result.has_errors()) exit_code = max_exit(exit_code, 2);

        for (const auto& d : check(pf.result.document))
            entries.push_back(to_entry(pf.path, d));
        for (const auto& cls : pf.result.document.classes)
            for (auto& ob : refinement_obligations(cls))
                obligations.push_back(std::move(ob));
    }
    bool any_error = std::any_of(entries.begin(), entries.end(), [](const ReportEntry& e) {
        return e.severity == Severity::Error;
    });
    if (any_error) exit_code = max_exit(exit_code, 1);

    if (format == "machine") {
        std::cout << check_report_json(entries, obligations);
    } else {
        for (const auto& e : entries) std::cout << human_line(e, color) << "\n";
        if (!obligations.empty()) {
            std::cout << "refinement obligations:\n";
            for (const auto& ob : obligations)
                std::cout << "  " << human_obligation(ob, color) << "\n";
        }
    }
    return exit_code;
}

std::string upper(const std::string& s) {
    std::string out = s;
    if (!out.empty())
        out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

int cmd_gentests(const std::string& path, const std::string& model_path,
                 ViewKind view, const std::string& out_dir) {
    bool color = use_color();
    auto model_text = read_file(model_path);
    if (!model_text) {
        std::cerr << "good: cannot read model file '" << model_path << "'\n";
        return 3;
    }
    auto source = read_file(path);
    if (!source) {
        std::cerr << "good: cannot read '" << path << "'\n";
        return 3;
    }
    int exit_code = 0;
    ParseResult parsed = parse_master(*source, path);
    for (const auto& d : parsed.diagnostics)
        std::cout << human_line(to_entry(path, d), color) << "\n";
    if (parsed.has_errors()) exit_code = max_exit(exit_code, 2);

    ViewDocument projected = project(parsed.document, view);
    auto [model, mdiags] = load_test_model(*model_text, projected);
    auto [cases, ediags] = enumerate_cases(model, projected);
    for (const auto& d : mdiags)
        std::cout << human_line(to_entry(model_path, d), color) << "\n";
    for (const auto& d : ediags)
        std::cout << human_line(to_entry(model_path, d), color) << "\n";
    bool t_errors =
        std::any_of(mdiags.begin(), mdiags.end(),
                    [](const ParseDiagnostic& d) { return d.severity == Severity::Error; }) ||
        std::any_of(ediags.begin(), ediags.end(),
                    [](const ParseDiagnostic& d) { return d.severity == Severity::Error; });
    if (t_errors) exit_code = max_exit(exit_code, 1);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        std::cerr << "good: cannot create output directory '" << out_dir
                  << "': " << ec.message() << "\n";
        return 3;
    }
    std::string base = model.class_name.empty() ? "tests" : model.class_name;
    std::string member = model.member_name;
    fs::path manifest = fs::path(out_dir) / (base + "." + member + ".tests.json");
    fs::path skeleton = fs::path(out_dir) / (base + upper(member) + "Tests.java");
    if (!write_file(manifest.string(), emit_manifest(model, cases, view)) ||
        !write_file(skeleton.string(), emit_skeletons(model, cases))) {
        std::cerr << "good: cannot write test outputs under '" << out_dir << "'\n";
        return 3;
    }
    std::cerr << "wrote " << manifest.string() << "\n";
    std::cerr << "wrote " << skeleton.string() << "\n";
    std::cout << cases.size() << " case(s) generated for " << model.class_name << "#"
              << model.member_name << "\n";
    return exit_code;
}

int cmd_workflow(const std::string& state_path, const std::string& graph_path,
                 const std::string& format, const std::string& write_graph) {
    bool color = use_color();
    if (!write_graph.empty()) {
        if (!write_file(write_graph, workflow::graph_to_json(workflow::default_graph()))) {
            std::cerr << "good: cannot write '" << write_graph << "'\n";
            return 3;
        }
        std::cerr << "wrote " << write_graph << "\n";
        return 0;
    }
    workflow::ActivityGraph graph;
    if (graph_path.empty()) {
        graph = workflow::default_graph();
    } else {
        auto text = read_file(graph_path);
        if (!text) {
            std::cerr << "good: cannot read graph file '" << graph_path << "'\n";
            return 3;
        }
        std::string error;
        auto loaded = workflow::graph_from_json(*text, error);
        if (!loaded) {
            std::cerr << "good: " << error << "\n";
            return 3;
        }
        graph = std::move(*loaded);
    }
    auto text = read_file(state_path);
    if (!text) {
        std::cerr << "good: cannot read state file '" << state_path << "'\n";
        return 3;
    }
    std::string error;
    auto state = workflow::state_from_json(*text, error);
    if (!state) {
        std::cerr << "good: " << error << "\n";
        return 3;
    }
    workflow::WorkflowReport report = workflow::status(graph, *state);
    if (format == "machine")
        std::cout << workflow_report_json(report);
    else
        std::cout << workflow_report_human(report, color);
    return report.violations.empty() ? 0 : 1;
}

} // namespace

int run(int argc, char** argv);

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& ex) {
        std::cerr << "good: " << ex.what() << "\n";
        return 3;
    }
}

int run(int argc, char** argv) {
    CLI::App app{"GOOD single-source toolchain: view projection, consistency "
                 "checking, refinement obligations, specification-based tests, "
                 "and progress linting"};
    app.require_subcommand(1);

    std::string config_path = "good.toml";
    app.add_option("--config", config_path, "configuration file (key = value lines)");

    // project
    auto* project_cmd =
        app.add_subcommand("project", "write the selected view of each input file");
    std::vector<std::string> project_paths;
    std::string project_view, project_out;
    project_cmd->add_option("paths", project_paths, "annotated source files")
        ->required()
        ->expected(-1);
    project_cmd->add_option("--view", project_view, "external | internal | code");
    project_cmd->add_option("--out", project_out, "output directory");

    // check
    auto* check_cmd = app.add_subcommand(
        "check", "structural diagnostics and refinement obligations");
    std::vector<std::string> check_paths;
    std::string check_format = "human";
    check_cmd->add_option("paths", check_paths, "annotated source files")
        ->required()
        ->expected(-1);
    check_cmd->add_option("--format", check_format, "human | machine")
        ->check(CLI::IsMember({"human", "machine"}));

    // gen-tests
    auto* gen_cmd =
        app.add_subcommand("gen-tests", "derive test cases from a partition model");
    std::string gen_path, gen_model, gen_view, gen_out;
    gen_cmd->add_option("path", gen_path, "annotated source file")->required();
    gen_cmd->add_option("--model", gen_model, "test model file")->required();
    gen_cmd->add_option("--view", gen_view, "external | internal");
    gen_cmd->add_option("--out", gen_out, "output directory");

    // workflow
    auto* wf_cmd = app.add_subcommand("workflow", "lint project progress against "
                                                  "the activity graph");
    std::string wf_state, wf_graph, wf_format = "human", wf_write_graph;
    wf_cmd->add_option("statefile", wf_state, "project state JSON");
    wf_cmd->add_option("graphfile", wf_graph, "activity graph JSON (default: built-in)");
    wf_cmd->add_option("--graph", wf_graph, "activity graph JSON");
    wf_cmd->add_option("--format", wf_format, "human | machine")
        ->check(CLI::IsMember({"human", "machine"}));
    wf_cmd->add_option("--write-default-graph", wf_write_graph,
                       "write the built-in graph to this path and exit");

    CLI11_PARSE(app, argc, argv);

    auto cfg = load_config(config_path);
    auto pick_view = [&](const std::string& flag_value,
                         ViewKind fallback) -> std::optional<ViewKind> {
        std::string name = flag_value;
        if (name.empty() && cfg.count("view")) name = cfg.at("view");
        if (name.empty()) return fallback;
        return view_kind_from_string(name);
    };
    auto pick_out = [&](const std::string& flag_value) {
        if (!flag_value.empty()) return flag_value;
        if (cfg.count("out")) return cfg.at("out");
        return std::string(".");
    };

    if (project_cmd->parsed()) {
        auto view = pick_view(project_view, ViewKind::External);
        if (!view) {
            std::cerr << "good: --view must be external, internal or code\n";
            return 3;
        }
        return cmd_project(project_paths, *view, pick_out(project_out));
    }
    if (check_cmd->parsed()) return cmd_check(check_paths, check_format);
    if (gen_cmd->parsed()) {
        auto view = pick_view(gen_view, ViewKind::External);
        if (!view || *view == ViewKind::Code) {
            std::cerr << "good: --view must be external or internal\n";
            return 3;
        }
        return cmd_gentests(gen_path, gen_model, *view, pick_out(gen_out));
    }
    if (wf_cmd->parsed()) {
        if (wf_state.empty() && wf_write_graph.empty()) {
            std::cerr << "good: workflow needs a state file (or --write-default-graph)\n";
            return 3;
        }
        return cmd_workflow(wf_state, wf_graph, wf_format, wf_write_graph);
    }
    return 0;
}
