// Report assembly shared by the CLI: one merged diagnostic shape plus the
// machine (JSON, schema_version 1) and human (file:line:col CODE message)
// formats.

#pragma once

#include "good/checker.hpp"
#include "good/parser.hpp"
#include "good/workflow.hpp"

#include <string>
#include <vector>

namespace good {

struct ReportEntry {
    std::string file;
    std::string code;
    Severity severity = Severity::Error;
    std::string message;
    SourceSpan span;
    std::string class_name; // empty when not subject-bound
    std::string member;
};

ReportEntry to_entry(const std::string& file, const ParseDiagnostic& d);
ReportEntry to_entry(const std::string& file, const Diagnostic& d);

/// `file:line:col CODE message`
std::string human_line(const ReportEntry& e, bool color);

std::string check_report_json(const std::vector<ReportEntry>& entries,
                              const std::vector<Obligation>& obligations);

std::string human_obligation(const Obligation& ob, bool color);

std::string workflow_report_json(const workflow::WorkflowReport& report);
std::string workflow_report_human(const workflow::WorkflowReport& report, bool color);

} // namespace good
