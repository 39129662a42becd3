#include "good/report.hpp"

#include <sstream>

#include <json.hpp>

namespace good {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* kRed = "\x1b[31m";
const char* kYellow = "\x1b[33m";
const char* kReset = "\x1b[0m";

std::string severity_word(Severity s, bool color) {
    std::string word = to_string(s);
    if (!color) return word;
    return std::string(s == Severity::Error ? kRed : kYellow) + word + kReset;
}

} // namespace

ReportEntry to_entry(const std::string& file, const ParseDiagnostic& d) {
    return {file, d.code, d.severity, d.message, d.span, "", ""};
}

ReportEntry to_entry(const std::string& file, const Diagnostic& d) {
    return {file,   d.code,              d.severity,
            d.message, d.span, d.subject.class_name,
            d.subject.member.value_or("")};
}

std::string human_line(const ReportEntry& e, bool color) {
    std::ostringstream out;
    out << e.file << ":" << e.span.begin_line << ":" << e.span.begin_col << " "
        << e.code << " " << severity_word(e.severity, color) << ": " << e.message;
    if (!e.class_name.empty()) {
        out << " [" << e.class_name;
        if (!e.member.empty()) out << "." << e.member;
        out << "]";
    }
    return out.str();
}

std::string check_report_json(const std::vector<ReportEntry>& entries,
                              const std::vector<Obligation>& obligations) {
    ordered_json j;
    j["schema_version"] = 1;
    j["diagnostics"] = ordered_json::array();
    for (const auto& e : entries) {
        ordered_json je;
        je["file"] = e.file;
        je["code"] = e.code;
        je["severity"] = to_string(e.severity);
        je["message"] = e.message;
        je["line"] = e.span.begin_line;
        je["col"] = e.span.begin_col;
        if (!e.class_name.empty()) {
            je["class"] = e.class_name;
            if (!e.member.empty()) je["member"] = e.member;
        }
        j["diagnostics"].push_back(je);
    }
    j["obligations"] = ordered_json::array();
    for (const auto& ob : obligations) {
        ordered_json jo;
        jo["rule"] = to_string(ob.rule);
        jo["class"] = ob.subject.class_name;
        if (ob.subject.member) jo["member"] = *ob.subject.member;
        if (ob.subspec_label) jo["subspec"] = *ob.subspec_label;
        jo["antecedents"] = ordered_json::array();
        for (const auto& c : ob.antecedents) jo["antecedents"].push_back(c.raw);
        jo["consequent"] = ordered_json::array();
        for (const auto& c : ob.consequent) jo["consequent"].push_back(c.raw);
        jo["status"] = to_string(ob.status);
        j["obligations"].push_back(jo);
    }
    return j.dump(2) + "\n";
}

std::string human_obligation(const Obligation& ob, bool color) {
    std::ostringstream out;
    out << to_string(ob.rule) << " " << ob.subject.class_name;
    if (ob.subject.member) out << "." << *ob.subject.member;
    if (ob.subspec_label) out << " @sub \"" << *ob.subspec_label << "\"";
    out << ": ";
    if (ob.status == ObligationStatus::TriviallyDischarged) {
        out << (color ? "\x1b[32mtrivially discharged\x1b[0m" : "trivially discharged");
    } else {
        out << (color ? "\x1b[35mmanual\x1b[0m" : "manual");
    }
    if (ob.status == ObligationStatus::Manual) {
        out << "\n    given: ";
        if (ob.antecedents.empty()) out << "(nothing)";
        for (size_t i = 0; i < ob.antecedents.size(); ++i)
            out << (i ? " && " : "") << ob.antecedents[i].raw;
        out << "\n    show:  ";
        for (size_t i = 0; i < ob.consequent.size(); ++i)
            out << (i ? " && " : "") << ob.consequent[i].raw;
    }
    return out.str();
}

std::string workflow_report_json(const workflow::WorkflowReport& report) {
    ordered_json j;
    j["schema_version"] = 1;
    j["startable"] = report.startable;
    j["in_progress"] = report.in_progress;
    j["violations"] = ordered_json::array();
    for (const auto& v : report.violations)
        j["violations"].push_back({{"completed", v.completed}, {"needs", v.required}});
    j["notes"] = report.notes;
    return j.dump(2) + "\n";
}

std::string workflow_report_human(const workflow::WorkflowReport& report, bool color) {
    std::ostringstream out;
    out << "startable activities:\n";
    if (report.startable.empty()) out << "  (none)\n";
    for (const auto& a : report.startable) out << "  " << a << "\n";
    out << "in progress:\n";
    if (report.in_progress.empty()) out << "  (none)\n";
    for (const auto& a : report.in_progress) out << "  " << a << "\n";
    out << "completion violations:\n";
    if (report.violations.empty()) out << "  (none)\n";
    for (const auto& v : report.violations) {
        out << "  ";
        if (color) out << kRed;
        out << "'" << v.completed << "' is marked complete but needs '" << v.required
            << "', which is not";
        if (color) out << kReset;
        out << "\n";
    }
    for (const auto& n : report.notes) out << "note: " << n << "\n";
    return out.str();
}

} // namespace good
