// Derives named test cases from (sub)specifications plus a user-supplied
// partition model: equivalence classes and boundary values of the input
// domains, all-combinations coverage, testMC naming.

#pragma once

#include "good/model.hpp"
#include "good/parser.hpp"

#include <string>
#include <vector>

namespace good {

enum class PartitionKind { Equivalence, Boundary };

const char* to_string(PartitionKind k);

/// One expected observation after the call under test: `call(args) = expected`.
struct Observation {
    std::string call;
    std::vector<std::string> args;
    std::string expected;

    bool operator==(const Observation&) const = default;
};

struct Partition {
    std::string label;
    PartitionKind kind = PartitionKind::Equivalence;
    std::string representative; // literal text
    std::optional<std::string> maps_to_subspec;
    std::vector<Observation> expectations;

    bool operator==(const Partition&) const = default;
};

/// Partitions for one parameter of the subject member, or for a named state
/// term (an extra combination axis that is not passed as a call input).
struct Domain {
    std::string name;
    bool is_parameter = false;
    std::vector<Partition> partitions;

    bool operator==(const Domain&) const = default;
};

struct FixtureOp {
    std::string op;
    std::vector<std::string> args;

    bool operator==(const FixtureOp&) const = default;
};

struct Fixture {
    std::string name;
    std::vector<FixtureOp> ops;

    bool operator==(const Fixture&) const = default;
};

struct TestModel {
    std::string class_name;
    std::string member_name;
    std::vector<Fixture> fixtures;
    std::vector<Domain> domains;

    bool operator==(const TestModel&) const = default;
};

struct Expectation {
    bool is_exception = false;
    std::string exception_type;
    std::optional<std::string> exception_message;
    std::vector<Observation> observations; // empty => TODO stubs in skeletons

    bool operator==(const Expectation&) const = default;
};

struct TestCase {
    std::string name;
    std::string fixture;
    std::vector<std::string> inputs; // representatives, in parameter order
    Expectation expectation;
    std::optional<std::string> bound_subspec;
    std::vector<std::string> governing_postconditions; // raw @ensures text

    bool operator==(const TestCase&) const = default;
};

/// Parse the line-oriented model format (see README):
///   subject Class#member
///   fixture name: op(args); op(args)...
///   domain param: kind "label" = literal [-> subspec "label"]
///                 [expect obs(args) = literal, ...]
/// Diagnostics: T001 unknown subject, T002 parameter with no partitions,
/// T004 syntax error, T006 duplicate partition label. The view provides the
/// member signatures the model is validated against.
std::pair<TestModel, std::vector<ParseDiagnostic>>
load_test_model(const std::string& text, const ViewDocument& view);

/// All-combinations enumeration: the Cartesian product over every domain,
/// in declaration order. Case count equals the product of partition counts.
/// Cases whose partitions map to a subspec carrying @signals get an exception
/// expectation. T003: partition maps to an unknown subspec label.
std::pair<std::vector<TestCase>, std::vector<ParseDiagnostic>>
enumerate_cases(const TestModel& model, const ViewDocument& view);

/// "test" + UpperCamel(member) + UpperCamel(label); non-alphanumerics split
/// words. Collision handling (ordinal suffixes) happens during enumeration.
std::string test_name(const std::string& member, const std::string& case_label);

/// Machine-readable case table (JSON, schema_version 1). Byte-stable.
std::string emit_manifest(const TestModel& model, const std::vector<TestCase>& cases,
                          ViewKind view);

enum class SkeletonStyle { JUnitLike };

/// One @Test method per case: fixture construction, the call under test, and
/// either the expected observations as assertions, an expected-exception
/// harness, or TODO stubs quoting the governing @ensures clauses.
std::string emit_skeletons(const TestModel& model, const std::vector<TestCase>& cases,
                           SkeletonStyle style = SkeletonStyle::JUnitLike);

} // namespace good
