#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "good/checker.hpp"
#include "good/parser.hpp"
#include "support/testutil.hpp"

#include <map>
#include <set>

using namespace good;

namespace {

MasterDocument parse_corpus(const std::string& name) {
    ParseResult r = parse_master(testutil::read_file(testutil::corpus_path(name)), name);
    REQUIRE_MESSAGE(!r.has_errors(), name << " must parse cleanly");
    return std::move(r.document);
}

MasterDocument parse_src(const std::string& src) {
    ParseResult r = parse_master(src, "<test>");
    return std::move(r.document);
}

std::multiset<std::string> codes_of(const std::vector<Diagnostic>& diags,
                                    Severity severity) {
    std::multiset<std::string> out;
    for (const auto& d : diags)
        if (d.severity == severity) out.insert(d.code);
    return out;
}

std::string mutate(const std::string& text, const std::string& from,
                   const std::string& to) {
    size_t pos = text.find(from);
    REQUIRE_MESSAGE(pos != std::string::npos, "mutation anchor not found: " << from);
    std::string out = text;
    out.replace(pos, from.size(), to);
    return out;
}

} // namespace

TEST_CASE("the untouched corpus is clean") {
    for (const char* name : {"Bag.java", "BagRobust.java"}) {
        CAPTURE(name);
        auto diags = check(parse_corpus(name));
        CHECK(codes_of(diags, Severity::Error).empty());
        CHECK(codes_of(diags, Severity::Warning).empty());
    }
}

TEST_CASE("E002: @pure with a non-empty @assignable") {
    std::string text = testutil::read_file(testutil::corpus_path("Bag.java"));
    std::string mutated = mutate(
        text, "   * @pure\n   * @ensures mult(elem) = B(elem)",
        "   * @pure\n   * @assignable lst\n   * @ensures mult(elem) = B(elem)");
    ParseResult r = parse_master(mutated, "Bag.java");
    REQUIRE(r.diagnostics.empty());
    auto diags = check(r.document);
    auto errors = codes_of(diags, Severity::Error);
    CHECK(errors == std::multiset<std::string>{"E002"});
    bool on_mult = false;
    for (const auto& d : diags)
        if (d.code == "E002" && d.subject.member == std::optional<std::string>("mult(T)"))
            on_mult = true;
    CHECK(on_mult);
}

TEST_CASE("E001: public member without external @desc") {
    std::string text = testutil::read_file(testutil::corpus_path("Bag.java"));
    std::string mutated =
        mutate(text, "   * @desc Adds an element.\n   * @ensures B(elem)",
               "   * @ensures B(elem)");
    auto diags = check(parse_src(mutated));
    CHECK(codes_of(diags, Severity::Error) == std::multiset<std::string>{"E001"});
}

TEST_CASE("E003: @represents in an external spec block") {
    std::string text = testutil::read_file(testutil::corpus_path("Bag.java"));
    std::string mutated =
        mutate(text, "   * @desc Removes one instance of elem\n   * @requires",
               "   * @desc Removes one instance of elem\n   * @represents B = lst\n"
               "   * @requires");
    auto diags = check(parse_src(mutated));
    CHECK(codes_of(diags, Severity::Error) == std::multiset<std::string>{"E003"});
}

TEST_CASE("E004: @signals in a subspec with empty @requires") {
    std::string text = testutil::read_file(testutil::corpus_path("BagRobust.java"));
    // drop the @requires of the external non-happy subspec
    std::string mutated =
        mutate(text, "   *   @requires B(elem) = 0\n   *   @ensures \\forall e: T :: "
                     "B(e) = \\old(B(e))\n",
               "   *   @ensures \\forall e: T :: B(e) = \\old(B(e))\n");
    auto diags = check(parse_src(mutated));
    CHECK(codes_of(diags, Severity::Error) == std::multiset<std::string>{"E004"});
}

TEST_CASE("E005: flat clauses mixed with @sub blocks") {
    std::string text = testutil::read_file(testutil::corpus_path("BagRobust.java"));
    std::string mutated =
        mutate(text, "   * @desc Removes one instance of elem\n   * @sub",
               "   * @desc Removes one instance of elem\n   * @requires B(elem) > 0\n"
               "   * @sub");
    auto diags = check(parse_src(mutated));
    CHECK(codes_of(diags, Severity::Error) == std::multiset<std::string>{"E005"});
}

TEST_CASE("E006: duplicate subspec labels") {
    std::string text = testutil::read_file(testutil::corpus_path("BagRobust.java"));
    std::string mutated = mutate(text, "   * @sub elem is not present {\n   *   @requires B(elem) = 0",
                                 "   * @sub elem is present {\n   *   @requires B(elem) = 0");
    auto diags = check(parse_src(mutated));
    auto errors = codes_of(diags, Severity::Error);
    CHECK(errors.count("E006") == 1);
    // the duplicated label also breaks the cross-level pairing; only warnings
    // may accompany the targeted error
    CHECK(errors.size() == 1);
}

TEST_CASE("W001: private member without any @desc") {
    auto diags = check(parse_src("public class X {\n"
                                 "  private int cnt;\n"
                                 "}\n"));
    CHECK(codes_of(diags, Severity::Warning) == std::multiset<std::string>{"W001"});
}

TEST_CASE("W002: external spec without an internal one") {
    auto diags = check(parse_src("public class X {\n"
                                 "\n"
                                 "  /**\n"
                                 "   * @desc runs\n"
                                 "   */\n"
                                 "  public void run()\n"
                                 "}\n"));
    CHECK(codes_of(diags, Severity::Warning) == std::multiset<std::string>{"W002"});
}

TEST_CASE("W003: overlapping subspec preconditions") {
    auto diags = check(parse_src("public class X {\n"
                                 "\n"
                                 "  /**\n"
                                 "   * @desc take\n"
                                 "   * @sub small {\n"
                                 "   *   @requires n(x) > 0\n"
                                 "   * }\n"
                                 "   * @sub large {\n"
                                 "   *   @requires n(x) > 5\n"
                                 "   * }\n"
                                 "   */\n"
                                 "  public void take(int x)\n"
                                 "}\n"));
    auto warnings = codes_of(diags, Severity::Warning);
    CHECK(warnings.count("W003") == 1);
}

TEST_CASE("W003 is per pair: three subspecs, one overlapping pair") {
    auto diags = check(parse_src("public class X {\n"
                                 "\n"
                                 "  /**\n"
                                 "   * @desc f\n"
                                 "   * @sub negative {\n"
                                 "   *   @requires n(x) < 0\n"
                                 "   * }\n"
                                 "   * @sub small {\n"
                                 "   *   @requires n(x) >= 0\n"
                                 "   * }\n"
                                 "   * @sub large {\n"
                                 "   *   @requires n(x) > 5\n"
                                 "   * }\n"
                                 "   */\n"
                                 "  public void f(int x)\n"
                                 "}\n"));
    // negative/small and negative/large are disjoint; small/large overlap
    auto warnings = codes_of(diags, Severity::Warning);
    CHECK(warnings.count("W003") == 1);
}

TEST_CASE("W003 is not emitted for provably disjoint subspecs") {
    MasterDocument doc = parse_corpus("BagRobust.java");
    auto diags = check(doc);
    CHECK(codes_of(diags, Severity::Warning).count("W003") == 0);
}

TEST_CASE("W004: unmatched subspec labels across levels") {
    std::string text = testutil::read_file(testutil::corpus_path("BagRobust.java"));
    // rename the label only in the internal block of remove
    std::string mutated =
        mutate(text, "   * @sub elem is not present {\n   *   @requires mult(elem) = 0",
               "   * @sub element missing {\n   *   @requires mult(elem) = 0");
    auto diags = check(parse_src(mutated));
    auto warnings = codes_of(diags, Severity::Warning);
    CHECK(warnings.count("W004") == 1);
}

TEST_CASE("W005: \\old outside a postcondition") {
    auto diags = check(parse_src("public class X {\n"
                                 "\n"
                                 "  /**\n"
                                 "   * @desc step\n"
                                 "   * @requires \\old(n()) > 0\n"
                                 "   */\n"
                                 "  public void step()\n"
                                 "}\n"));
    auto warnings = codes_of(diags, Severity::Warning);
    CHECK(warnings.count("W005") == 1);
}

TEST_CASE("W006: subspec with no @requires and no @signals") {
    auto diags = check(parse_src("public class X {\n"
                                 "\n"
                                 "  /**\n"
                                 "   * @desc f\n"
                                 "   * @sub base {\n"
                                 "   *   @ensures n() = 0\n"
                                 "   * }\n"
                                 "   * @sub other {\n"
                                 "   *   @requires n() > 0\n"
                                 "   * }\n"
                                 "   */\n"
                                 "  public void f()\n"
                                 "}\n"));
    auto warnings = codes_of(diags, Severity::Warning);
    CHECK(warnings.count("W006") == 1);
}

TEST_CASE("check is deterministic for structurally equal inputs") {
    MasterDocument doc = parse_corpus("BagRobust.java");
    MasterDocument canon = normalize(doc);
    CHECK(check(doc) == check(canon));
}

// ---------------------------------------------------------------------------
// disjointness, interval fragment
// ---------------------------------------------------------------------------

TEST_CASE("interval disjointness on the robustness preconditions") {
    auto gt = parse_clause_expression("mult(elem) > 0");
    auto eq = parse_clause_expression("mult(elem) = 0");
    REQUIRE(gt);
    REQUIRE(eq);
    CHECK(check_disjoint_interval(*gt, *eq) == Disjointness::Disjoint);
}

TEST_CASE("overlapping ranges are reported as overlapping") {
    auto a = parse_clause_expression("t > 0");
    auto b = parse_clause_expression("t > 5");
    CHECK(check_disjoint_interval(*a, *b) == Disjointness::Overlapping);
}

TEST_CASE("everything outside the fragment is unknown") {
    auto formal = parse_clause_expression("t > 0");
    auto other_term = parse_clause_expression("u > 0");
    auto non_const = parse_clause_expression("t > u");
    auto quantified = parse_clause_expression("\\forall e: T :: B(e) = 0");
    CHECK(check_disjoint_interval(*formal, *other_term) == Disjointness::Unknown);
    CHECK(check_disjoint_interval(*formal, *non_const) == Disjointness::Unknown);
    CHECK(check_disjoint_interval(*formal, *quantified) == Disjointness::Unknown);
}

TEST_CASE("conjunctions and negative constants stay in the fragment") {
    auto a = parse_clause_expression("t >= -3 && t <= -1");
    auto b = parse_clause_expression("t = 0");
    auto c = parse_clause_expression("t != 0");
    REQUIRE(a);
    CHECK(check_disjoint_interval(*a, *b) == Disjointness::Disjoint);
    CHECK(check_disjoint_interval(*a, *c) == Disjointness::Overlapping);
    CHECK(check_disjoint_interval(*b, *c) == Disjointness::Disjoint);
}

TEST_CASE("mirrored comparisons normalize") {
    auto a = parse_clause_expression("0 < t");
    auto b = parse_clause_expression("t <= 0");
    CHECK(check_disjoint_interval(*a, *b) == Disjointness::Disjoint);
}

// ---------------------------------------------------------------------------
// refinement obligations
// ---------------------------------------------------------------------------

TEST_CASE("obligation counts on the Bag corpus") {
    MasterDocument doc = parse_corpus("Bag.java");
    auto obligations = refinement_obligations(doc.classes.at(0));

    int r1 = 0, r2 = 0, r3 = 0;
    for (const auto& ob : obligations) {
        switch (ob.rule) {
        case RefinementRule::R1_Invariant: ++r1; break;
        case RefinementRule::R2_Precondition: ++r2; break;
        case RefinementRule::R3_Postcondition: ++r3; break;
        }
        if (ob.rule == RefinementRule::R1_Invariant)
            CHECK_FALSE(ob.subject.member.has_value());
        else
            CHECK(ob.subject.member.has_value());
    }
    CHECK(r1 == 1);
    // six public members carry both spec levels (constructor included)
    CHECK(r2 == 6);
    CHECK(r3 == 6);
}

TEST_CASE("R1 carries the representation relation") {
    MasterDocument doc = parse_corpus("Bag.java");
    auto obligations = refinement_obligations(doc.classes.at(0));
    const Obligation* r1 = nullptr;
    for (const auto& ob : obligations)
        if (ob.rule == RefinementRule::R1_Invariant) r1 = &ob;
    REQUIRE(r1 != nullptr);
    bool has_represents = false;
    for (const auto& c : r1->antecedents)
        if (c.raw.find("\\num_of i: int") != std::string::npos) has_represents = true;
    CHECK(has_represents);
    // no external class invariant in the listing: vacuously discharged
    CHECK(r1->consequent.empty());
    CHECK(r1->status == ObligationStatus::TriviallyDischarged);
}

TEST_CASE("add's R3 consequent carries the frequency postcondition") {
    MasterDocument doc = parse_corpus("Bag.java");
    auto obligations = refinement_obligations(doc.classes.at(0));
    const Obligation* r3 = nullptr;
    for (const auto& ob : obligations)
        if (ob.rule == RefinementRule::R3_Postcondition &&
            ob.subject.member == std::optional<std::string>("add(T)"))
            r3 = &ob;
    REQUIRE(r3 != nullptr);
    bool found = false;
    for (const auto& c : r3->consequent)
        if (c.raw == "B(elem) = \\old(B(elem)) + 1") found = true;
    CHECK(found);
    CHECK(r3->status == ObligationStatus::Manual);
}

TEST_CASE("remove's R3 needs manual discharge") {
    MasterDocument doc = parse_corpus("Bag.java");
    auto obligations = refinement_obligations(doc.classes.at(0));
    for (const auto& ob : obligations)
        if (ob.rule == RefinementRule::R3_Postcondition &&
            ob.subject.member == std::optional<std::string>("remove(T)"))
            CHECK(ob.status == ObligationStatus::Manual);
}

TEST_CASE("identity refinement discharges trivially") {
    MasterDocument doc = parse_src("public class X {\n"
                                   "\n"
                                   "  /**\n"
                                   "   * @desc f\n"
                                   "   * @requires x > 0\n"
                                   "   * @ensures y() = x\n"
                                   "   */\n"
                                   "  public void f(int x)\n"
                                   "}\n");
    auto obligations = refinement_obligations(doc.classes.at(0));
    REQUIRE(obligations.size() == 3); // R1 + R2 + R3
    for (const auto& ob : obligations) {
        CAPTURE(to_string(ob.rule));
        CHECK(ob.status == ObligationStatus::TriviallyDischarged);
    }
}

TEST_CASE("subspec obligations pair by label") {
    MasterDocument doc = parse_corpus("BagRobust.java");
    auto obligations = refinement_obligations(doc.classes.at(0));
    int labeled = 0;
    for (const auto& ob : obligations) {
        if (ob.subject.member != std::optional<std::string>("remove(T)")) continue;
        REQUIRE(ob.subspec_label.has_value());
        ++labeled;
    }
    CHECK(labeled == 4); // R2+R3 for each of the two labels
}

TEST_CASE("discharge_trivial is a syntactic subset check") {
    Obligation ob;
    ob.rule = RefinementRule::R2_Precondition;
    ob.subject = {"X", "f()"};
    ob.antecedents.push_back(make_clause("x > 0"));
    ob.consequent.push_back(make_clause("x > 0"));
    CHECK(discharge_trivial(ob).status == ObligationStatus::TriviallyDischarged);

    ob.consequent.clear();
    CHECK(discharge_trivial(ob).status == ObligationStatus::TriviallyDischarged);

    ob.consequent.push_back(make_clause("x >= 0"));
    CHECK(discharge_trivial(ob).status == ObligationStatus::Manual);
}

TEST_CASE("trivial discharge is sound: re-checkable as a subset") {
    for (const char* name : {"Bag.java", "BagRobust.java"}) {
        MasterDocument doc = parse_corpus(name);
        for (const auto& cls : doc.classes) {
            for (const auto& ob : refinement_obligations(cls)) {
                if (ob.status != ObligationStatus::TriviallyDischarged) continue;
                std::set<std::string> ante;
                for (const auto& c : ob.antecedents) ante.insert(normalize_text(c.raw));
                for (const auto& c : ob.consequent) {
                    CAPTURE(c.raw);
                    CHECK(ante.count(normalize_text(c.raw)) == 1);
                }
            }
        }
    }
}

TEST_CASE("obligations are deterministic") {
    MasterDocument doc = parse_corpus("BagRobust.java");
    CHECK(refinement_obligations(doc.classes.at(0)) ==
          refinement_obligations(normalize(doc).classes.at(0)));
}
