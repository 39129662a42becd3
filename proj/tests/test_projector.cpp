#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "good/parser.hpp"
#include "good/projector.hpp"
#include "support/randomdoc.hpp"
#include "support/testutil.hpp"

using namespace good;

namespace {

MasterDocument parse_corpus(const std::string& name) {
    ParseResult r = parse_master(testutil::read_file(testutil::corpus_path(name)), name);
    REQUIRE_MESSAGE(!r.has_errors(), name << " must parse cleanly");
    return std::move(r.document);
}

MasterDocument as_master(const ViewDocument& view) {
    MasterDocument doc;
    doc.source_name = view.provenance;
    doc.classes = view.classes;
    return doc;
}

} // namespace

TEST_CASE("golden: external projection of the Bag master matches the listing") {
    MasterDocument master = parse_corpus("Bag.java");
    MasterDocument golden = parse_corpus("Bag.external.java");
    ViewDocument projected = project(master, ViewKind::External);
    ViewDocument expected = project(golden, ViewKind::External);
    auto deltas = diff_views(expected, projected);
    for (const auto& d : deltas)
        MESSAGE(d.class_name << "." << d.member << " " << d.field << ": " << d.detail);
    CHECK(deltas.empty());
}

TEST_CASE("golden: internal projection of the Bag master matches the listing") {
    MasterDocument master = parse_corpus("Bag.java");
    MasterDocument golden = parse_corpus("Bag.internal.java");
    ViewDocument projected = project(master, ViewKind::Internal);
    ViewDocument expected = project(golden, ViewKind::Internal);
    auto deltas = diff_views(expected, projected);
    for (const auto& d : deltas)
        MESSAGE(d.class_name << "." << d.member << " " << d.field << ": " << d.detail);
    CHECK(deltas.empty());
}

TEST_CASE("projecting an empty document yields an empty view") {
    MasterDocument empty;
    for (ViewKind kind : {ViewKind::External, ViewKind::Internal, ViewKind::Code}) {
        ViewDocument v = project(empty, kind);
        CHECK(v.classes.empty());
        CHECK(render(v).empty());
    }
}

TEST_CASE("external projection strips private members, internals and represents") {
    MasterDocument master = parse_corpus("Bag.java");
    ViewDocument external = project(master, ViewKind::External);
    REQUIRE(external.classes.size() == 1);
    const ClassUnit& bag = external.classes[0];
    CHECK(bag.members.size() == 6); // lst is gone
    CHECK_FALSE(bag.internal_spec.has_value());
    CHECK(bag.external_spec.represents.empty());
    for (const auto& m : bag.members) {
        CAPTURE(m.signature.name);
        CHECK(m.visibility == Visibility::Public);
        CHECK_FALSE(m.internal_spec.has_value());
        CHECK_FALSE(m.body.has_value());
        if (m.external_spec) CHECK(m.external_spec->represents.empty());
    }
}

TEST_CASE("internal projection keeps all members but no bodies") {
    std::string src =
        "public class X {\n"
        "\n"
        "  /**\n"
        "   * @desc run\n"
        "   */\n"
        "  public void run() {\n"
        "    work();\n"
        "  }\n"
        "}\n";
    ParseResult parsed = parse_master(src, "x");
    REQUIRE(parsed.diagnostics.empty());
    ViewDocument internal = project(parsed.document, ViewKind::Internal);
    REQUIRE(internal.classes.at(0).members.size() == 1);
    CHECK_FALSE(internal.classes[0].members[0].body.has_value());
    ViewDocument code = project(parsed.document, ViewKind::Code);
    CHECK(code.classes.at(0).members.at(0).body.has_value());
}

TEST_CASE("member set is monotone along the view chain") {
    for (unsigned seed = 500; seed < 560; ++seed) {
        MasterDocument doc = testutil::random_document(seed);
        ViewDocument ext = project(doc, ViewKind::External);
        ViewDocument internal = project(doc, ViewKind::Internal);
        ViewDocument code = project(doc, ViewKind::Code);
        for (size_t c = 0; c < doc.classes.size(); ++c) {
            auto keys = [](const ClassUnit& cls) {
                std::vector<std::string> ks;
                for (const auto& m : cls.members) ks.push_back(member_key(m));
                return ks;
            };
            auto subset = [](const std::vector<std::string>& a,
                             const std::vector<std::string>& b) {
                for (const auto& k : a)
                    if (std::find(b.begin(), b.end(), k) == b.end()) return false;
                return true;
            };
            CHECK(subset(keys(ext.classes[c]), keys(internal.classes[c])));
            CHECK(subset(keys(internal.classes[c]), keys(code.classes[c])));
        }
    }
}

TEST_CASE("projection is stable under a Code round-trip") {
    for (unsigned seed = 600; seed < 640; ++seed) {
        MasterDocument doc = testutil::random_document(seed);
        MasterDocument code = as_master(project(doc, ViewKind::Code));
        for (ViewKind kind : {ViewKind::External, ViewKind::Internal, ViewKind::Code}) {
            CHECK(structurally_equal(project(code, kind), project(doc, kind)));
        }
    }
}

TEST_CASE("render is byte-stable") {
    MasterDocument master = parse_corpus("BagRobust.java");
    ViewDocument v = project(master, ViewKind::Internal);
    CHECK(render(v) == render(v));
}

TEST_CASE("render/parse round-trip reaches a fixpoint on the corpus") {
    for (const char* name : {"Bag.java", "BagRobust.java", "Bag.external.java"}) {
        MasterDocument doc = parse_corpus(name);
        std::string rendered = render(project(doc, ViewKind::Code));
        ParseResult reparsed = parse_master(rendered, "<render>");
        CAPTURE(name);
        CHECK(reparsed.diagnostics.empty());
        CHECK(structurally_equal(reparsed.document, doc));
    }
}

TEST_CASE("render/parse round-trip on random documents") {
    for (unsigned seed = 700; seed < 760; ++seed) {
        MasterDocument doc = testutil::random_document(seed);
        std::string rendered = render(project(doc, ViewKind::Code));
        ParseResult reparsed = parse_master(rendered, "<render>");
        CAPTURE(seed);
        CHECK(reparsed.diagnostics.empty());
        CHECK(structurally_equal(reparsed.document, normalize(doc)));
    }
}

TEST_CASE("diff of identical views is empty, for every kind") {
    MasterDocument master = parse_corpus("BagRobust.java");
    for (ViewKind kind : {ViewKind::External, ViewKind::Internal, ViewKind::Code}) {
        ViewDocument v = project(master, kind);
        CHECK(diff_views(v, v).empty());
    }
}

TEST_CASE("diff pinpoints a deleted precondition") {
    MasterDocument master = parse_corpus("Bag.java");
    ViewDocument expected = project(master, ViewKind::External);
    ViewDocument mutated = expected;
    for (auto& m : mutated.classes[0].members)
        if (m.signature.name == "remove") m.external_spec->preconditions.clear();
    auto deltas = diff_views(expected, mutated);
    REQUIRE(deltas.size() == 1);
    CHECK(deltas[0].class_name == "Bag");
    CHECK(deltas[0].member == "remove(T)");
    CHECK(deltas[0].field == "external.requires");
    CHECK(deltas[0].change == ChangeKind::Removed);
}

TEST_CASE("diff flags a member a view kind does not permit") {
    MasterDocument master = parse_corpus("Bag.java");
    ViewDocument expected = project(master, ViewKind::External);
    ViewDocument actual = expected;
    Member intruder;
    intruder.kind = MemberKind::Attribute;
    intruder.visibility = Visibility::Private;
    intruder.signature.name = "lst";
    intruder.signature.declared_type = TypeRef{"List<T>"};
    actual.classes[0].members.push_back(intruder);
    auto deltas = diff_views(expected, actual);
    REQUIRE(deltas.size() == 1);
    CHECK(deltas[0].change == ChangeKind::Added);
    CHECK(deltas[0].detail.find("not permitted") != std::string::npos);
}

TEST_CASE("diff of mismatched kinds is a usage error") {
    MasterDocument master = parse_corpus("Bag.java");
    auto deltas = diff_views(project(master, ViewKind::External),
                             project(master, ViewKind::Internal));
    REQUIRE(deltas.size() == 1);
    CHECK(deltas[0].field == "kind");
}

TEST_CASE("render distinguishes distinct structures") {
    MasterDocument a = parse_corpus("Bag.java");
    MasterDocument b = a;
    // tweak one clause
    for (auto& m : b.classes[0].members)
        if (m.signature.name == "remove")
            m.external_spec->preconditions[0] = make_clause("B(elem) >= 0");
    CHECK(render(project(a, ViewKind::External)) !=
          render(project(b, ViewKind::External)));

    // and the general form: distinct normalized structures never collide,
    // because rendering reparses to the structure it came from
    for (unsigned seed = 900; seed < 920; ++seed) {
        MasterDocument x = testutil::random_document(seed);
        MasterDocument y = testutil::random_document(seed + 5000);
        if (structurally_equal(x, y)) continue;
        CHECK(render(project(x, ViewKind::Code)) != render(project(y, ViewKind::Code)));
    }
}

TEST_CASE("sync soundness on random documents") {
    for (unsigned seed = 800; seed < 830; ++seed) {
        MasterDocument doc = testutil::random_document(seed);
        for (ViewKind kind : {ViewKind::External, ViewKind::Internal, ViewKind::Code})
            CHECK(diff_views(project(doc, kind), project(doc, kind)).empty());
    }
}

TEST_CASE("class-level invariants appear per the declaring level") {
    std::string src =
        "/**\n"
        " * Holder of one value.\n"
        " * @inv value() >= 0\n"
        " */\n"
        "public class Holder {\n"
        "  /**\n"
        "   * @inv 0 <= raw\n"
        "   */\n"
        "\n"
        "  /**\n"
        "   * @desc the stored value\n"
        "   */\n"
        "  public int value()\n"
        "}\n";
    ParseResult parsed = parse_master(src, "holder");
    REQUIRE(parsed.diagnostics.empty());
    ViewDocument ext = project(parsed.document, ViewKind::External);
    ViewDocument internal = project(parsed.document, ViewKind::Internal);
    CHECK(ext.classes.at(0).external_spec.invariants.size() == 1);
    CHECK_FALSE(ext.classes.at(0).internal_spec.has_value());
    REQUIRE(internal.classes.at(0).internal_spec.has_value());
    CHECK(internal.classes.at(0).internal_spec->invariants.size() == 1);
    CHECK(internal.classes.at(0).external_spec.invariants.size() == 1);
}
