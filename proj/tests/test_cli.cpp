#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "good/parser.hpp"
#include "good/projector.hpp"
#include "support/testutil.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <unistd.h>

namespace fs = std::filesystem;
using testutil::run_process;

namespace {

const std::string kBin = GOOD_CLI_BIN;

std::string q(const std::string& s) { return "'" + s + "'"; }

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("good_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string str(const std::string& sub = "") const {
        return (sub.empty() ? path : path / sub).string();
    }
};

std::string cmd(const std::string& args) {
    return "GOOD_NO_COLOR=1 " + q(kBin) + " " + args + " 2>/dev/null";
}

} // namespace

TEST_CASE("project writes the external view and exits 0") {
    TempDir tmp;
    auto r = run_process(cmd("project " + q(testutil::corpus_path("Bag.java")) +
                             " --view external --out " + q(tmp.str())));
    CHECK(r.exit_code == 0);
    std::string out = testutil::read_file(tmp.str("Bag.external.java"));
    REQUIRE_FALSE(out.empty());

    // the written view matches the golden listing structurally
    good::ParseResult written = good::parse_master(out, "written");
    REQUIRE_FALSE(written.has_errors());
    good::ParseResult golden = good::parse_master(
        testutil::read_file(testutil::corpus_path("Bag.external.java")), "golden");
    CHECK(good::structurally_equal(written.document, golden.document));
}

TEST_CASE("project --view code writes a reparseable master") {
    TempDir tmp;
    auto r = run_process(cmd("project " + q(testutil::corpus_path("BagRobust.java")) +
                             " --view code --out " + q(tmp.str())));
    CHECK(r.exit_code == 0);
    std::string out = testutil::read_file(tmp.str("Bag.code.java"));
    good::ParseResult reparsed = good::parse_master(out, "code-view");
    CHECK(reparsed.diagnostics.empty());
    good::ParseResult original = good::parse_master(
        testutil::read_file(testutil::corpus_path("BagRobust.java")), "orig");
    CHECK(good::structurally_equal(reparsed.document, original.document));
}

TEST_CASE("project on a nonexistent file exits 3") {
    TempDir tmp;
    auto r = run_process(cmd("project /no/such/file.java --out " + q(tmp.str())));
    CHECK(r.exit_code == 3);
}

TEST_CASE("a file with several classes writes one view per class") {
    TempDir tmp;
    std::string multi = tmp.str("Multi.java");
    {
        std::ofstream out(multi);
        out << "public class One {\n"
            << "\n"
            << "  /**\n"
            << "   * @desc a\n"
            << "   */\n"
            << "  public void a()\n"
            << "}\n"
            << "public class Two {\n"
            << "\n"
            << "  /**\n"
            << "   * @desc b\n"
            << "   */\n"
            << "  public void b()\n"
            << "}\n";
    }
    auto r = run_process(cmd("project " + q(multi) + " --view external --out " +
                             q(tmp.str())));
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(tmp.str("One.external.java")));
    CHECK(fs::exists(tmp.str("Two.external.java")));
}

TEST_CASE("parse errors still produce recoverable views and exit 2") {
    TempDir tmp;
    std::string broken = tmp.str("Broken.java");
    {
        std::ofstream out(broken);
        out << "public class Ok {\n"
            << "\n"
            << "  /**\n"
            << "   * @desc fine\n"
            << "   */\n"
            << "  public void f()\n"
            << "}\n"
            << "this line is not a class\n";
    }
    auto r = run_process(cmd("project " + q(broken) + " --view external --out " +
                             q(tmp.str())));
    CHECK(r.exit_code == 2);
    CHECK(fs::exists(tmp.str("Ok.external.java")));
}

TEST_CASE("check on the corpus exits 0 and lists obligations") {
    auto r = run_process(cmd("check " + q(testutil::corpus_path("Bag.java"))));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("R1_invariant") != std::string::npos);
    CHECK(r.output.find("R2_precondition") != std::string::npos);
    CHECK(r.output.find("R3_postcondition") != std::string::npos);
}

TEST_CASE("check exits 1 on checker errors") {
    TempDir tmp;
    std::string bad = tmp.str("Bad.java");
    {
        std::ofstream out(bad);
        out << "public class Bad {\n"
            << "\n"
            << "  /**\n"
            << "   * @desc does things\n"
            << "   * @pure\n"
            << "   * @assignable state\n"
            << "   */\n"
            << "  public void f()\n"
            << "}\n";
    }
    auto r = run_process(cmd("check " + q(bad)));
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("E002") != std::string::npos);
}

TEST_CASE("machine check reports conform to the schema") {
    auto r = run_process(cmd("check --format machine " +
                             q(testutil::corpus_path("BagRobust.java"))));
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.output);
    CHECK(j.at("schema_version") == 1);
    CHECK(j.contains("diagnostics"));
    CHECK(j.contains("obligations"));
    bool has_r1 = false;
    for (const auto& ob : j.at("obligations"))
        if (ob.at("rule") == "R1_invariant") has_r1 = true;
    CHECK(has_r1);
}

TEST_CASE("machine reports are byte-identical across runs") {
    std::string c = cmd("check --format machine " +
                        q(testutil::corpus_path("BagRobust.java")));
    auto r1 = run_process(c);
    auto r2 = run_process(c);
    CHECK(r1.output == r2.output);
}

TEST_CASE("several input files process concurrently but report in order") {
    std::string c = cmd("check --format machine " +
                        q(testutil::corpus_path("Bag.java")) + " " +
                        q(testutil::corpus_path("BagRobust.java")));
    auto r1 = run_process(c);
    auto r2 = run_process(c);
    CHECK(r1.exit_code == 0);
    CHECK(r1.output == r2.output);
    auto j = nlohmann::json::parse(r1.output);
    // plain Bag: R1 + 6 R2 + 6 R3; robust Bag: R1 + 7 + 7 (remove pairs per label)
    CHECK(j.at("obligations").size() == 13 + 15);
}

TEST_CASE("warnings alone leave the exit code at 0") {
    TempDir tmp;
    std::string warn_only = tmp.str("WarnOnly.java");
    {
        std::ofstream out(warn_only);
        out << "public class WarnOnly {\n"
            << "\n"
            << "  /**\n"
            << "   * @desc does one thing\n"
            << "   */\n"
            << "  public void f()\n"
            << "}\n";
    }
    auto r = run_process(cmd("check " + q(warn_only)));
    CHECK(r.exit_code == 0); // W002 is only a warning
    CHECK(r.output.find("W002") != std::string::npos);
}

TEST_CASE("gen-tests derives the worked example cases") {
    TempDir tmp;
    auto r = run_process(cmd("gen-tests " + q(testutil::corpus_path("BagRobust.java")) +
                             " --model " + q(testutil::corpus_path("remove.model")) +
                             " --view external --out " + q(tmp.str())));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("3 case(s)") != std::string::npos);

    auto manifest = nlohmann::json::parse(testutil::read_file(tmp.str("Bag.remove.tests.json")));
    REQUIRE(manifest.at("cases").size() == 3);
    CHECK(manifest.at("cases").at(0).at("name") == "testRemoveLastOccurrence");

    std::string java = testutil::read_file(tmp.str("BagRemoveTests.java"));
    CHECK(java.find("assertThrows(ArgumentNotFoundException.class") != std::string::npos);
}

TEST_CASE("gen-tests without the model file exits 3") {
    TempDir tmp;
    auto r = run_process(cmd("gen-tests " + q(testutil::corpus_path("BagRobust.java")) +
                             " --model /no/such.model --out " + q(tmp.str())));
    CHECK(r.exit_code == 3);
}

TEST_CASE("workflow exits by the completion rule") {
    auto ok = run_process(cmd("workflow " +
                              q(testutil::corpus_path("state_consistent.json"))));
    CHECK(ok.exit_code == 0);
    auto bad = run_process(cmd("workflow " +
                               q(testutil::corpus_path("state_violation.json"))));
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("External View") != std::string::npos);
}

TEST_CASE("workflow machine format lists analysis activities on a fresh project") {
    TempDir tmp;
    std::string state = tmp.str("fresh.json");
    {
        std::ofstream out(state);
        out << "{\"schema_version\":1,\"statuses\":{}}\n";
    }
    auto r = run_process(cmd("workflow --format machine " + q(state)));
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.output);
    std::vector<std::string> startable = j.at("startable");
    CHECK(std::find(startable.begin(), startable.end(), "External Analysis") !=
          startable.end());
    CHECK(startable.size() == 3);
}

TEST_CASE("workflow accepts an edited graph file") {
    TempDir tmp;
    std::string graph = tmp.str("graph.json");
    auto w = run_process(cmd("workflow --write-default-graph " + q(graph)));
    CHECK(w.exit_code == 0);
    auto r = run_process(cmd("workflow " +
                             q(testutil::corpus_path("state_consistent.json")) +
                             " --graph " + q(graph)));
    CHECK(r.exit_code == 0);
}

TEST_CASE("config file supplies defaults, flags override") {
    TempDir tmp;
    std::string cfg = tmp.str("good.toml");
    {
        std::ofstream out(cfg);
        out << "# defaults for this project\n"
            << "view = internal\n"
            << "out = " << tmp.str("views") << "\n";
    }
    auto r = run_process(cmd("--config " + q(cfg) + " project " +
                             q(testutil::corpus_path("Bag.java"))));
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(tmp.str("views") + "/Bag.internal.java"));

    auto r2 = run_process(cmd("--config " + q(cfg) + " project " +
                              q(testutil::corpus_path("Bag.java")) +
                              " --view external"));
    CHECK(r2.exit_code == 0);
    CHECK(fs::exists(tmp.str("views") + "/Bag.external.java"));
}

TEST_CASE("GOOD_NO_COLOR strips styling") {
    auto r = run_process(cmd("check " + q(testutil::corpus_path("Bag.java"))));
    CHECK(r.output.find('\x1b') == std::string::npos);
}
