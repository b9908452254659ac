#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

// End-to-end runs of the installed command line tool, shelling out to the
// real binary so argument parsing and exit codes are covered too.

namespace {

namespace fs = std::filesystem;

const std::string kFixtures = FIXTURES_DIR;

struct CliRun {
    int status = -1;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path()
            / ("flvbridge_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE((out << content).good());
}

CliRun run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = work_dir() / ("stdout." + std::to_string(counter));
    const fs::path err = work_dir() / ("stderr." + std::to_string(counter));
    ++counter;

    const std::string cmd =
        std::string(CLI_BIN) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int rc = std::system(cmd.c_str());

    CliRun result;
    result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    result.out = slurp(out);
    result.err = slurp(err);
    return result;
}

const std::string kSampleRows = "A 0 - 15\n"
                                "V 0 key 2488\n"
                                "A 20 - 15\n"
                                "V 40 inter 700\n"
                                "A 40 - 15\n"
                                "V 80 inter 1500\n";

std::string reassembled_part(const std::string& unpack_stdout) {
    const std::string marker = "-- reassembled trace --\n";
    const auto at = unpack_stdout.find(marker);
    REQUIRE(at != std::string::npos);
    return unpack_stdout.substr(at + marker.size());
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("pack then unpack recovers the trace, binary and hex alike") {
    const auto trace = kFixtures + "/sample.trace";

    const auto bin = (work_dir() / "sample.payloads").string();
    auto packed = run_cli("pack " + trace + " --out " + bin);
    CHECK(packed.status == 0);
    CHECK(packed.err.find("6 messages -> 9 payloads") != std::string::npos);

    auto unpacked = run_cli("unpack " + bin);
    CHECK(unpacked.status == 0);
    CHECK(unpacked.out.find("seq=0 cseq=0") != std::string::npos);
    CHECK(unpacked.out.find("audio time=0") != std::string::npos);
    CHECK(unpacked.out.find("video time=0 frame=key") != std::string::npos);
    CHECK(unpacked.out.find("video time=40 frame=inter") != std::string::npos);
    CHECK(reassembled_part(unpacked.out) == kSampleRows);

    const auto hex = (work_dir() / "sample.hex").string();
    CHECK(run_cli("pack " + trace + " --out " + hex + " --hex").status == 0);
    auto unpacked_hex = run_cli("unpack " + hex + " --hex");
    CHECK(unpacked_hex.status == 0);
    CHECK(reassembled_part(unpacked_hex.out) == kSampleRows);
}

TEST_CASE("unpack flags corrupted records and salvages the rest") {
    const auto trace = kFixtures + "/sample.trace";
    const auto hex = (work_dir() / "corrupt.hex").string();
    REQUIRE(run_cli("pack " + trace + " --out " + hex + " --hex").status == 0);

    // Break the magic of the first record (the one-chunk audio message).
    auto blob = slurp(hex);
    REQUIRE(blob.substr(0, 8) == "52544d50");
    blob.replace(0, 8, "deadbeef");
    spit(hex, blob);

    auto unpacked = run_cli("unpack " + hex + " --hex");
    CHECK(unpacked.status == 0);
    CHECK(unpacked.out.find("#0 BAD MAGIC") != std::string::npos);
    // Everything after the damaged message still reassembles.
    CHECK(reassembled_part(unpacked.out) == kSampleRows.substr(kSampleRows.find('\n') + 1));
}

TEST_CASE("negotiate reproduces the reference answer for pinned ports") {
    auto run = run_cli("negotiate --offer " + kFixtures + "/sdp/offer_both.sdp"
                       + " --ports 22700 26498");
    CHECK(run.status == 0);
    const auto fragment = slurp(kFixtures + "/sdp/fragment_answer.sdp");
    REQUIRE(run.out.size() >= fragment.size());
    CHECK(run.out.substr(run.out.size() - fragment.size()) == fragment);
    CHECK(run.out.substr(0, 4) == "v=0\r");
}

TEST_CASE("negotiate turns down an offer with nothing we speak") {
    auto run = run_cli("negotiate --offer " + kFixtures + "/sdp/offer_pcmu_only.sdp");
    CHECK(run.status == 0);
    CHECK(run.out == "488\n");
}

TEST_CASE("negotiate fails loudly on unusable input") {
    const auto garbage = work_dir() / "garbage.sdp";
    spit(garbage, "this is not sdp\n");
    CHECK(run_cli("negotiate --offer " + garbage.string()).status == 2);
    CHECK(run_cli("negotiate --offer " + (work_dir() / "missing.sdp").string()).status == 2);
}

TEST_CASE("simulate is reproducible and reports a clean run") {
    const std::string args = "simulate --config " + kFixtures + "/sample_scenario.cfg --json";
    auto first = run_cli(args);
    auto second = run_cli(args);
    CHECK(first.status == 0);
    CHECK(first.out == second.out);
    CHECK(first.out.find("\"delivery_ratio\": 1.0") != std::string::npos);
    CHECK(first.out.find("\"messages_delivered\": 6") != std::string::npos);
    CHECK(first.out.find("\"media_bit_identical\": true") != std::string::npos);

    // Different seed, still a valid run; table output this time.
    auto reseeded = run_cli("simulate --config " + kFixtures
                            + "/sample_scenario.cfg --seed 123");
    CHECK(reseeded.status == 0);
    CHECK(reseeded.out.find("delivery ratio          1.000000") != std::string::npos);

    CHECK(run_cli("simulate --config " + (work_dir() / "no.cfg").string()).status == 2);
}

} // TEST_SUITE
