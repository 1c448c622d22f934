#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "test_util.hpp"

using testutil::TempDir;
using testutil::read_file;
using testutil::write_file;

namespace {

std::string cli_path() {
    const char* p = std::getenv("EIGENEXPR_CLI");
    REQUIRE_MESSAGE(p != nullptr,
                    "EIGENEXPR_CLI must point at the eigenexpr binary");
    return p;
}

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

RunResult run(const std::string& args, const TempDir& tmp,
              const std::string& env = "") {
    static int counter = 0;
    const std::string out_file = tmp.file("out" + std::to_string(counter));
    const std::string err_file = tmp.file("err" + std::to_string(counter));
    ++counter;
    const std::string cmd = env + cli_path() + " " + args + " >" + out_file +
                            " 2>" + err_file;
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_file(out_file);
    r.err = read_file(err_file);
    return r;
}

// Generates a small dataset and returns its directory.
std::string make_dataset(const TempDir& tmp, const std::string& name,
                         const std::string& extra = "") {
    const std::string dir = tmp.file(name);
    const RunResult r = run("synth --classes 3 --train 4 --test 2 --width 16 "
                            "--height 16 --noise 0.05 --seed 11 --out " +
                                dir + extra,
                            tmp);
    REQUIRE(r.exit_code == 0);
    return dir;
}

} // namespace

TEST_CASE("cli: usage errors exit 1") {
    TempDir tmp("cli_usage");
    CHECK(run("", tmp).exit_code == 1);                    // missing subcommand
    CHECK(run("bogus", tmp).exit_code == 1);               // unknown subcommand
    CHECK(run("train --model m", tmp).exit_code == 1);     // missing required
    CHECK(run("train --nope x", tmp).exit_code == 1);      // unknown flag
    CHECK(run("--help", tmp).exit_code == 0);              // help is success
    CHECK(run("train --help", tmp).exit_code == 0);
}

TEST_CASE("cli: synth then train round trip") {
    TempDir tmp("cli_train");
    const std::string data = make_dataset(tmp, "data");
    CHECK(read_file(data + "/manifest.csv").find("path,label,subject,split") == 0);

    const std::string model = tmp.file("model.eigenmodel");
    const RunResult r = run("train --manifest " + data +
                                "/manifest.csv --width 16 --height 16 --model " +
                                model,
                            tmp);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("M=12") != std::string::npos);
    CHECK(r.out.find("N=256") != std::string::npos);
    CHECK(r.out.find("k=") != std::string::npos);
    CHECK(r.out.find("cumulative variance") != std::string::npos);

    SUBCASE("inspect agrees with train output") {
        const RunResult ri = run("inspect --model " + model, tmp);
        CHECK(ri.exit_code == 0);
        const std::size_t kpos = r.out.find("k=");
        const std::string k = r.out.substr(kpos + 2, r.out.find('\n', kpos) -
                                                         kpos - 2);
        CHECK(ri.out.find("components: k=" + k) != std::string::npos);
        CHECK(ri.out.find("training samples: M=12") != std::string::npos);
        // Per-label counts (4 training images each) sum to M.
        CHECK(ri.out.find("happy: 4") != std::string::npos);
        CHECK(ri.out.find("sad: 4") != std::string::npos);
        CHECK(ri.out.find("fear: 4") != std::string::npos);
        // Spectrum lines print in descending eigenvalue order.
        std::vector<double> spectrum;
        std::istringstream lines(ri.out);
        for (std::string line; std::getline(lines, line);) {
            double idx, ev;
            if (std::sscanf(line.c_str(), " %lf: %lf", &idx, &ev) == 2)
                spectrum.push_back(ev);
        }
        REQUIRE(spectrum.size() >= 2);
        for (std::size_t i = 0; i + 1 < spectrum.size(); ++i)
            CHECK(spectrum[i] >= spectrum[i + 1]);
    }

    SUBCASE("full variance keeps the full rank of the centered data") {
        const std::string full = tmp.file("full.eigenmodel");
        const RunResult rf = run("train --manifest " + data +
                                     "/manifest.csv --width 16 --height 16 "
                                     "--variance 1.0 --model " + full,
                                 tmp);
        CHECK(rf.exit_code == 0);
        // 12 noisy training images span M - 1 = 11 centered directions.
        CHECK(rf.out.find("k=11") != std::string::npos);
    }

    SUBCASE("train errors exit 2 naming the stage") {
        const RunResult bad = run("train --manifest " + tmp.file("absent.csv") +
                                      " --model " + tmp.file("x.model"),
                                  tmp);
        CHECK(bad.exit_code == 2);
        CHECK(bad.err.find("ingest") != std::string::npos);
    }

    SUBCASE("one training sample exits 2 with a clear message") {
        const std::string one = tmp.file("one");
        run("synth --classes 2 --train 1 --test 1 --width 16 --height 16 "
            "--noise 0 --seed 1 --out " + one, tmp);
        // Rewrite the manifest to keep a single training row.
        std::string manifest = read_file(one + "/manifest.csv");
        std::string kept = "path,label,subject,split\n";
        std::size_t rows = 0;
        for (std::size_t pos = manifest.find('\n') + 1; pos < manifest.size();) {
            const std::size_t end = manifest.find('\n', pos);
            const std::string line = manifest.substr(pos, end - pos);
            if (line.find(",train") != std::string::npos && rows++ == 0)
                kept += line + "\n";
            pos = end + 1;
        }
        write_file(one + "/manifest.csv", kept);
        const RunResult bad = run("train --manifest " + one +
                                      "/manifest.csv --width 16 --height 16 "
                                      "--model " + tmp.file("y.model"),
                                  tmp);
        CHECK(bad.exit_code == 2);
        CHECK(bad.err.find("need at least 2 training samples") !=
              std::string::npos);
    }
}

TEST_CASE("cli: classify a known training image") {
    TempDir tmp("cli_classify");
    const std::string data = make_dataset(tmp, "data");
    const std::string model = tmp.file("model.eigenmodel");
    REQUIRE(run("train --manifest " + data +
                    "/manifest.csv --width 16 --height 16 --variance 1.0 "
                    "--model " + model,
                tmp).exit_code == 0);

    const std::string probe = data + "/images/happy_train_000.pgm";
    const RunResult r = run("classify --model " + model + " --image " + probe,
                            tmp);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("label: happy") != std::string::npos);
    CHECK(r.out.find("distance: 0.000000") != std::string::npos);

    SUBCASE("--top controls ranked line count") {
        const RunResult r3 = run("classify --model " + model + " --image " +
                                     probe + " --top 3",
                                 tmp);
        std::size_t ranked_lines = 0;
        for (std::size_t pos = 0;
             (pos = r3.out.find("\n  ", pos)) != std::string::npos; ++pos)
            ++ranked_lines;
        CHECK(ranked_lines == 3);

        const RunResult rbig = run("classify --model " + model + " --image " +
                                       probe + " --top 99",
                                   tmp);
        ranked_lines = 0;
        for (std::size_t pos = 0;
             (pos = rbig.out.find("\n  ", pos)) != std::string::npos; ++pos)
            ++ranked_lines;
        CHECK(ranked_lines == 12); // M < 99
    }

    SUBCASE("--json matches the plain fields") {
        const RunResult rj = run("classify --model " + model + " --image " +
                                     probe + " --json",
                                 tmp);
        CHECK(rj.exit_code == 0);
        const auto j = nlohmann::json::parse(rj.out);
        CHECK(j["label"] == "happy");
        CHECK(j["distance"].get<double>() <= 1e-9);
        CHECK(j["rejected"] == false);
        CHECK(j["ranked"].size() == 3);
        CHECK(j["ranked"][0]["label"] == "happy");
    }

    SUBCASE("bad metric is a data error") {
        CHECK(run("classify --model " + model + " --image " + probe +
                      " --metric manhattan",
                  tmp).exit_code == 2);
    }

    SUBCASE("nearest_centroid method works") {
        const RunResult rc = run("classify --model " + model + " --image " +
                                     probe + " --method nearest_centroid",
                                 tmp);
        CHECK(rc.exit_code == 0);
        CHECK(rc.out.find("label: happy") != std::string::npos);
    }
}

TEST_CASE("cli: evaluate writes table, report, and chart deterministically") {
    TempDir tmp("cli_eval");
    const std::string data = make_dataset(tmp, "data");
    const std::string model = tmp.file("model.eigenmodel");
    REQUIRE(run("train --manifest " + data +
                    "/manifest.csv --width 16 --height 16 --model " + model,
                tmp).exit_code == 0);

    const RunResult r = run("evaluate --model " + model + " --manifest " + data +
                                "/manifest.csv --report " + tmp.file("rep.csv") +
                                " --chart " + tmp.file("chart.csv"),
                            tmp);
    CHECK(r.exit_code == 0);
    // Results-table header and the three class rows plus a total.
    CHECK(r.out.find("total image") != std::string::npos);
    CHECK(r.out.find("feeling") != std::string::npos);
    CHECK(r.out.find("true rate %") != std::string::npos);
    CHECK(r.out.find("happy") != std::string::npos);
    CHECK(r.out.find("total") != std::string::npos);

    const std::string report = read_file(tmp.file("rep.csv"));
    CHECK(report.find("total image,feeling,tested image") == 0);
    const std::string chart = read_file(tmp.file("chart.csv"));
    CHECK(chart.find("label,true_rate,false_rate") == 0);

    SUBCASE("rerun is byte-identical") {
        const RunResult r2 = run("evaluate --model " + model + " --manifest " +
                                     data + "/manifest.csv --report " +
                                     tmp.file("rep2.csv") + " --chart " +
                                     tmp.file("chart2.csv"),
                                 tmp);
        CHECK(r2.exit_code == 0);
        CHECK(r2.out == r.out);
        CHECK(read_file(tmp.file("rep2.csv")) == report);
        CHECK(read_file(tmp.file("chart2.csv")) == chart);
    }

    SUBCASE("threads env var does not change bytes") {
        const RunResult r2 = run("evaluate --model " + model + " --manifest " +
                                     data + "/manifest.csv",
                                 tmp, "EIGENEXPR_THREADS=3 ");
        CHECK(r2.exit_code == 0);
        CHECK(r2.out == r.out);
    }

    SUBCASE("--format csv renders the csv table on stdout") {
        const RunResult rc = run("evaluate --model " + model + " --manifest " +
                                     data + "/manifest.csv --format csv",
                                 tmp);
        CHECK(rc.exit_code == 0);
        CHECK(rc.out.find("total image,feeling,tested image") == 0);
    }

    SUBCASE("json output parses and totals satisfy tested = true + false") {
        const RunResult rj = run("evaluate --model " + model + " --manifest " +
                                     data + "/manifest.csv --json",
                                 tmp);
        CHECK(rj.exit_code == 0);
        const auto j = nlohmann::json::parse(rj.out);
        const auto& total = j["total"];
        CHECK(total["tested"].get<std::size_t>() ==
              total["true_classify"].get<std::size_t>() +
                  total["false_classify"].get<std::size_t>());
    }

    SUBCASE("empty test split exits 2") {
        const std::string no_test = tmp.file("notest");
        run("synth --classes 2 --train 3 --test 0 --width 16 --height 16 "
            "--noise 0 --seed 2 --out " + no_test, tmp);
        const RunResult bad = run("evaluate --model " + model + " --manifest " +
                                      no_test + "/manifest.csv",
                                  tmp);
        CHECK(bad.exit_code == 2);
        CHECK(bad.err.find("no test-split samples") != std::string::npos);
    }
}

TEST_CASE("cli: synth is deterministic and arithmetic checks out") {
    TempDir tmp("cli_synth");
    const std::string a = make_dataset(tmp, "a");
    const std::string b = make_dataset(tmp, "b");
    CHECK(read_file(a + "/manifest.csv") == read_file(b + "/manifest.csv"));
    CHECK(read_file(a + "/images/happy_train_000.pgm") ==
          read_file(b + "/images/happy_train_000.pgm"));

    // 7 classes x (20 + 10) images -> 210 manifest rows.
    const std::string big = tmp.file("big");
    const RunResult r = run("synth --classes 7 --train 20 --test 10 --width 16 "
                            "--height 16 --noise 0.05 --seed 42 --out " + big,
                            tmp);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("rows: 210") != std::string::npos);
    const std::string manifest = read_file(big + "/manifest.csv");
    std::size_t rows = 0;
    for (char c : manifest) rows += c == '\n';
    CHECK(rows == 211); // header + 210 entries

    SUBCASE("unwritable output directory exits 2") {
        write_file(tmp.file("blocker"), "not a directory");
        CHECK(run("synth --classes 2 --train 2 --test 1 --out " +
                      tmp.file("blocker") + "/sub",
                  tmp).exit_code == 2);
    }
}
