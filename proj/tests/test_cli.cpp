// End-to-end checks of the command-line surface: subcommands, exit codes,
// run-directory layout, and the one-line error contract on stderr.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void expect(bool ok, const std::string& what) {
    if (ok) {
        std::printf("ok      %s\n", what.c_str());
    } else {
        std::printf("FAILED  %s\n", what.c_str());
        ++g_failures;
    }
}

int run(const std::string& args, const fs::path& stderr_to = {}) {
    std::string cmd = std::string(SPIRALBRICK_CLI_PATH) + " " + args;
    if (!stderr_to.empty()) {
        cmd += " 2>" + stderr_to.string();
    } else {
        cmd += " 2>/dev/null";
    }
    cmd += " >/dev/null";
    const int status = std::system(cmd.c_str());
    return status == -1 ? -1 : WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

}  // namespace

int main() {
    const fs::path work = fs::temp_directory_path() / "spiralbrick_cli_smoke";
    fs::remove_all(work);
    fs::create_directories(work);

    expect(run("presets") == 0, "presets lists without error");

    const fs::path gen = work / "gen";
    expect(run("generate --preset paper_defaults --out " + gen.string() +
               " --obj --svg") == 0,
           "generate exits 0");
    expect(fs::exists(gen / "model.json"), "generate writes model.json");
    expect(fs::exists(gen / "model.obj"), "generate writes model.obj");
    expect(fs::exists(gen / "topview.svg"), "generate writes topview.svg");

    const fs::path est = work / "est";
    expect(run("estimate --synthetic --pose 0.75,0.05,0.6 --noise 0 --out " +
               est.string() + " --save-depth") == 0,
           "estimate --synthetic exits 0");
    expect(fs::exists(est / "estimate.json"), "estimate writes estimate.json");
    expect(fs::exists(est / "depth.pgm"), "estimate writes depth.pgm");

    // a small config keeps the smoke run quick
    const fs::path cfg_path = work / "small.json";
    {
        std::ofstream cfg(cfg_path);
        cfg << "{\"schema\": \"spiralbrick/config/1\", \"seed\": 5,\n"
               "\"column\": {\"layers\": 1, \"polygon\": {\"edges\": 4, "
               "\"blocks_per_edge\": 1}}}\n";
    }
    const fs::path sim = work / "sim";
    expect(run("simulate --config " + cfg_path.string() + " --out " + sim.string() +
               " --save-clouds") == 0,
           "simulate exits 0");
    expect(fs::exists(sim / "config.json"), "simulate writes config.json");
    expect(fs::exists(sim / "model.json"), "simulate writes model.json");
    expect(fs::exists(sim / "log.json"), "simulate writes log.json");
    expect(fs::exists(sim / "clouds/brick_0000.ply"), "simulate saves clouds");

    expect(run("report " + sim.string()) == 0, "report exits 0");
    expect(fs::exists(sim / "report/metrics.csv"), "report writes metrics.csv");
    expect(fs::exists(sim / "report/aggregates.csv"), "report writes aggregates.csv");
    expect(fs::exists(sim / "report/position_error.svg") &&
               fs::exists(sim / "report/orientation_diff.svg") &&
               fs::exists(sim / "report/pose_time.svg") &&
               fs::exists(sim / "report/trajectory_time.svg"),
           "report writes the four plots");

    // estimate from the saved cloud file exercises the reader path
    expect(run("estimate --cloud " + (sim / "clouds/brick_0000.ply").string() +
               " --out " + (work / "est2").string()) == 0,
           "estimate --cloud exits 0");

    const fs::path errfile = work / "stderr.txt";
    expect(run("generate --config " + (work / "missing.json").string(), errfile) != 0,
           "missing config exits nonzero");
    const std::string err = slurp(errfile);
    expect(err.rfind("error: ", 0) == 0 && err.find('\n') == err.size() - 1,
           "stderr carries a one-line machine-parsable error");

    {
        std::ofstream bad(work / "bad.json");
        bad << "{\"schema\": \"spiralbrick/config/1\", \"column\": {\"layers\": 0,"
               "\"polygon\": {\"edges\": 4, \"blocks_per_edge\": 2},"
               "\"polynomial\": {\"coefficients\": [0,1,-1], \"domain\": [0,1]}}}";
    }
    expect(run("generate --config " + (work / "bad.json").string(), errfile) != 0,
           "invalid config exits nonzero");
    expect(slurp(errfile).find("ValidationError") != std::string::npos,
           "validation failures are labelled");

    expect(run("report " + (work / "empty").string(), errfile) != 0,
           "report on a missing run directory exits nonzero");
    expect(slurp(errfile).find("error: ") == 0, "missing log reports cleanly");

    {
        const std::string cmd = std::string("SPIRALBRICK_LOG=debug ") +
                                SPIRALBRICK_CLI_PATH + " generate --preset "
                                "paper_parallel --out " + (work / "logged").string() +
                                " >/dev/null 2>" + errfile.string();
        expect(std::system(cmd.c_str()) == 0, "run with SPIRALBRICK_LOG=debug");
        const std::string cmd2 = std::string("SPIRALBRICK_LOG=off ") +
                                 SPIRALBRICK_CLI_PATH + " generate --preset "
                                 "paper_parallel --out " + (work / "logged2").string() +
                                 " >/dev/null 2>" + (work / "stderr2.txt").string();
        expect(std::system(cmd2.c_str()) == 0 && slurp(work / "stderr2.txt").empty(),
               "SPIRALBRICK_LOG=off silences stderr");
    }

    std::printf("%s\n", g_failures == 0 ? "cli smoke: all checks passed"
                                        : "cli smoke: FAILURES");
    return g_failures == 0 ? 0 : 1;
}
