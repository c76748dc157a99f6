#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "qlm_cli_tests";
    fs::create_directories(dir);
    return dir;
}

struct CliResult {
    int exit_code;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    const fs::path out = work_dir() / "cli_output.txt";
    const std::string command = std::string(QLM_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
    const int status = std::system(command.c_str());
    REQUIRE(status != -1);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;

    std::ifstream in(out);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return CliResult{code, text};
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::size_t count_lines(const std::string& text, const std::string& prefix) {
    std::size_t count = 0, pos = 0;
    while ((pos = text.find(prefix, pos)) != std::string::npos) {
        ++count;
        pos += prefix.size();
    }
    return count;
}

} // namespace

TEST_CASE("deutsch-check passes deterministically") {
    const CliResult res = run_cli("deutsch-check");
    CHECK(res.exit_code == 0);
    CHECK(count_lines(res.output, "PASS") == 4);
    CHECK(res.output.find("FAIL") == std::string::npos);
}

TEST_CASE("mc writes identical files across reruns and thread counts") {
    const fs::path out1 = work_dir() / "mc1.csv";
    const fs::path out2 = work_dir() / "mc2.csv";
    const fs::path out3 = work_dir() / "mc3.csv";
    const std::string base = "mc --trials 10 --memory 5 --seed 7 --max-iter 20000 ";

    CHECK(run_cli(base + "--threads 1 --out " + out1.string()).exit_code == 0);
    CHECK(run_cli(base + "--threads 1 --out " + out2.string()).exit_code == 0);
    CHECK(run_cli(base + "--threads 4 --out " + out3.string()).exit_code == 0);

    const std::string bytes = slurp(out1);
    CHECK(bytes == slurp(out2));
    CHECK(bytes == slurp(out3));
    CHECK(bytes.rfind("n,P,Q\n", 0) == 0);
}

TEST_CASE("validation failures exit with code 1") {
    CHECK(run_cli("mc --trials 0").exit_code == 1);
    CHECK(run_cli("mc --no-such-flag").exit_code == 1);
    CHECK(run_cli("frobnicate").exit_code == 1);
    CHECK(run_cli("").exit_code == 1);
    CHECK(run_cli("analyze " + (work_dir() / "missing.csv").string()).exit_code == 2);
}

TEST_CASE("help exits cleanly") {
    const CliResult res = run_cli("--help");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("deutsch-check") != std::string::npos);
}

TEST_CASE("run emits a trace CSV") {
    const fs::path trace = work_dir() / "trace.csv";
    const CliResult res =
        run_cli("run --memory 4 --seed 11 --max-iter 5000 --trace " + trace.string());
    CHECK(res.exit_code == 0);
    const std::string bytes = slurp(trace);
    CHECK(bytes.rfind("iter,input,outcome,success,N0,N1,NT,halted\n", 0) == 0);
    CHECK(bytes.find('\n') != std::string::npos);
}

TEST_CASE("analyze fits an mc curve") {
    const fs::path curve = work_dir() / "for_fit.csv";
    const fs::path fit = work_dir() / "fit_out.csv";
    REQUIRE(run_cli("mc --trials 60 --memory 6 --seed 3 --max-iter 100000 --out " + curve.string())
                .exit_code == 0);
    const CliResult res = run_cli("analyze " + curve.string() + " --out " + fit.string());
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("exponential fit") != std::string::npos);
    CHECK(slurp(fit).rfind("kind,param1,param2,r_squared,points_used\nexponential,", 0) == 0);
}

TEST_CASE("config file values are overridden by flags") {
    const fs::path conf = work_dir() / "override.conf";
    {
        std::ofstream out(conf);
        out << "memory_size = 7\nmax_iterations = 4000\n";
    }
    const CliResult from_file = run_cli("run --seed 5 --config " + conf.string());
    CHECK(from_file.exit_code == 0);
    CHECK(from_file.output.find("(memory 7)") != std::string::npos);

    const CliResult overridden = run_cli("run --seed 5 --memory 9 --config " + conf.string());
    CHECK(overridden.exit_code == 0);
    CHECK(overridden.output.find("(memory 9)") != std::string::npos);
}

TEST_CASE("sweep writes the per-N table") {
    const fs::path out = work_dir() / "sweep_out.csv";
    const CliResult res =
        run_cli("sweep --nlist 5,6 --trials 8 --seed 19 --max-iter 50000 --out " + out.string());
    CHECK(res.exit_code == 0);
    const std::string bytes = slurp(out);
    CHECK(bytes.rfind("N,trials,halt_fraction,", 0) == 0);
    CHECK(count_lines(bytes, "\n") == 3);  // header + two rows
}
