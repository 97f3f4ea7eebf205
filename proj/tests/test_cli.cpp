// end-to-end checks of the installed command line, including a
// three-process tcp session on loopback
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct CmdResult {
    int exit_code;
    std::string out;
};

CmdResult run_cmd(const std::string& cmd) {
    std::string full = cmd + " 2>&1";
    FILE* p = popen(full.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof(buf), p)) > 0) out.append(buf, got);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string cli() { return TREFOIL_CLI_PATH; }

std::string write_temp(const std::string& contents) {
    static int counter = 0;
    std::string path = "/tmp/trefoil_cli_test_" + std::to_string(counter++) + ".csv";
    std::ofstream out(path);
    out << contents;
    return path;
}

std::string grab(const std::string& text, const std::string& key) {
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (line.rfind(key + ":", 0) == 0) return line.substr(key.size() + 2);
    return "";
}

}  // namespace

TEST_CASE("train subcommand produces a report and a model file") {
    auto path = write_temp("a,b,label\n1,8,0\n2,7,0\n3,6,1\n4,5,1\n5,4,0\n6,3,1\n7,2,1\n8,1,0\n");
    std::string report_path = "/tmp/trefoil_cli_report.txt";
    std::string model_path = "/tmp/trefoil_cli_model.txt";
    auto res = run_cmd(cli() + " train --dataset " + path +
                       " --height 2 --scale-digits 0 --seed 4 --report-path " + report_path +
                       " --model-path " + model_path);
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("trefoil-report v1") != std::string::npos);
    CHECK(res.out.find("train_accuracy:") != std::string::npos);

    std::ifstream rep(report_path);
    CHECK(rep.good());
    std::ifstream mdl(model_path);
    std::string first;
    std::getline(mdl, first);
    CHECK(first == "trefoil-model v1");

    // prediction on the written model
    auto pred = run_cmd(cli() + " predict --model " + model_path + " --sample 1,8");
    CHECK(pred.exit_code == 0);
    CHECK(pred.out.find("label:") != std::string::npos);

    std::remove(path.c_str());
    std::remove(report_path.c_str());
    std::remove(model_path.c_str());
}

TEST_CASE("missing datasets and bad files exit nonzero with categories") {
    auto res = run_cmd(cli() + " train --dataset /no/such/file.csv");
    CHECK(res.exit_code == 3);  // load error
    CHECK(res.out.find("error") != std::string::npos);

    auto header_only = write_temp("a,b,label\n");
    auto res2 = run_cmd(cli() + " train --dataset " + header_only);
    CHECK(res2.exit_code == 3);
    CHECK(res2.out.find("no data rows") != std::string::npos);
    std::remove(header_only.c_str());

    auto res3 = run_cmd(cli() + " train --dataset synth:16,2,2 --mode carrier-pigeon");
    CHECK(res3.exit_code == 1);  // config error
}

TEST_CASE("benchmark subcommand emits the sweep table") {
    auto res = run_cmd(cli() +
                       " benchmark --sizes 32 --heights 1 2 --synth-m 2 --synth-v 2 --seed 3");
    CHECK(res.exit_code == 0);
    CHECK(res.out.find("trefoil-benchmark v1") != std::string::npos);
    // one row per height with positive rounds
    std::istringstream is(res.out);
    std::string line;
    int rows = 0;
    while (std::getline(is, line))
        if (line.rfind("32 ", 0) == 0) ++rows;
    CHECK(rows == 2);
}

TEST_CASE("seed-fixed reruns reproduce the model and the meters") {
    auto path = write_temp("a,label\n1,0\n2,0\n3,1\n4,1\n5,1\n6,0\n");
    auto r1 = run_cmd(cli() + " train --dataset " + path + " --height 1 --scale-digits 0 --seed 9");
    auto r2 = run_cmd(cli() + " train --dataset " + path + " --height 1 --scale-digits 0 --seed 9");
    CHECK(r1.exit_code == 0);
    CHECK(grab(r1.out, "total_online_bits") == grab(r2.out, "total_online_bits"));
    CHECK(grab(r1.out, "max_online_rounds") == grab(r2.out, "max_online_rounds"));
    CHECK(r1.out.substr(r1.out.find("model:")) == r2.out.substr(r2.out.find("model:")));
    std::remove(path.c_str());
}

TEST_CASE("three tcp processes agree with the inproc run") {
    auto path = write_temp("a,b,label\n1,9,0\n2,8,0\n3,7,1\n4,6,1\n5,5,1\n6,4,0\n7,3,1\n8,2,0\n");
    auto inproc = run_cmd(cli() + " train --dataset " + path +
                          " --height 2 --scale-digits 0 --seed 31 --mode inproc");
    REQUIRE(inproc.exit_code == 0);

    // pick three loopback ports
    std::array<int, 3> ports{};
    for (int i = 0; i < 3; ++i) ports[(size_t)i] = 29000 + (getpid() * 7 + i * 13) % 20000;
    std::string addrs = "127.0.0.1:" + std::to_string(ports[0]) + ",127.0.0.1:" +
                        std::to_string(ports[1]) + ",127.0.0.1:" + std::to_string(ports[2]);

    std::array<std::string, 3> outs;
    std::array<pid_t, 3> pids{};
    std::array<std::string, 3> files;
    for (int p = 0; p < 3; ++p)
        files[(size_t)p] = "/tmp/trefoil_cli_tcp_" + std::to_string(getpid()) + "_" +
                           std::to_string(p) + ".out";
    for (int p = 0; p < 3; ++p) {
        pid_t pid = fork();
        REQUIRE(pid >= 0);
        if (pid == 0) {
            std::string cmd = cli() + " train --dataset " + path +
                              " --height 2 --scale-digits 0 --seed 31 --mode tcp --party-id " +
                              std::to_string(p) + " --addresses " + addrs + " > " +
                              files[(size_t)p] + " 2>&1";
            execl("/bin/sh", "sh", "-c", cmd.c_str(), (char*)nullptr);
            _exit(127);
        }
        pids[(size_t)p] = pid;
    }
    for (int p = 0; p < 3; ++p) {
        int status = 0;
        waitpid(pids[(size_t)p], &status, 0);
        CHECK(WIFEXITED(status));
        CHECK(WEXITSTATUS(status) == 0);
        std::ifstream in(files[(size_t)p]);
        std::stringstream ss;
        ss << in.rdbuf();
        outs[(size_t)p] = ss.str();
        std::remove(files[(size_t)p].c_str());
    }

    // party 0 opened the model: identical to the inproc model and meters
    CHECK(outs[0].find("model:\ntrefoil-model v1") != std::string::npos);
    CHECK(outs[0].substr(outs[0].find("model:")) ==
          inproc.out.substr(inproc.out.find("model:")));
    // each tcp party's online meter equals its inproc counterpart
    for (int p = 0; p < 3; ++p) {
        std::string tag = "party " + std::to_string(p) + " online_bytes_to:";
        auto pos_t = outs[(size_t)p].find(tag);
        auto pos_i = inproc.out.find(tag);
        REQUIRE(pos_t != std::string::npos);
        REQUIRE(pos_i != std::string::npos);
        auto line_t = outs[(size_t)p].substr(pos_t, outs[(size_t)p].find('\n', pos_t) - pos_t);
        auto line_i = inproc.out.substr(pos_i, inproc.out.find('\n', pos_i) - pos_i);
        CHECK(line_t == line_i);
    }
    std::remove(path.c_str());
}
