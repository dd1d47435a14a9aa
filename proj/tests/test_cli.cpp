#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

using std::string;

namespace {

struct CmdResult {
    int exit_code = -1;
    string output;
};

CmdResult run(const string& args, const string& env = "") {
    const string cmd = env + " " + string(COLLAPSE_LAB_BIN) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    CmdResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
    const int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

// strips the wall-time line, the only nondeterministic part of a report
string strip_wall_time(const string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    string line;
    while (std::getline(in, line))
        if (line.find("wall_time") == string::npos) out << line << "\n";
    return out.str();
}

double value_of(const string& text, const string& key) {
    const auto pos = text.find(key + " = ");
    REQUIRE(pos != string::npos);
    return std::stod(text.substr(pos + key.size() + 3));
}

}  // namespace

TEST_CASE("analytic command reproduces closed forms") {
    const auto r = run("analytic --model c2 --p 0.4 --lambda 1 --r 1");
    CHECK(r.exit_code == 0);
    CHECK(value_of(r.output, "rho") == doctest::Approx(6.0 / 7.0).epsilon(1e-10));

    const auto c1 = run("analytic --model c1 --p 0.5 --lambda 2 --r 0.3");
    CHECK(c1.exit_code == 0);
    CHECK(value_of(c1.output, "rho") == 1.0);

    const auto c3 = run("analytic --model c3 --p 0.6667 --lambda 1 --r 0 --m 3");
    CHECK(c3.exit_code == 0);
    CHECK(value_of(c3.output, "rho") == doctest::Approx(0.7186).epsilon(2e-3));

    const auto crit = run("analytic --model c2 --p 0.5 --lambda 1 --r 1 --critical");
    CHECK(crit.output.find("critical_lambda = 0.61803398875") != string::npos);

    const auto inf = run("analytic --model c1 --p 0.5 --lambda 1 --r 0.5 --critical");
    CHECK(inf.output.find("critical_lambda = inf") != string::npos);
}

TEST_CASE("analytic command usage errors exit 1") {
    CHECK(run("analytic --model c9 --p 0.5").exit_code == 1);
    CHECK(run("analytic --model c2 --p 1.5").exit_code == 1);
    CHECK(run("analytic --model c3 --p 0.5 --lambda 1 --r 0").exit_code == 1);  // missing m
}

TEST_CASE("simulate command is reproducible and close to analytic") {
    const string cmd =
        "simulate --model c2 --p 0.4 --lambda 1 --r 1 --n 20000 --seed 42 --pop-cap 2000";
    const auto a = run(cmd);
    CHECK(a.exit_code == 0);
    CHECK(value_of(a.output, "estimate") == doctest::Approx(6.0 / 7.0).epsilon(0.015));
    CHECK(value_of(a.output, "analytic") == doctest::Approx(6.0 / 7.0).epsilon(1e-10));
    CHECK(value_of(a.output, "censored_fraction") < 0.01);

    const auto b = run(cmd);
    CHECK(strip_wall_time(a.output) == strip_wall_time(b.output));

    // thread cap must not change the numbers
    const auto one = run(cmd, "COLLAPSE_LAB_THREADS=1");
    const auto four = run(cmd, "COLLAPSE_LAB_THREADS=4");
    CHECK(strip_wall_time(one.output) == strip_wall_time(four.output));

    const auto clamped =
        run("simulate --model c1 --p 0.5 --lambda 0.5 --r 1 --n 10000 --seed 7");
    CHECK(clamped.exit_code == 0);
    CHECK(value_of(clamped.output, "estimate") == 1.0);
}

TEST_CASE("simulate flags unreliable estimates with exit 2") {
    // tiny caps censor nearly everything
    const auto r = run(
        "simulate --model c1 --p 0.9 --lambda 9 --r 1 --n 200 --seed 1 --step-cap 5 "
        "--pop-cap 1000000");
    CHECK(r.exit_code == 2);
}

TEST_CASE("sweep command writes the documented CSV") {
    const string out = "/tmp/collapse_lab_test_sweep.csv";
    const auto r = run("sweep --kind critical --model c2 --r 1 --p-axis 0.1:0.9:9 -o " + out);
    CHECK(r.exit_code == 0);
    std::ifstream in(out);
    REQUIRE(in.good());
    string header;
    std::getline(in, header);
    CHECK(header ==
          "model,p,lambda,r,m,mean_offspring,survives,extinction_prob,critical_lambda,label,"
          "status");
    string line;
    int rows = 0;
    bool saw_root = false;
    while (std::getline(in, line)) {
        ++rows;
        if (line.find("c2,0.5,") == 0) saw_root = line.find("0.618033988") != string::npos;
    }
    CHECK(rows == 9);
    CHECK(saw_root);
    std::remove(out.c_str());

    const auto bad = run("sweep --kind critical --model c2 --r 1 -o /nonexistent/dir/x.csv");
    CHECK(bad.exit_code == 2);

    const auto strat = run("sweep --kind strategy --m-axis 2:6 --p-axis 0.05:0.95:19 -o " + out);
    CHECK(strat.exit_code == 0);
    CHECK(strat.output.find("dispersion_better") != string::npos);
    std::remove(out.c_str());
}

TEST_CASE("sweep of C1 with r < 1 marks every cell extinct") {
    const string out = "/tmp/collapse_lab_test_c1.csv";
    const auto r = run(
        "sweep --kind phase --model c1 --r 0.5 --p-axis 0.2:0.8:4 --lambda-axis 0.5:4:4 -o " +
        out);
    CHECK(r.exit_code == 0);
    std::ifstream in(out);
    string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) CHECK(line.find(",false,") != string::npos);
    std::remove(out.c_str());
}

TEST_CASE("validate command passes fresh and fails when tolerances are crushed") {
    const auto ok = run("validate");
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("c2-mixture-golden") != string::npos);
    CHECK(ok.output.find("c3-three-site-golden") != string::npos);
    int named = 0;
    std::istringstream in(ok.output);
    string line;
    while (std::getline(in, line))
        if (line.rfind("PASS ", 0) == 0) ++named;
    CHECK(named >= 12);

    const auto broken = run("validate --tol-scale 1e-9");
    CHECK(broken.exit_code == 3);
    CHECK(broken.output.find("FAIL") != string::npos);
}

TEST_CASE("json report is emitted and repeatable") {
    const string cmd = "--json analytic --model c2 --p 0.4 --lambda 1 --r 1";
    const auto a = run(cmd);
    CHECK(a.exit_code == 0);
    CHECK(a.output.find("\"rho\"") != string::npos);
    CHECK(a.output.find("\"version\"") != string::npos);
    const auto b = run(cmd);
    CHECK(strip_wall_time(a.output) == strip_wall_time(b.output));
}
