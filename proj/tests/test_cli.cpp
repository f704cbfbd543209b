// Runs the infogeo executable and checks exit codes and outputs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "infogeo/io.hpp"

#ifndef INFOGEO_CLI
#error "INFOGEO_CLI must name the CLI executable"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / ("infogeo_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome run(const std::string &args) {
  static int counter = 0;
  const fs::path d = scratch();
  const fs::path out = d / ("out" + std::to_string(counter) + ".txt");
  const fs::path err = d / ("err" + std::to_string(counter++) + ".txt");
  const std::string cmd = std::string("\"") + INFOGEO_CLI + "\" " + args + " > \"" + out.string() + "\" 2> \"" +
                          err.string() + "\"";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

fs::path write_file(const std::string &name, const std::string &content) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << content;
  return p;
}

std::vector<double> last_row_weights(const std::string &csv, std::size_t n) {
  std::istringstream in(csv);
  std::string line, last;
  while (std::getline(in, line))
    if (!line.empty())
      last = line;
  std::vector<double> w;
  std::istringstream row(last);
  std::string cell;
  std::getline(row, cell, ','); // t
  for (std::size_t i = 0; i < n && std::getline(row, cell, ','); ++i)
    w.push_back(std::stod(cell));
  return w;
}

} // namespace

TEST(Cli, EntropyFlowConvergesToUniform) {
  const fs::path cfg = write_file("entropy.json", R"({"flow": "entropy", "p0": [0.25, 0.75], "t_end": 20})");
  const Outcome r = run("flow --config \"" + cfg.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "t,p_0,p_1,s_0,s_1");
  const auto w = last_row_weights(r.out, 2);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_NEAR(w[0], 0.5, 1e-6);
  EXPECT_NEAR(w[1], 0.5, 1e-6);
  EXPECT_NE(r.err.find("terminal gradient norm"), std::string::npos);
  EXPECT_NE(r.err.find("monotone: yes"), std::string::npos);
  EXPECT_NE(r.err.find("seed: 42"), std::string::npos);
}

TEST(Cli, ExpectedValueDescentReachesTheBestVertex) {
  const fs::path cfg = write_file("expected.json", R"({"flow": "expected", "p0": [0.25, 0.25, 0.25, 0.25], "f": [0, 1, 2, 3], "t_end": 20})");
  const fs::path csv = scratch() / "expected.csv";
  const Outcome r = run("flow --config \"" + cfg.string() + "\" --out \"" + csv.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto w = last_row_weights(slurp(csv), 4);
  ASSERT_EQ(w.size(), 4u);
  EXPECT_GT(w[3], 1.0 - 1e-3);
  EXPECT_NE(r.out.find("monotone: yes"), std::string::npos);
}

TEST(Cli, FlowOutputIsByteIdentical) {
  const fs::path cfg = write_file("kl.json", R"({"flow": "kl_m", "p0": [0.2, 0.3, 0.5], "target": [0.5, 0.25, 0.25], "t_end": 2, "dt": 0.01})");
  const Outcome a = run("flow --config \"" + cfg.string() + "\" --seed 42");
  const Outcome b = run("flow --config \"" + cfg.string() + "\" --seed 42");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, CommandLineOverridesTheConfig) {
  const fs::path cfg = write_file("short.json", R"({"flow": "entropy", "p0": [0.25, 0.75], "t_end": 5, "dt": 0.1})");
  const Outcome r = run("flow --config \"" + cfg.string() + "\" --t-end 1 --dt 0.5");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4); // header + t = 0, 0.5, 1
}

TEST(Cli, CustomTransportFlow) {
  const fs::path cfg = write_file("custom.json", R"({"flow": "custom", "p0": [0.5, 0.5], "transport": "m", "u": [1, -1], "t_end": 0.5, "dt": 0.001})");
  const Outcome r = run("flow --config \"" + cfg.string() + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto w = last_row_weights(r.out, 2);
  EXPECT_NEAR(w[0], 0.75, 1e-6); // (1 + t U) p at t = 1/2
  EXPECT_NE(r.err.find("monotone: n/a"), std::string::npos);
}

TEST(Cli, BadConfigsExitTwo) {
  EXPECT_EQ(run("flow --config \"" + write_file("bad.json", "{not json").string() + "\"").code, 2);
  EXPECT_EQ(run("flow --config \"" + write_file("bad2.json", R"({"flow": "warp", "p0": [0.5, 0.5]})").string() + "\"").code, 2);
  EXPECT_EQ(run("flow --config \"" + write_file("bad3.json", R"({"flow": "entropy", "p0": [0.5, 0.6]})").string() + "\"").code, 2);
  EXPECT_EQ(run("flow --config /nonexistent/config.json").code, 2);
  EXPECT_EQ(run("flow").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST(Cli, NumericalFailureExitsThree) {
  const fs::path cfg = write_file("steep.json", R"({"flow": "expected", "p0": [0.5, 0.5], "f": [0, 1000000], "t_end": 10, "dt": 1})");
  EXPECT_EQ(run("flow --config \"" + cfg.string() + "\"").code, 3);
}

TEST(Cli, CheckSuites) {
  const Outcome r = run("check transports");
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j.at("passed").get<bool>());
  EXPECT_EQ(j.at("seed"), 42);
  EXPECT_EQ(run("check nope").code, 2);
  EXPECT_NE(run("check transports --inject-fault").code, 0);
}

TEST(Cli, CheckAllIsDeterministic) {
  const Outcome a = run("check all --seed 42");
  const Outcome b = run("check all --seed 42");
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out).at("suites").size(), 5u);
}

TEST(Cli, Fisher) {
  const Outcome r = run("fisher 0.2,0.3,0.4");
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j.at("det_fisher_inverse").get<double>(), 0.0024, 1e-15);
  EXPECT_NEAR(j.at("fisher_inverse")[0][0].get<double>(), 0.16, 1e-15);
  EXPECT_NEAR(j.at("fisher")[0][0].get<double>(), 1 / 0.2 + 1 / 0.1, 1e-12);
  EXPECT_EQ(run("fisher 0.5,0.6").code, 2);
  EXPECT_EQ(run("fisher 0.5,abc").code, 2);
}

TEST(Cli, Zoo) {
  const std::string prefix = (scratch() / "zoo").string();
  const Outcome r = run("zoo ex4 --t 0.5 --out \"" + prefix + "\"");
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = slurp(prefix + "_ex4.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,w_0,w_1,s_0,s_1");
  const std::string verdict = slurp(prefix + "_ex4_verdict.txt");
  EXPECT_NE(verdict.find("membership: PASS"), std::string::npos);
  EXPECT_NE(verdict.find("printed score residual"), std::string::npos);
  ASSERT_EQ(run("zoo ex1 --t 0.5 --out \"" + prefix + "\"").code, 0);
  EXPECT_NE(slurp(prefix + "_ex1_verdict.txt").find("membership: FAIL"), std::string::npos);
  EXPECT_EQ(run("zoo ex9").code, 2);
  EXPECT_EQ(run("zoo ex4 --u 2,-2").code, 2);
}

TEST(Cli, Deformed) {
  const Outcome r = run("deformed --q 0.5,2 --x-min 0.5 --x-max 2 --steps 3");
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "x,log[q=0.5],exp[q=0.5],log[q=2],exp[q=2]");
  EXPECT_EQ(first.substr(0, first.find(',')), "0.5");
  EXPECT_EQ(first.substr(first.rfind(',')), ",2"); // exp_2(1/2) = 1 / (1 - 1/2)
  std::string second;
  std::getline(in, second);
  EXPECT_EQ(second.back(), ','); // exp_2 is undefined at 1
  const Outcome e = run("deformed --table entropy --q 2 --x-min 0.5 --x-max 0.5 --steps 1");
  EXPECT_EQ(e.code, 2); // empty grid
  const Outcome e2 = run("deformed --table entropy --q 2 --x-min 0.25 --x-max 0.75 --steps 2");
  ASSERT_EQ(e2.code, 0);
  EXPECT_NE(e2.out.find("0.5,0.5"), std::string::npos); // H_2 of (1/2, 1/2)
  EXPECT_EQ(run("deformed --kind warp").code, 2);
}
