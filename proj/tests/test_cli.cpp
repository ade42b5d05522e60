#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

using Json = nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run kd_run(const std::string& args) {
  const std::string cmd = std::string(KD_BINARY) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

const std::string data = KD_TEST_DATA;

}  // namespace

TEST_CASE("phi") {
  const auto r = kd_run("phi --n 2");
  CHECK(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["phi"] == "5/9");
  CHECK(j["gamma_basis"] == "2/3");
  CHECK(Json::parse(kd_run("phi --n 3").out)["phi"] == "5/8");
}

TEST_CASE("lhl") {
  const auto r = kd_run("lhl --q 2 --m 3 --k 1 --family linear --uniform");
  CHECK(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["satisfied"] == true);
  CHECK(j["distance"] == "1/16");
  for (const auto& b : j["bounds"]) {
    CHECK(b.contains("paper_anchor"));
    CHECK(b.contains("check"));
    CHECK(b.contains("value"));
    CHECK(b.contains("bound"));
  }
  const auto t = Json::parse(kd_run("lhl --m 3 --k 2 --family toeplitz --dist " + data + "/skewed.json --assert-bounds").out);
  CHECK(t["satisfied"] == true);
  const auto len = Json::parse(kd_run("lhl --m 3 --k 1 --uniform --epsilon 0.5 --mode paper-literal").out);
  CHECK(len["key_length"]["value"] == 5);
  const auto inv = Json::parse(kd_run("lhl --m 3 --k 1 --uniform --epsilon 0.5").out);
  CHECK(inv["key_length"]["value"] == 1);
}

TEST_CASE("markov") {
  const auto r = kd_run("markov --matrix " + data + "/swap.json --state 0");
  CHECK(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["Theta_gf"] == "r^2");
  CHECK(j["theta_series"][2] == "1/1");
  CHECK(j["radius"] == "inf");
}

TEST_CASE("entropy") {
  const auto j = Json::parse(kd_run("entropy --alpha inf --base 2 --dist " + data + "/half.json").out);
  CHECK(j["value"] == 1.0);
  CHECK(j["method"] == "min-entropy");
  const auto kl = Json::parse(kd_run("entropy --dist " + data + "/half.json --ref " + data + "/half.json").out);
  CHECK(kl["value"] == 0.0);
}

TEST_CASE("quantum-lhl") {
  const auto r = kd_run("quantum-lhl --ensemble " + data + "/ensemble.json --assert-bounds");
  CHECK(r.code == 0);
  CHECK(Json::parse(r.out)["satisfied"] == true);
}

TEST_CASE("semigroup") {
  const std::string csv = "kd_cli_semigroup.csv";
  const auto r = kd_run("semigroup --dim 2 --rho 0.3 --check 0.5,0.5 --grid 5 --csv " + csv);
  CHECK(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["semigroup"]["max_deviation"].get<double>() < 1e-6);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,Ptf");
  const auto s = kd_run("semigroup --sigma " + data + "/sigma.json --t 0.5");
  CHECK(s.code == 0);
}

TEST_CASE("treesim") {
  const auto r = kd_run("treesim --dim 3 --eta 8 --reps 2000 --seed 4 --assert-bounds");
  CHECK(r.code == 0);
  const auto j = Json::parse(r.out);
  CHECK(j["stats"]["terminal_variance"].size() == 3);
  const auto lit = Json::parse(kd_run("treesim --eta 4 --reps 10 --mode paper-literal").out);
  CHECK(lit["nonstandard"] == true);
}

TEST_CASE("identical arguments give identical output") {
  CHECK(kd_run("treesim --dim 2 --eta 6 --reps 1000 --seed 9").out == kd_run("treesim --dim 2 --eta 6 --reps 1000 --seed 9").out);
  const std::string mc = "semigroup --dim 3 --method mc --samples 5000 --grid 3 --seed 2";
  CHECK(kd_run(mc).out == kd_run(mc).out);
}

TEST_CASE("exit codes") {
  CHECK(kd_run("phi --bogus").code == 2);
  CHECK(kd_run("frobnicate").code == 2);
  CHECK(kd_run("lhl --q 4 --m 2 --k 1 --uniform").code == 2);
  CHECK(kd_run("markov --matrix /nonexistent.json").code == 2);
  CHECK(kd_run("lhl --m 2 --k 1 --uniform --h-plus 5 --assert-bounds").code == 0);
  const auto budget = kd_run("verify-all --budget 0.001");
  CHECK(budget.code == 4);
  CHECK(Json::parse(budget.out)["partial"] == true);
}

TEST_CASE("verify-all filter") {
  const auto r = kd_run("verify-all --filter lhl");
  CHECK(r.code == 0);
  const auto j = Json::parse(r.out);
  REQUIRE(j["checks"].size() == 2);
  for (const auto& c : j["checks"]) {
    CHECK(c["check"].get<std::string>().find("lhl") != std::string::npos);
    CHECK(c["passed"] == true);
  }
}
