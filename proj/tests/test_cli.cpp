#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "mcg/distribution.hpp"
#include "mcg/io.hpp"
#include "mcg/selection.hpp"

using namespace mcg;
namespace fs = std::filesystem;

namespace {

const std::string kCli = MCG_CLI_PATH;
const std::string kData = MCG_DATA_DIR;

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "mcg_cli_test";
  fs::create_directories(d);
  return d;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path f = scratch_dir() / name;
  std::ofstream(f, std::ios::binary) << text;
  return f;
}

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header = nullptr) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("input errors exit 2") {
  const auto empty = write_file("empty.csv", "");
  CHECK(run("fit --data " + empty.string()).code == 2);
  CHECK(run("fit --data " + (scratch_dir() / "missing.csv").string()).code == 2);
  CHECK(run("fit --model nope --data " + kData + "/glass_fibers.csv").code == 2);
  CHECK(run("eval --model g --theta -1 --gamma 1").code == 2);
  CHECK(run("eval --model g --theta 1").code == 2);
  CHECK(run("sample --model mcg --a 1 --b 1 --c 1 --theta 1 --gamma 1 --n 0").code == 2);
  CHECK(run("bogus").code == 2);
  CHECK(run("").code == 2);
}

TEST_CASE("eval of the Gompertz point: hazard column is theta e^(gamma y)") {
  const double theta = 0.3, gamma = 0.7;
  const auto r = run("eval --model mcg --a 1 --b 1 --c 1 --theta 0.3 --gamma 0.7 --grid-min 0 --grid-max 6 --grid-points 61");
  REQUIRE(r.code == 0);
  std::string header;
  const auto rows = parse_csv(r.out, &header);
  CHECK(header == "y,pdf,cdf,hazard");
  REQUIRE(rows.size() == 61);
  for (const auto& row : rows) {
    const double want = theta * std::exp(gamma * row[0]);
    CHECK(std::abs(row[3] - want) <= 1e-10 * want);
    CHECK(std::abs(row[2] + std::expm1(-theta / gamma * std::expm1(gamma * row[0]))) <= 1e-14);
  }
}

TEST_CASE("outputs are byte-identical across runs") {
  const std::string s = "sample --model mcg --a 1.5 --b 0.7 --c 2 --theta 0.2 --gamma 0.4 --n 200 --seed 7";
  CHECK(run(s).out == run(s).out);
  CHECK(run(s).out != run(s + "1").out);
  const std::string f = "fit --model gg --data " + kData + "/glass_fibers.csv";
  const auto f1 = run(f);
  CHECK(f1.out == run(f).out);
  CHECK(run("errata").out == run("errata").out);
  const std::string c = "curves --model mcg --a 2 --b 0.5 --theta 0.1 --gamma 1 --grid-min 0.5 --grid-max 5 --grid-points 10";
  CHECK(run(c).out == run(c).out);
}

TEST_CASE("seeded sample of size 100 is consistent with the exact cdf") {
  const McGParams<double> p{2.0, 0.5, 1.5, 0.1, 1.0};
  const auto r = run("sample --model mcg --a 2 --b 0.5 --c 1.5 --theta 0.1 --gamma 1 --n 100 --seed 3");
  REQUIRE(r.code == 0);
  std::string header;
  const auto rows = parse_csv(r.out, &header);
  CHECK(header == "value");
  REQUIRE(rows.size() == 100);
  Dataset d{{}, "sample"};
  for (const auto& row : rows) d.values.push_back(row[0]);
  const auto ks = ks_test(d, [&](double y) { return cdf(p, y); });
  CHECK(ks.p_value > 0.01);
}

TEST_CASE("sample then fit recovers the generating Gompertz parameters") {
  const auto s = run("sample --model g --theta 0.05 --gamma 0.8 --n 5000 --seed 11");
  REQUIRE(s.code == 0);
  const auto file = write_file("gompertz.csv", s.out);
  const auto f = run("fit --model g --data " + file.string());
  REQUIRE(f.code == 0);
  const auto j = nlohmann::json::parse(f.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["command"] == "fit");
  CHECK(j["data"]["n_obs"] == 5000);
  const auto& fit = j["fit"];
  CHECK(fit["converged"] == true);
  for (auto [name, truth] : {std::pair{"theta", 0.05}, std::pair{"gamma", 0.8}}) {
    const double est = fit["estimates"][name];
    const double se = fit["std_errors"][name];
    CAPTURE(name);
    CHECK(std::abs(est - truth) <= 3 * se);
  }
}

TEST_CASE("header and CRLF input are accepted") {
  const auto file = write_file("crlf.csv", "\xEF\xBB\xBFlife\r\n0.5\r\n1.25\r\n2\r\n0.75\r\n3.5\r\n1\r\n");
  const auto r = run("fit --model g --data " + file.string());
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["data"]["n_obs"] == 6);
}

TEST_CASE("compare with a model that nests nothing gives an empty ladder") {
  const auto r = run("compare --model g --data " + kData + "/glass_fibers.csv");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["ladder"].is_array());
  CHECK(j["ladder"].empty());
  CHECK(j["full_model"] == "g");
}

TEST_CASE("compare csv has one row per model") {
  const auto r = run("compare --model mcg --format csv --data " + kData + "/glass_fibers.csv");
  std::string header;
  const auto rows = parse_csv(r.out, &header);
  CHECK(header.rfind("model,neg_loglik,k_params,n_obs,aic,aicc,bic", 0) == 0);
  CHECK(rows.size() == 4);  // mcg, bg, kumg, mce
}

TEST_CASE("curves at b = 0.5, gamma = 1, theta = 0.1 give finite Bowley values over c in [0.5, 5]") {
  const auto r = run("curves --model mcg --a 2 --b 0.5 --theta 0.1 --gamma 1 --grid-min 0.5 --grid-max 5 --grid-points 46");
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "c,measure,value,a,b,theta,gamma");
  int bowley = 0, moors = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string c, m, v;
    std::getline(ls, c, ',');
    std::getline(ls, m, ',');
    std::getline(ls, v, ',');
    const double val = std::strtod(v.c_str(), nullptr);
    CHECK(std::isfinite(val));
    if (m == "bowley") {
      ++bowley;
      CHECK(std::abs(val) < 1);
    } else if (m == "moors") {
      ++moors;
    }
  }
  CHECK(bowley == 46);
  CHECK(moors == 46);
  CHECK(run("curves --model bg --a 2 --b 0.5 --theta 0.1 --gamma 1").code == 2);
}

TEST_CASE("errata command emits versioned JSON") {
  const auto r = run("errata");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK_FALSE(j["errata"].empty());
  const auto out = scratch_dir() / "errata.json";
  CHECK(run("errata --out " + out.string()).out.empty());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == r.out);
}

TEST_CASE("published comparisons through the command line") {
  // Aarset: fitted McG -log L and LRT p-values for BG, KumG, McE.
  const auto a = run("compare --model mcg --data " + kData + "/aarset_devices.csv");
  const auto ja = nlohmann::json::parse(a.out);
  const auto fa = nlohmann::json::parse(run("fit --model mcg --data " + kData + "/aarset_devices.csv").out);
  CHECK(std::abs(fa["fit"]["neg_loglik"].get<double>() - 219.0041) <= 0.05);
  REQUIRE(ja["ladder"].size() == 3);
  CHECK(std::abs(ja["ladder"][0]["lrt_pvalue"].get<double>() - 0.06779) <= 0.005);
  CHECK(std::abs(ja["ladder"][1]["lrt_pvalue"].get<double>() - 0.0149) <= 0.003);
  CHECK(ja["ladder"][2]["lrt_pvalue"].get<double>() < 1e-6);

  // Glass fibres: LRT statistics.
  const auto g = nlohmann::json::parse(run("compare --model mcg --data " + kData + "/glass_fibers.csv").out);
  REQUIRE(g["ladder"].size() == 3);
  const double want[] = {5.5900, 5.2193, 8.3572};
  for (int i = 0; i < 3; ++i) {
    CAPTURE(i);
    CHECK(std::abs(g["ladder"][i]["lrt_stat"].get<double>() - want[i]) <= 0.05);
  }
}
