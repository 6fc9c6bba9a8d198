#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "wavebasis");
  std::ostringstream out, err;
  const int code = wavebasis::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("wavebasis_test_" + name);
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("basis listing for n = 2") {
    const Result r = run({"basis", "--n", "2", "--pmax", "7"});
    CHECK(r.code == 0);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() > 1);
    CHECK(rows[0] == std::vector<std::string>{"p", "l", "j", "d", "norm_constant"});
    std::set<int> ps;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const int p = std::stoi(rows[i][0]), l = std::stoi(rows[i][1]), d = std::stoi(rows[i][3]);
      ps.insert(p);
      CHECK(2 * l <= p - 1);
      CHECK(2 * d == p - 2 * l - 1);
    }
    CHECK(ps == std::set<int>{1, 3, 5, 7});
  }

  TEST_CASE("verify passes") {
    const Result r = run({"verify", "--n", "3", "--pmax", "12"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["pass"].get<bool>());
    for (const auto& c : j["checks"]) CHECK(c["residual"].get<double>() <= c["tolerance"].get<double>());
    CHECK(j["seed"].get<unsigned>() == 1u);
  }

  TEST_CASE("gram rejects the zero sector") {
    const Result r = run({"gram", "--n", "3", "--m", "0"});
    CHECK(r.code == 2);
    CHECK(r.err.find("ZERO") != std::string::npos);
  }

  TEST_CASE("gram of the minus sector") {
    const Result r = run({"gram", "--n", "2", "--m", "1", "--pmax", "7", "--picture", "noncompact"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["sector"] == "MINUS");
    CHECK(j["max_offdiagonal"].get<double>() < 1e-10);
  }

  TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"basis", "--n", "1"}).code == 2);
    CHECK(run({"nonsense"}).code == 2);
    CHECK(run({"expand", "--data", "mode:3,0,0"}).code == 2);  // invalid index for n = 3
    CHECK(run({"expand", "--data", "bogus"}).code == 2);
    CHECK(run({"evolve-compare", "--n", "3", "--cfl", "0.9"}).code == 2);
    CHECK(run({"basis", "--config", "/nonexistent/config.json"}).code == 2);
    CHECK(run({"basis", "--help"}).code == 0);
  }

  TEST_CASE("determinism") {
    const Result a = run({"verify", "--n", "2", "--pmax", "7", "--seed", "42"});
    const Result b = run({"verify", "--n", "2", "--pmax", "7", "--seed", "42"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const Result c = run({"expand", "--n", "3", "--pmax", "10"});
    const Result d = run({"expand", "--n", "3", "--pmax", "10"});
    CHECK(c.out == d.out);
  }

  TEST_CASE("config file and flag precedence") {
    const auto path = temp_path("config.json");
    {
      std::ofstream f(path);
      f << R"({"n": 2, "pmax": 5})";
    }
    const Result a = run({"basis", "--config", path.string()});
    CHECK(a.code == 0);
    const auto rows = csv_rows(a.out);
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stoi(rows[i][0]) <= 5);
    CHECK(rows.size() == 1 + 1 + 3 + 5);
    const Result b = run({"basis", "--config", path.string(), "--pmax", "3"});
    CHECK(csv_rows(b.out).size() == 1 + 1 + 3);
    const Result c = run({"basis", "--pmax", "3", "--config", path.string()});
    CHECK(csv_rows(c.out).size() == 1 + 1 + 3);
    std::filesystem::remove(path);
  }

  TEST_CASE("expand of a mode") {
    const Result r = run({"expand", "--n", "3", "--pmax", "8", "--data", "mode:4,1,2"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    for (const auto& m : j["modes"]) {
      const bool hit = m["p"] == 4 && m["l"] == 1 && m["j"] == 2;
      CHECK(std::abs(m["re"].get<double>() - (hit ? 1.0 : 0.0)) < 1e-8);
      CHECK(std::abs(m["im"].get<double>()) < 1e-8);
    }
  }

  TEST_CASE("sample files through emitted nodes") {
    const auto nodes = temp_path("nodes.csv"), data = temp_path("data.csv");
    CHECK(run({"expand", "--n", "2", "--pmax", "7", "--emit-nodes", nodes.string()}).code == 0);
    std::ifstream in(nodes);
    std::ofstream outf(data);
    outf.precision(17);
    std::string line;
    std::getline(in, line);
    outf << "x1,x2,phi,psi\n";
    while (std::getline(in, line)) {
      const auto cells = csv_rows(line)[0];
      const double x = std::stod(cells[0]), y = std::stod(cells[1]);
      outf << cells[0] << "," << cells[1] << "," << std::exp(-(x * x + y * y)) << ",0\n";
    }
    outf.close();
    const Result a = run({"expand", "--n", "2", "--pmax", "7", "--data", "file:" + data.string()});
    const Result b = run({"expand", "--n", "2", "--pmax", "7", "--data", "gaussian"});
    CHECK(a.code == 0);
    const auto ja = nlohmann::json::parse(a.out), jb = nlohmann::json::parse(b.out);
    REQUIRE(ja["modes"].size() == jb["modes"].size());
    for (std::size_t k = 0; k < ja["modes"].size(); ++k) {
      CHECK(std::abs(ja["modes"][k]["re"].get<double>() - jb["modes"][k]["re"].get<double>()) < 1e-6);
    }
    std::filesystem::remove(nodes);
    std::filesystem::remove(data);
  }

  TEST_CASE("solve writes expansion and reconstruction") {
    const auto prefix = temp_path("solve");
    const Result r = run({"solve", "--n", "2", "--pmax", "5", "--data", "mode:3,1,0", "--t", "0.4", "--samples", "5",
                          "--out", prefix.string()});
    CHECK(r.code == 0);
    std::ifstream js(prefix.string() + ".json"), cs(prefix.string() + ".csv");
    REQUIRE(js.good());
    REQUIRE(cs.good());
    const auto j = nlohmann::json::parse(js);
    CHECK(j["n"] == 2);
    CHECK(j.contains("tail_estimate"));
    std::stringstream ss;
    ss << cs.rdbuf();
    const auto rows = csv_rows(ss.str());
    CHECK(rows[0] == std::vector<std::string>{"t", "x1", "x2", "u"});
    CHECK(rows.size() == 6);
    std::filesystem::remove(prefix.string() + ".json");
    std::filesystem::remove(prefix.string() + ".csv");
  }

  TEST_CASE("evolve-compare on mode data") {
    const Result r = run({"evolve-compare", "--n", "2", "--pmax", "5", "--data", "mode:3,1,0", "--t", "0.5", "--dx", "0.2",
                          "--R", "0.5"});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["spectral_vs_exact"].get<double>() < 1e-8);
    CHECK(j["fd_dominated"].get<bool>());
  }
}
