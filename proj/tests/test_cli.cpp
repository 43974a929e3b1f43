#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsb/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = qsb::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("qsb_cli_" + name);
  std::ofstream(path) << text;
  return path.string();
}

std::vector<nlohmann::json> json_lines(const std::string& text) {
  std::vector<nlohmann::json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

}  // namespace

TEST_CASE("dist prints the distance") {
  const auto r = run({"dist", "--kind", "D", "--p", "0,0", "--q", "5,0"});
  CHECK(r.code == qsb::cli::kExitOk);
  CHECK(r.out == "5\n");
  CHECK(run({"dist", "--kind", "Ds", "--p", "0,0", "--q", "0,1"}).out == "1\n");
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == qsb::cli::kExitUsage);
  CHECK(run({"dist", "--kind", "Q", "--p", "0,0", "--q", "1,0"}).code == qsb::cli::kExitUsage);
  CHECK(run({"dist", "--kind", "D", "--p", "0;0", "--q", "1,0"}).code == qsb::cli::kExitUsage);
  CHECK(run({"nonsense"}).code == qsb::cli::kExitUsage);
  CHECK(run({"map", "apply", "--p", "1,1"}).code == qsb::cli::kExitUsage);
}

TEST_CASE("check sandwich passes and is deterministic") {
  const std::vector<std::string> args{"check", "sandwich", "--samples", "20000", "--seed", "7",
                                      "--format", "jsonl"};
  const auto a = run(args);
  CHECK(a.code == qsb::cli::kExitOk);
  const auto b = run(args);
  CHECK(a.out == b.out);
  auto threaded = args;
  threaded.insert(threaded.end(), {"--threads", "4"});
  CHECK(run(threaded).out == a.out);
  const auto recs = json_lines(a.out);
  REQUIRE_FALSE(recs.empty());
  const auto& s = recs.back();
  CHECK(s["pass"] == true);
  CHECK(s["violations"] == 0);
}

TEST_CASE("map files") {
  const auto f = temp_file("map.txt", "a 2\nb 0\nc 0 0 0 0\n");
  const auto r = run({"map", "bound", "--map", f, "--format", "jsonl"});
  CHECK(r.code == 0);
  const auto rec = json_lines(r.out).at(0);
  CHECK(rec["bound"].get<double>() == doctest::Approx(3.3863).epsilon(1e-4));

  const auto inv = run({"map", "invert", "--map", f});
  CHECK(inv.out.find("a 0.5") != std::string::npos);

  const auto cls = run({"map", "classify", "--builtin", "lambda:0.5", "--format", "jsonl"});
  CHECK(json_lines(cls.out).at(0)["class"] == "Similarity");

  const auto bad = temp_file("bad.txt", "a 0\nb 0\nc 0 0 0 0\n");
  const auto e = run({"map", "bound", "--map", bad, "--format", "jsonl"});
  CHECK(e.code == qsb::cli::kExitCheckFailed);
  const auto err = json_lines(e.out).at(0);
  CHECK(err["record"] == "error");
  CHECK(err["error"] == "InvalidArgument");
}

TEST_CASE("config file, with flags taking precedence") {
  const auto cfg = temp_file("cfg.txt", "seed = 3\nsamples = 500\noutput_format = jsonl\n");
  const auto a = run({"check", "norms", "--config", cfg});
  CHECK(a.code == 0);
  const auto s = json_lines(a.out).back();
  CHECK(s["samples"] == 500);
  const auto b = run({"check", "norms", "--config", cfg, "--samples", "50"});
  CHECK(json_lines(b.out).back()["samples"] == 50);
  const auto bad = temp_file("cfg_bad.txt", "colour = red\n");
  CHECK(run({"check", "norms", "--config", bad}).code == qsb::cli::kExitUsage);
}

TEST_CASE("geometry subcommands") {
  CHECK(run({"geometry", "tau-check"}).code == 0);
  const auto lift = run({"geometry", "lift", "--point", "0,0,5", "--format", "jsonl"});
  CHECK(json_lines(lift.out).at(0)["t"] == 5.0);
}
