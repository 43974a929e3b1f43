#include "qsb/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "qsb/errors.hpp"
#include "qsb/serialization.hpp"

namespace qsb {

std::string_view to_string(OutputFormat f) { return f == OutputFormat::Jsonl ? "jsonl" : "csv"; }

std::optional<OutputFormat> parse_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "jsonl" || text == "json") return OutputFormat::Jsonl;
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class Int>
Int parse_int(std::string_view key, std::string_view v) {
  Int out{};
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw NumericalError(ErrorKind::Parse, "bad integer for '" + std::string(key) + "'");
  }
  return out;
}

}  // namespace

void validate(const RunConfig& cfg) {
  if (!(cfg.tolerance_root > 0.0) || !(cfg.tolerance_check > 0.0)) {
    throw NumericalError(ErrorKind::InvalidArgument, "tolerances must be positive");
  }
  if (cfg.samples < 1 || cfg.threads < 1) {
    throw NumericalError(ErrorKind::InvalidArgument, "samples and threads must be >= 1");
  }
}

RunConfig parse_config(std::string_view text, RunConfig cfg) {
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw NumericalError(ErrorKind::Parse, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "seed") {
      cfg.seed = parse_int<std::uint64_t>(key, value);
    } else if (key == "tolerance_root") {
      cfg.tolerance_root = parse_double(value);
    } else if (key == "tolerance_check") {
      cfg.tolerance_check = parse_double(value);
    } else if (key == "samples") {
      cfg.samples = parse_int<std::size_t>(key, value);
    } else if (key == "threads") {
      cfg.threads = parse_int<unsigned>(key, value);
    } else if (key == "output_format") {
      const auto f = parse_format(value);
      if (!f) throw NumericalError(ErrorKind::Parse, "output_format must be csv or jsonl");
      cfg.output_format = *f;
    } else if (key == "output_path") {
      cfg.output_path = std::string(value);
    } else {
      throw NumericalError(ErrorKind::Parse, "unknown config key '" + std::string(key) + "'");
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw NumericalError(ErrorKind::Parse, "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), base);
}

}  // namespace qsb
