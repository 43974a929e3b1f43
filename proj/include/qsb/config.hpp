#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace qsb {

enum class OutputFormat { Csv, Jsonl };

std::string_view to_string(OutputFormat f);
std::optional<OutputFormat> parse_format(std::string_view text);

struct RunConfig {
  std::uint64_t seed = 1;
  double tolerance_root = 1e-12;
  double tolerance_check = 1e-9;
  std::size_t samples = 10000;
  unsigned threads = 1;
  OutputFormat output_format = OutputFormat::Csv;
  std::string output_path;  // empty: standard output
};

// Flat `key = value` text; '#' starts a comment. Keys: seed, tolerance_root,
// tolerance_check, samples, threads, output_format, output_path. Values not
// mentioned keep their value from `base`. Throws Parse on unknown keys or bad
// values, InvalidArgument when the result violates the invariants.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

// Tolerances positive, samples and threads >= 1.
void validate(const RunConfig& cfg);

}  // namespace qsb
