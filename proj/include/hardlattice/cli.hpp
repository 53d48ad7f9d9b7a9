#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

namespace hardlattice::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidConfig = 1,
  kInadmissibleStart = 2,
  kCheckFailed = 3,
};

struct GlobalOptions {
  std::filesystem::path config;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::filesystem::path> out;
};

struct ScanFlags {
  bool certify_epsilon = false;
  bool emit_gnuplot = false;
};

struct VerifyFlags {
  std::optional<std::int64_t> omega2_oracle_every;
};

// Thread count: --threads, else HARDLATTICE_THREADS, else the config value, else 1.
unsigned resolve_threads(const GlobalOptions& g, const nlohmann::json& config);

// Parses and validates the config file; unknown keys raise std::invalid_argument.
nlohmann::json load_config(const std::filesystem::path& path);

int cmd_scan(const GlobalOptions& g, const ScanFlags& flags, std::ostream& out, std::ostream& err);
int cmd_verify(const GlobalOptions& g, const VerifyFlags& flags, std::ostream& out, std::ostream& err);
int cmd_oracle(const GlobalOptions& g, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace hardlattice::cli
