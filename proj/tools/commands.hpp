#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace trp::cli {

/// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

enum class Format { kJson, kTable };

struct Options {
  double tol = 1e-10;
  int max_iter = 200;
  std::uint64_t seed = 0;
  int samples = 10000;
  int jobs = 1;
  Format format = Format::kJson;
  std::string out;
};

int cmd_solve(const std::filesystem::path& path, const Options& opt, std::ostream& out,
              std::ostream& err);
int cmd_dual(const std::filesystem::path& path, const Options& opt, std::ostream& out,
             std::ostream& err);
int cmd_gap(const std::filesystem::path& path, const Options& opt, std::ostream& out,
            std::ostream& err);
int cmd_certify(const std::filesystem::path& path, const Options& opt, std::ostream& out,
                std::ostream& err);
int cmd_repro(const std::string& name, const Options& opt, std::ostream& out, std::ostream& err);
int cmd_batch(const std::filesystem::path& dir, const Options& opt, std::ostream& out,
              std::ostream& err);

/// Applies TRP_LOG (error, info, debug) to the stderr logger.
void configure_logging();

}  // namespace trp::cli
