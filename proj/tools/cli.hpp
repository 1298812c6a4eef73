#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "instyle/error.hpp"

namespace instyle::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kIoFailure = 2,
  kMaskFailure = 3,    // EmptyMask, DimensionMismatch
  kNumericFailure = 4, // DegenerateFeatures and other numeric errors
  kBadRecord = 5,
};

struct RunConfig {
  std::filesystem::path content_path;
  std::filesystem::path style_path;
  std::filesystem::path mask_path;
  std::filesystem::path out_path;
  std::filesystem::path stretched_path;  // unstretch input
  std::filesystem::path record_path;
  double alpha = 0.6;
  int levels = 3;
  int mask_threshold = 128;
  std::optional<std::filesystem::path> dump_dir;
};

int exit_code_for(ErrorKind kind) noexcept;

int cmd_stylize(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_stretch(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_unstretch(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_stats(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace instyle::cli
