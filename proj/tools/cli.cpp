#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "instyle/codec.hpp"
#include "instyle/pipeline.hpp"
#include "instyle/png_io.hpp"
#include "instyle/stretch_record_json.hpp"
#include "instyle/stretching.hpp"

namespace instyle::cli {
namespace {

namespace fs = std::filesystem;

void require(const fs::path& p, const char* flag) {
  if (p.empty()) throw Error(ErrorKind::InvalidArgument, std::string(flag) + " is required");
}

void check_ranges(const RunConfig& config) {
  if (config.mask_threshold < 0 || config.mask_threshold > 255) {
    throw Error(ErrorKind::InvalidArgument, "--mask-threshold must lie in 0..255");
  }
  StylizeParams{config.alpha, config.levels}.validate();
}

BinaryMask read_mask(const RunConfig& config) {
  return load_mask(config.mask_path, static_cast<std::uint8_t>(config.mask_threshold));
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "instyle: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "instyle: IoError: " << e.what() << "\n";
    return kIoFailure;
  } catch (const std::exception& e) {
    err << "instyle: InternalError: " << e.what() << "\n";
    return kNumericFailure;
  }
}

std::string format_residual(double r) {
  if (std::isnan(r)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", r);
  return buf;
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Io:
    case ErrorKind::UnsupportedFormat:
      return kIoFailure;
    case ErrorKind::EmptyMask:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::ShapeMismatch:
      return kMaskFailure;
    case ErrorKind::MalformedRecord:
      return kBadRecord;
    case ErrorKind::InvalidArgument:
      return kUsage;
    default:
      return kNumericFailure;
  }
}

static int stylize_impl(const RunConfig& config, std::ostream& out, std::ostream&) {
  require(config.content_path, "--content");
  require(config.style_path, "--style");
  require(config.mask_path, "--mask");
  require(config.out_path, "--out");
  check_ranges(config);

  const ImageTensor content = load_image(config.content_path);
  const ImageTensor style = load_image(config.style_path);
  const BinaryMask mask = read_mask(config);
  const StylizeTrace trace = stylize_instance_traced(content, mask, style, {config.alpha, config.levels});

  save_image(trace.output, config.out_path);
  if (config.dump_dir) {
    fs::create_directories(*config.dump_dir);
    save_image(trace.stretched.instance.tensor, *config.dump_dir / "stretched.png");
    save_image(trace.stylized.tensor, *config.dump_dir / "stylized_stretched.png");
    save_image(trace.unstretched, *config.dump_dir / "unstretched.png");
    save_record(trace.stretched.record, *config.dump_dir / "record.json");
  }
  out << "wrote " << config.out_path.string() << "\n";
  return kOk;
}

static int stretch_impl(const RunConfig& config, std::ostream& out, std::ostream&) {
  require(config.content_path, "--content");
  require(config.mask_path, "--mask");
  require(config.out_path, "--out");
  check_ranges(config);

  const ForwardStretchResult result = forward_stretch(load_image(config.content_path), read_mask(config));
  const fs::path record_path =
      config.record_path.empty() ? config.out_path.parent_path() / "record.json" : config.record_path;
  save_image(result.instance.tensor, config.out_path);
  save_record(result.record, record_path);
  out << "wrote " << config.out_path.string() << " and " << record_path.string() << "\n";
  return kOk;
}

static int unstretch_impl(const RunConfig& config, std::ostream& out, std::ostream&) {
  require(config.stretched_path, "--stretched");
  require(config.record_path, "--record");
  require(config.out_path, "--out");

  const StretchRecord record = load_record(config.record_path);
  const ImageTensor restored = backward_stretch(StretchedInstance{load_image(config.stretched_path)}, record);
  save_image(restored, config.out_path);
  out << "wrote " << config.out_path.string() << "\n";
  return kOk;
}

static int stats_impl(const RunConfig& config, std::ostream& out, std::ostream& err) {
  require(config.content_path, "--content");
  require(config.style_path, "--style");
  require(config.mask_path, "--mask");
  check_ranges(config);

  const ImageTensor content = load_image(config.content_path);
  const ImageTensor style = load_image(config.style_path);
  const ForwardStretchResult stretched = forward_stretch(content, read_mask(config));

  // A style with zero covariance at any level cannot be matched; report it
  // instead of running the transfer.
  const auto style_baseline = level_residuals(style, style, config.levels);
  bool degenerate = false;
  for (const auto& lr : style_baseline) {
    if (std::isnan(lr.residual)) {
      degenerate = true;
      err << "instyle: warning: degenerate style (zero covariance) at level=" << lr.level << "\n";
    }
  }
  if (degenerate) {
    for (const auto& lr : style_baseline) out << "level=" << lr.level << " residual=nan\n";
    return kOk;
  }

  const auto stylized = stylize_stretched_traced(stretched.instance, style, {config.alpha, config.levels});
  auto residuals = stylized.pass_residuals;
  std::sort(residuals.begin(), residuals.end(),
            [](const LevelResidual& x, const LevelResidual& y) { return x.level < y.level; });
  for (const auto& lr : residuals) {
    out << "level=" << lr.level << " residual=" << format_residual(lr.residual) << "\n";
  }
  return kOk;
}

int cmd_stylize(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { return stylize_impl(config, out, err); });
}

int cmd_stretch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { return stretch_impl(config, out, err); });
}

int cmd_unstretch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { return unstretch_impl(config, out, err); });
}

int cmd_stats(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] { return stats_impl(config, out, err); });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Instance style transfer: stretch a masked instance, restyle it, put it back"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file; command-line flags take precedence");

  RunConfig config;
  std::string dump_dir;
  app.add_option("--content", config.content_path, "content PNG");
  app.add_option("--style", config.style_path, "style PNG");
  app.add_option("--mask", config.mask_path, "mask PNG");
  app.add_option("--out", config.out_path, "output PNG");
  app.add_option("--stretched", config.stretched_path, "stretched PNG (unstretch input)");
  app.add_option("--record", config.record_path, "stretch record JSON");
  app.add_option("--alpha", config.alpha, "style blend weight in [0,1]")->capture_default_str();
  app.add_option("--levels", config.levels, "codec levels, 1..5")->capture_default_str();
  app.add_option("--mask-threshold", config.mask_threshold, "mask luma threshold, 0..255")
      ->capture_default_str();
  app.add_option("--dump-dir", dump_dir, "directory for intermediate images");

  auto* stylize = app.add_subcommand("stylize", "full pipeline: stretch, stylize, unstretch, composite");
  auto* stretch = app.add_subcommand("stretch", "forward stretching only; writes the PNG and record.json");
  auto* unstretch = app.add_subcommand("unstretch", "backward stretching from a stretched PNG and record.json");
  auto* stats = app.add_subcommand("stats", "per-level covariance residual against the style");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "instyle: " << e.what() << "\n";
    return kUsage;
  }
  if (!dump_dir.empty()) config.dump_dir = dump_dir;

  if (stylize->parsed()) return cmd_stylize(config, out, err);
  if (stretch->parsed()) return cmd_stretch(config, out, err);
  if (unstretch->parsed()) return cmd_unstretch(config, out, err);
  if (stats->parsed()) return cmd_stats(config, out, err);
  return kUsage;
}

}  // namespace instyle::cli
