#include "instyle/pipeline.hpp"

#include <string>

#include "instyle/wct.hpp"

namespace instyle {

void StylizeParams::validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in [0,1], got " + std::to_string(alpha));
  }
  if (levels < 1 || levels > kMaxLevels) {
    throw Error(ErrorKind::InvalidArgument, "levels must lie in 1..5, got " + std::to_string(levels));
  }
}

StylizedStretched stylize_stretched_traced(const StretchedInstance& content, const ImageTensor& style,
                                           const StylizeParams& params, bool measure_residuals) {
  params.validate();
  if (style.channels() != content.tensor.channels()) {
    throw Error(ErrorKind::DimensionMismatch, "style and content channel counts differ");
  }
  StylizedStretched result;
  ImageTensor current = content.tensor;
  for (int level = params.levels; level >= 1; --level) {
    const auto [padded, pad] = pad_to_depth(current, level);
    const auto style_padded = pad_to_depth(style, level).first;

    LevelFeatures<double> features = encode(padded, level);
    const LevelFeatures<double> style_features = encode(style_padded, level);
    features.matrix = wct_transfer(features.matrix, style_features.matrix, params.alpha);
    if (measure_residuals) {
      result.pass_residuals.push_back({level, covariance_residual(features.matrix, style_features.matrix)});
    }
    current = unpad(decode(features, level), pad);
  }
  result.instance.tensor = std::move(current);
  return result;
}

StretchedInstance stylize_stretched(const StretchedInstance& content, const ImageTensor& style,
                                    const StylizeParams& params) {
  return std::move(stylize_stretched_traced(content, style, params, false).instance);
}

ImageTensor composite(const ImageTensor& content, const ImageTensor& unstretched, const BinaryMask& mask) {
  if (!content.same_shape(unstretched) || content.height() != mask.height() ||
      content.width() != mask.width()) {
    throw Error(ErrorKind::DimensionMismatch, "composite inputs differ in size");
  }
  ImageTensor out = content;
  for (Index ch = 0; ch < out.channels(); ++ch) {
    // Zeroed-mask content plus the unstretched instance, written as a select.
    out.plane(ch) = mask.bits().select(unstretched.plane(ch), content.plane(ch));
  }
  return out;
}

StylizeTrace stylize_instance_traced(const ImageTensor& content, const BinaryMask& mask,
                                     const ImageTensor& style, const StylizeParams& params) {
  params.validate();
  StylizeTrace trace{forward_stretch(content, mask), {}, {}, {}};
  trace.stylized = stylize_stretched(trace.stretched.instance, style, params);
  trace.unstretched = backward_stretch(trace.stylized, trace.stretched.record);
  trace.output = composite(content, trace.unstretched, mask);
  return trace;
}

ImageTensor stylize_instance(const ImageTensor& content, const BinaryMask& mask, const ImageTensor& style,
                             const StylizeParams& params) {
  return stylize_instance_traced(content, mask, style, params).output;
}

std::vector<LevelResidual> level_residuals(const ImageTensor& image, const ImageTensor& style, int levels) {
  if (levels < 1 || levels > kMaxLevels) {
    throw Error(ErrorKind::InvalidArgument, "levels must lie in 1..5");
  }
  std::vector<LevelResidual> out;
  for (int level = 1; level <= levels; ++level) {
    const auto fx = encode(pad_to_depth(image, level).first, level);
    const auto fs = encode(pad_to_depth(style, level).first, level);
    out.push_back({level, covariance_residual(fx.matrix, fs.matrix)});
  }
  return out;
}

}  // namespace instyle
