#pragma once

#include <vector>

#include "instyle/codec.hpp"
#include "instyle/image.hpp"
#include "instyle/stretching.hpp"

namespace instyle {

struct StylizeParams {
  double alpha = 0.6;  // weight of the stylised features
  int levels = 3;      // coarsest codec level; passes run levels..1

  /// Throws InvalidArgument when alpha or levels are out of range.
  void validate() const;
};

struct LevelResidual {
  int level = 0;
  double residual = 0.0;  // NaN when the style has zero covariance at this level
};

struct StylizedStretched {
  StretchedInstance instance;
  // One entry per pass, coarsest first: residual of the features each pass
  // handed to the decoder against the style features at that level.
  std::vector<LevelResidual> pass_residuals;
};

/// Multi-level transfer on a stretched instance, coarsest level first.
/// pass_residuals is left empty unless measure_residuals is set.
StylizedStretched stylize_stretched_traced(const StretchedInstance& content, const ImageTensor& style,
                                           const StylizeParams& params, bool measure_residuals = true);

StretchedInstance stylize_stretched(const StretchedInstance& content, const ImageTensor& style,
                                    const StylizeParams& params);

/// Content with mask pixels replaced by the unstretched samples.
ImageTensor composite(const ImageTensor& content, const ImageTensor& unstretched,
                      const BinaryMask& mask);

/// Every intermediate of one stylize_instance run.
struct StylizeTrace {
  ForwardStretchResult stretched;
  StretchedInstance stylized;
  ImageTensor unstretched;
  ImageTensor output;
};

StylizeTrace stylize_instance_traced(const ImageTensor& content, const BinaryMask& mask,
                                     const ImageTensor& style, const StylizeParams& params);

ImageTensor stylize_instance(const ImageTensor& content, const BinaryMask& mask,
                             const ImageTensor& style, const StylizeParams& params);

/// Per-sample covariance-matching residual of `image` against `style` at
/// codec levels 1..levels (both padded to the level's depth).
std::vector<LevelResidual> level_residuals(const ImageTensor& image, const ImageTensor& style,
                                           int levels);

}  // namespace instyle
