#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "instyle/error.hpp"

namespace instyle {

using Index = Eigen::Index;

/// H x W x C grid of samples, stored as one dense plane per channel.
///
/// Samples loaded from disk live in [0,1]; intermediate results may leave
/// that range and are only clamped when written back out.
template <typename Scalar>
class Image {
 public:
  using Plane = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Image() = default;

  Image(Index height, Index width, Index channels, Scalar fill = Scalar(0)) {
    if (height < 1 || width < 1 || channels < 1) {
      throw Error(ErrorKind::InvalidArgument, "image dimensions must be positive");
    }
    planes_.assign(static_cast<std::size_t>(channels), Plane::Constant(height, width, fill));
  }

  explicit Image(std::vector<Plane> planes) : planes_(std::move(planes)) {
    if (planes_.empty() || planes_.front().size() == 0) {
      throw Error(ErrorKind::InvalidArgument, "image needs at least one non-empty plane");
    }
    for (const auto& p : planes_) {
      if (p.rows() != planes_.front().rows() || p.cols() != planes_.front().cols()) {
        throw Error(ErrorKind::DimensionMismatch, "image planes differ in size");
      }
    }
  }

  Index height() const { return planes_.empty() ? 0 : planes_.front().rows(); }
  Index width() const { return planes_.empty() ? 0 : planes_.front().cols(); }
  Index channels() const { return static_cast<Index>(planes_.size()); }

  const Plane& plane(Index ch) const { return planes_[static_cast<std::size_t>(ch)]; }
  Plane& plane(Index ch) { return planes_[static_cast<std::size_t>(ch)]; }
  const std::vector<Plane>& planes() const { return planes_; }

  Scalar operator()(Index row, Index col, Index ch) const { return plane(ch)(row, col); }
  Scalar& operator()(Index row, Index col, Index ch) { return plane(ch)(row, col); }

  bool same_shape(const Image& other) const {
    return height() == other.height() && width() == other.width() &&
           channels() == other.channels();
  }

  friend bool operator==(const Image& lhs, const Image& rhs) {
    if (!lhs.same_shape(rhs)) return false;
    for (Index ch = 0; ch < lhs.channels(); ++ch) {
      if ((lhs.plane(ch).array() != rhs.plane(ch).array()).any()) return false;
    }
    return true;
  }

  /// Largest absolute per-sample difference; shapes must match.
  Scalar max_abs_diff(const Image& other) const {
    if (!same_shape(other)) {
      throw Error(ErrorKind::DimensionMismatch, "max_abs_diff on differently shaped images");
    }
    Scalar worst(0);
    for (Index ch = 0; ch < channels(); ++ch) {
      worst = std::max(worst, (plane(ch) - other.plane(ch)).cwiseAbs().maxCoeff());
    }
    return worst;
  }

  bool all_finite() const {
    for (const auto& p : planes_) {
      if (!p.allFinite()) return false;
    }
    return true;
  }

 private:
  std::vector<Plane> planes_;
};

using ImageTensor = Image<double>;

/// H x W boolean grid marking instance membership.
class BinaryMask {
 public:
  using Bits = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

  BinaryMask() = default;
  BinaryMask(Index height, Index width, bool fill = false)
      : bits_(Bits::Constant(height, width, fill)) {
    if (height < 1 || width < 1) {
      throw Error(ErrorKind::InvalidArgument, "mask dimensions must be positive");
    }
  }
  explicit BinaryMask(Bits bits) : bits_(std::move(bits)) {}

  Index height() const { return bits_.rows(); }
  Index width() const { return bits_.cols(); }
  Index popcount() const { return bits_.count(); }

  bool operator()(Index row, Index col) const { return bits_(row, col); }
  Bits::Scalar& operator()(Index row, Index col) { return bits_(row, col); }
  const Bits& bits() const { return bits_; }

 private:
  Bits bits_;
};

/// Smallest axis-aligned rectangle covering a mask's true pixels.
/// Columns a..b and rows c..d, all inclusive.
struct PackingBox {
  Index a = 0;
  Index b = 0;
  Index c = 0;
  Index d = 0;

  Index width() const { return b - a + 1; }
  Index height() const { return d - c + 1; }

  friend bool operator==(const PackingBox&, const PackingBox&) = default;
};

PackingBox bounding_box(const BinaryMask& mask);

ImageTensor crop(const ImageTensor& image, const PackingBox& box);

}  // namespace instyle
