#pragma once

// Exactly invertible multiscale codec.
//
// Each level applies the orthonormal 2x2 block transform
//   1/2 [1 1; 1 1], 1/2 [1 -1; 1 -1], 1/2 [1 1; -1 -1], 1/2 [1 -1; -1 1]
// to every channel and stacks the four subbands as new channels, so level l
// of a 3-channel H x W image has 3 * 4^l channels on an (H/2^l) x (W/2^l)
// grid. Channel ch at one level becomes channels 4ch .. 4ch+3 at the next.

#include <cstddef>
#include <vector>

#include "instyle/image.hpp"
#include "instyle/wct.hpp"

namespace instyle {

inline constexpr int kMaxLevels = 5;

template <typename Scalar>
struct LevelFeatures {
  int level = 0;
  Index height = 0;  // grid height at this level
  Index width = 0;
  FeatureMatrix<Scalar> matrix;  // channels x (height * width), row-major grid order

  Index channels() const { return matrix.rows(); }
};

struct PadRecord {
  Index original_height = 0;
  Index original_width = 0;
  Index padded_height = 0;
  Index padded_width = 0;
  Index pad_bottom = 0;
  Index pad_right = 0;
};

inline Index round_up_pow2(Index n, int level) {
  const Index block = Index(1) << level;
  return (n + block - 1) / block * block;
}

/// Edge-replicates the bottom and right borders up to multiples of 2^level.
template <typename Scalar>
std::pair<Image<Scalar>, PadRecord> pad_to_depth(const Image<Scalar>& image, int level) {
  if (level < 1 || level > kMaxLevels) {
    throw Error(ErrorKind::InvalidArgument, "pad_to_depth: level must be in 1..5");
  }
  PadRecord rec;
  rec.original_height = image.height();
  rec.original_width = image.width();
  rec.padded_height = round_up_pow2(image.height(), level);
  rec.padded_width = round_up_pow2(image.width(), level);
  rec.pad_bottom = rec.padded_height - rec.original_height;
  rec.pad_right = rec.padded_width - rec.original_width;

  std::vector<typename Image<Scalar>::Plane> planes;
  planes.reserve(static_cast<std::size_t>(image.channels()));
  for (const auto& src : image.planes()) {
    typename Image<Scalar>::Plane p(rec.padded_height, rec.padded_width);
    p.topLeftCorner(rec.original_height, rec.original_width) = src;
    for (Index c = rec.original_width; c < rec.padded_width; ++c) {
      p.col(c).head(rec.original_height) = src.col(rec.original_width - 1);
    }
    for (Index r = rec.original_height; r < rec.padded_height; ++r) {
      p.row(r) = p.row(rec.original_height - 1);
    }
    planes.push_back(std::move(p));
  }
  return {Image<Scalar>(std::move(planes)), rec};
}

template <typename Scalar>
Image<Scalar> unpad(const Image<Scalar>& padded, const PadRecord& rec) {
  if (padded.height() != rec.padded_height || padded.width() != rec.padded_width) {
    throw Error(ErrorKind::ShapeMismatch, "unpad: image does not match pad record");
  }
  std::vector<typename Image<Scalar>::Plane> planes;
  for (const auto& p : padded.planes()) {
    planes.emplace_back(p.topLeftCorner(rec.original_height, rec.original_width));
  }
  return Image<Scalar>(std::move(planes));
}

namespace detail {

template <typename Scalar>
using Plane = typename Image<Scalar>::Plane;

template <typename Scalar>
std::vector<Plane<Scalar>> analyze_once(const std::vector<Plane<Scalar>>& in) {
  const Index h = in.front().rows() / 2;
  const Index w = in.front().cols() / 2;
  const Scalar half(0.5);
  std::vector<Plane<Scalar>> out;
  out.reserve(in.size() * 4);
  for (const auto& p : in) {
    Plane<Scalar> ll(h, w), lh(h, w), hl(h, w), hh(h, w);
    for (Index c = 0; c < w; ++c) {
      for (Index r = 0; r < h; ++r) {
        const Scalar tl = p(2 * r, 2 * c), tr = p(2 * r, 2 * c + 1);
        const Scalar bl = p(2 * r + 1, 2 * c), br = p(2 * r + 1, 2 * c + 1);
        ll(r, c) = half * ((tl + tr) + (bl + br));
        lh(r, c) = half * ((tl - tr) + (bl - br));
        hl(r, c) = half * ((tl + tr) - (bl + br));
        hh(r, c) = half * ((tl - tr) - (bl - br));
      }
    }
    out.push_back(std::move(ll));
    out.push_back(std::move(lh));
    out.push_back(std::move(hl));
    out.push_back(std::move(hh));
  }
  return out;
}

template <typename Scalar>
std::vector<Plane<Scalar>> synthesize_once(const std::vector<Plane<Scalar>>& in) {
  const Index h = in.front().rows();
  const Index w = in.front().cols();
  const Scalar half(0.5);
  std::vector<Plane<Scalar>> out;
  out.reserve(in.size() / 4);
  for (std::size_t base = 0; base < in.size(); base += 4) {
    const auto& ll = in[base];
    const auto& lh = in[base + 1];
    const auto& hl = in[base + 2];
    const auto& hh = in[base + 3];
    Plane<Scalar> p(2 * h, 2 * w);
    for (Index c = 0; c < w; ++c) {
      for (Index r = 0; r < h; ++r) {
        const Scalar s0 = ll(r, c), s1 = lh(r, c), s2 = hl(r, c), s3 = hh(r, c);
        p(2 * r, 2 * c) = half * ((s0 + s1) + (s2 + s3));
        p(2 * r, 2 * c + 1) = half * ((s0 - s1) + (s2 - s3));
        p(2 * r + 1, 2 * c) = half * ((s0 + s1) - (s2 + s3));
        p(2 * r + 1, 2 * c + 1) = half * ((s0 - s1) - (s2 - s3));
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace detail

template <typename Scalar>
LevelFeatures<Scalar> encode(const Image<Scalar>& image, int level) {
  if (level < 1 || level > kMaxLevels) {
    throw Error(ErrorKind::InvalidArgument, "encode: level must be in 1..5");
  }
  const Index block = Index(1) << level;
  if (image.height() % block != 0 || image.width() % block != 0) {
    throw Error(ErrorKind::ShapeMismatch, "encode: image dims not divisible by 2^level");
  }
  std::vector<detail::Plane<Scalar>> planes = image.planes();
  for (int i = 0; i < level; ++i) planes = detail::analyze_once<Scalar>(planes);

  LevelFeatures<Scalar> out;
  out.level = level;
  out.height = planes.front().rows();
  out.width = planes.front().cols();
  out.matrix.resize(static_cast<Index>(planes.size()), out.height * out.width);
  for (std::size_t ch = 0; ch < planes.size(); ++ch) {
    // Row-major flattening of the grid: column index = r * width + c.
    const detail::Plane<Scalar> t = planes[ch].transpose();
    out.matrix.row(static_cast<Index>(ch)) =
        Eigen::Map<const FeatureVector<Scalar>>(t.data(), t.size()).transpose();
  }
  return out;
}

template <typename Scalar>
Image<Scalar> decode(const LevelFeatures<Scalar>& features, int level) {
  if (level < 1 || level > kMaxLevels || features.level != level) {
    throw Error(ErrorKind::InvalidArgument, "decode: level mismatch");
  }
  const Index group = Index(1) << (2 * level);
  if (features.channels() < group || features.channels() % group != 0) {
    throw Error(ErrorKind::ShapeMismatch, "decode: channel count is not a multiple of 4^level");
  }
  if (features.height < 1 || features.width < 1 ||
      features.matrix.cols() != features.height * features.width) {
    throw Error(ErrorKind::ShapeMismatch, "decode: grid size does not match feature matrix");
  }
  std::vector<detail::Plane<Scalar>> planes;
  planes.reserve(static_cast<std::size_t>(features.channels()));
  for (Index ch = 0; ch < features.channels(); ++ch) {
    const FeatureVector<Scalar> row = features.matrix.row(ch).transpose();
    planes.emplace_back(
        Eigen::Map<const detail::Plane<Scalar>>(row.data(), features.width, features.height).transpose());
  }
  for (int i = 0; i < level; ++i) planes = detail::synthesize_once<Scalar>(planes);
  return Image<Scalar>(std::move(planes));
}

}  // namespace instyle
