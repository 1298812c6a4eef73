#pragma once

// Whitening / colouring transforms on C x M feature matrices.
//
// Covariance is the unnormalised product f f^T. Eigenvalues at or below
// kRankEpsilon * lambda_max are treated as zero: their directions are
// mapped with multiplier 0 by both whiten and color.

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "instyle/error.hpp"

namespace instyle {

template <typename Scalar>
using FeatureMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using FeatureVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

inline constexpr double kRankEpsilon = 1e-8;
inline constexpr double kSymmetryTolerance = 1e-10;

template <typename Scalar>
struct EigenPair {
  FeatureVector<Scalar> eigenvalues;   // descending, >= 0
  FeatureMatrix<Scalar> eigenvectors;  // orthonormal columns
};

template <typename Scalar>
struct StyleStats {
  FeatureVector<Scalar> mean;
  EigenPair<Scalar> eig;
  // Number of samples the covariance was accumulated over.
  Eigen::Index sample_count = 0;
};

template <typename Scalar>
struct Centered {
  FeatureMatrix<Scalar> features;
  FeatureVector<Scalar> mean;
};

template <typename Derived>
Centered<typename Derived::Scalar> mean_center(const Eigen::MatrixBase<Derived>& f) {
  using Scalar = typename Derived::Scalar;
  if (f.rows() < 1 || f.cols() < 1) {
    throw Error(ErrorKind::ShapeMismatch, "feature matrix must be at least 1x1");
  }
  Centered<Scalar> out;
  out.mean = f.rowwise().mean();
  out.features = f.colwise() - out.mean;
  return out;
}

template <typename Derived>
FeatureMatrix<typename Derived::Scalar> covariance(const Eigen::MatrixBase<Derived>& centered) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index c = centered.rows();
  FeatureMatrix<Scalar> cov = FeatureMatrix<Scalar>::Zero(c, c);
  cov.template selfadjointView<Eigen::Lower>().rankUpdate(centered.derived());
  return cov.template selfadjointView<Eigen::Lower>();
}

/// Symmetric PSD eigendecomposition, eigenvalues sorted descending.
/// Negative eigenvalues within round-off of zero are clamped to 0.
template <typename Derived>
EigenPair<typename Derived::Scalar> sym_eig(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw Error(ErrorKind::ShapeMismatch, "sym_eig needs a non-empty square matrix");
  }
  const Scalar scale = std::max<Scalar>(Scalar(1), a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > Scalar(kSymmetryTolerance) * scale) {
    throw Error(ErrorKind::NonSymmetric, "sym_eig input is not symmetric");
  }

  Eigen::SelfAdjointEigenSolver<FeatureMatrix<Scalar>> solver(a.derived(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::Internal, "symmetric eigensolver did not converge");
  }

  const Eigen::Index n = a.rows();
  EigenPair<Scalar> out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();

  // Round-off negatives scale with the matrix magnitude and size.
  const Scalar negative_tol = Scalar(64) * Scalar(n) * Eigen::NumTraits<Scalar>::epsilon() * scale;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (out.eigenvalues(i) < -negative_tol) {
      throw Error(ErrorKind::NotPositiveSemidefinite, "covariance has a negative eigenvalue");
    }
    out.eigenvalues(i) = std::max(out.eigenvalues(i), Scalar(0));
  }
  return out;
}

namespace detail {

// E diag(g(lambda)) E^T x, with g = 0 on the discarded eigenspace. Applied
// factor by factor so the C x C operator is never formed.
template <typename Scalar, typename Derived, typename Fn>
FeatureMatrix<Scalar> apply_spectral(const EigenPair<Scalar>& eig, const Eigen::MatrixBase<Derived>& x, Fn&& g) {
  const Scalar lambda_max = eig.eigenvalues.size() ? eig.eigenvalues(0) : Scalar(0);
  const Scalar cutoff = Scalar(kRankEpsilon) * lambda_max;
  FeatureVector<Scalar> d(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    const Scalar lambda = eig.eigenvalues(i);
    d(i) = (lambda > cutoff && lambda > Scalar(0)) ? g(lambda) : Scalar(0);
  }
  const FeatureMatrix<Scalar> projected = d.asDiagonal() * (eig.eigenvectors.transpose() * x);
  return eig.eigenvectors * projected;
}

}  // namespace detail

/// Eigenpairs of the covariance f f^T of centred features.
///
/// With at least as many samples as channels this is sym_eig(covariance(f)).
/// With fewer samples (M < C) the covariance has rank < M, so the thin SVD
/// f = U S V^T is used instead: eigenvectors U (C x M, orthonormal) and
/// eigenvalues S^2. The omitted directions all have eigenvalue 0.
template <typename Derived>
EigenPair<typename Derived::Scalar> covariance_eig(const Eigen::MatrixBase<Derived>& centered) {
  using Scalar = typename Derived::Scalar;
  if (centered.cols() >= centered.rows()) return sym_eig(covariance(centered));
  Eigen::BDCSVD<FeatureMatrix<Scalar>> svd(centered.derived(), Eigen::ComputeThinU);
  EigenPair<Scalar> out;
  out.eigenvalues = svd.singularValues().array().square();  // already descending
  out.eigenvectors = svd.matrixU();
  return out;
}

/// E_c D_c^{-1/2} E_c^T f for centred f.
template <typename Derived>
FeatureMatrix<typename Derived::Scalar> whiten(const Eigen::MatrixBase<Derived>& centered) {
  using Scalar = typename Derived::Scalar;
  const auto eig = covariance_eig(centered);
  if (!(eig.eigenvalues(0) > Scalar(0))) {
    throw Error(ErrorKind::DegenerateFeatures, "content features have zero covariance");
  }
  return detail::apply_spectral(eig, centered, [](Scalar l) { return Scalar(1) / std::sqrt(l); });
}

template <typename Derived>
StyleStats<typename Derived::Scalar> capture_style(const Eigen::MatrixBase<Derived>& style) {
  auto c = mean_center(style);
  StyleStats<typename Derived::Scalar> stats;
  stats.eig = covariance_eig(c.features);
  stats.mean = std::move(c.mean);
  stats.sample_count = style.cols();
  return stats;
}

/// E_s D_s^{1/2} E_s^T f_hat, plus the style mean on every column.
///
/// When the whitened content has a different sample count M_c than the
/// style (M_s), D_s is rescaled by M_c / M_s so the per-sample covariance
/// of the result matches the style's. With M_c == M_s the factor is 1.
template <typename Derived>
FeatureMatrix<typename Derived::Scalar> color(const Eigen::MatrixBase<Derived>& whitened,
                                              const StyleStats<typename Derived::Scalar>& style) {
  using Scalar = typename Derived::Scalar;
  if (whitened.rows() != style.mean.size() || whitened.rows() != style.eig.eigenvectors.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "color: channel count differs from style");
  }
  const Scalar ratio = style.sample_count > 0
                           ? Scalar(whitened.cols()) / Scalar(style.sample_count)
                           : Scalar(1);
  FeatureMatrix<Scalar> out =
      detail::apply_spectral(style.eig, whitened, [ratio](Scalar l) { return std::sqrt(l * ratio); });
  out.colwise() += style.mean;
  return out;
}

template <typename DerivedA, typename DerivedB>
FeatureMatrix<typename DerivedA::Scalar> blend(const Eigen::MatrixBase<DerivedA>& stylized,
                                               const Eigen::MatrixBase<DerivedB>& content,
                                               double alpha) {
  using Scalar = typename DerivedA::Scalar;
  if (stylized.rows() != content.rows() || stylized.cols() != content.cols()) {
    throw Error(ErrorKind::ShapeMismatch, "blend: shapes differ");
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "blend: alpha must lie in [0,1]");
  }
  const Scalar a(alpha);
  return a * stylized + (Scalar(1) - a) * content;
}

/// Full transfer: centre, whiten, colour with the style statistics and
/// blend with the original (uncentred) content.
template <typename DerivedC, typename DerivedS>
FeatureMatrix<typename DerivedC::Scalar> wct_transfer(const Eigen::MatrixBase<DerivedC>& content,
                                                      const Eigen::MatrixBase<DerivedS>& style,
                                                      double alpha) {
  if (content.rows() != style.rows()) {
    throw Error(ErrorKind::ShapeMismatch, "wct_transfer: channel counts differ");
  }
  using Scalar = typename DerivedC::Scalar;
  const auto centered = mean_center(content);
  // Content that is constant up to round-off carries no second-order
  // statistics to whiten.
  const Scalar scale = std::max<Scalar>(Scalar(1), content.cwiseAbs().maxCoeff());
  if (centered.features.cwiseAbs().maxCoeff() <= Scalar(1e-12) * scale) {
    throw Error(ErrorKind::DegenerateFeatures, "content features are constant");
  }
  const auto stylized = color(whiten(centered.features), capture_style(style));
  return blend(stylized, content, alpha);
}

/// max |cov_a / M_a - cov_b / M_b| / max |cov_b / M_b| over per-sample
/// centred covariances. Returns NaN when b has zero covariance.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar covariance_residual(const Eigen::MatrixBase<DerivedA>& a,
                                             const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const FeatureMatrix<Scalar> ca = covariance(mean_center(a).features) / Scalar(a.cols());
  const FeatureMatrix<Scalar> cb = covariance(mean_center(b).features) / Scalar(b.cols());
  const Scalar denom = cb.cwiseAbs().maxCoeff();
  if (!(denom > Scalar(0))) return std::numeric_limits<Scalar>::quiet_NaN();
  return (ca - cb).cwiseAbs().maxCoeff() / denom;
}

}  // namespace instyle
