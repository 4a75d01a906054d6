#include "wii/pca.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wii/error.hpp"

namespace wii {

namespace {

Eigen::VectorXd flatten(const FeatureMatrix& m) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(m.values.size()));
  for (std::size_t i = 0; i < m.values.size(); ++i) v[static_cast<Eigen::Index>(i)] = m.values[i];
  return v;
}

}  // namespace

PcaModel pca_fit(std::span<const FeatureMatrix> train, int k) {
  if (train.empty()) throw Error(ErrorCode::dimension, "PCA needs training vectors");
  const auto d = static_cast<Eigen::Index>(train.front().values.size());
  if (k < 1 || k > d) {
    throw Error(ErrorCode::dimension, "PCA k=" + std::to_string(k) + " outside [1, " + std::to_string(d) + "]");
  }
  if (static_cast<Eigen::Index>(train.size()) < k + 1) {
    throw Error(ErrorCode::dimension, "PCA with k=" + std::to_string(k) + " needs at least k+1 vectors");
  }

  const auto n = static_cast<Eigen::Index>(train.size());
  Eigen::MatrixXd x(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& m = train[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(m.values.size()) != d) throw Error(ErrorCode::dimension, "PCA inputs differ in size");
    for (Eigen::Index j = 0; j < d; ++j) x(i, j) = m.values[static_cast<std::size_t>(j)];
  }

  PcaModel model;
  model.mean = x.colwise().mean().transpose();
  x.rowwise() -= model.mean.transpose();
  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::numeric, "covariance eigendecomposition failed");

  model.components.resize(k, d);
  model.variances.resize(k);
  for (int c = 0; c < k; ++c) {
    const Eigen::Index src = d - 1 - c;  // eigenvalues come out ascending
    Eigen::VectorXd v = solver.eigenvectors().col(src);
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    model.components.row(c) = v.transpose();
    model.variances[c] = std::max(0.0, solver.eigenvalues()[src]);
  }
  return model;
}

Eigen::VectorXd pca_project(const PcaModel& model, const FeatureMatrix& features) {
  if (static_cast<Eigen::Index>(features.values.size()) != model.d()) {
    throw Error(ErrorCode::dimension, "feature size " + std::to_string(features.values.size()) +
                                          " does not match PCA input " + std::to_string(model.d()));
  }
  return model.components * (flatten(features) - model.mean);
}

Eigen::VectorXd pca_reconstruct(const PcaModel& model, const Eigen::VectorXd& projection) {
  if (projection.size() != model.k()) throw Error(ErrorCode::dimension, "projection size mismatch");
  return model.components.transpose() * projection + model.mean;
}

int pca_components_for_rate(std::size_t rows, double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) throw Error(ErrorCode::config, "PCA rate must lie in (0, 1]");
  const long kept_rows = std::max(1L, std::lrint(rate * static_cast<double>(rows)));
  return static_cast<int>(2 * kept_rows);
}

FeatureMatrix pca_features(const PcaModel& model, const FeatureMatrix& features) {
  if (model.k() % 2 != 0) throw Error(ErrorCode::dimension, "PCA output must have an even number of components");
  const Eigen::VectorXd p = pca_project(model, features);
  FeatureMatrix out;
  out.repr = features.repr;
  out.rows = static_cast<std::size_t>(p.size() / 2);
  out.values.resize(static_cast<std::size_t>(p.size()));
  for (Eigen::Index i = 0; i < p.size(); ++i) out.values[static_cast<std::size_t>(i)] = static_cast<float>(p[i]);
  return out;
}

}  // namespace wii
