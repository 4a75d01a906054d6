#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "wii/features.hpp"

namespace wii {

// Principal subspace of flattened L x 2 feature matrices (d = 2L).
struct PcaModel {
  Eigen::VectorXd mean;        // d
  Eigen::MatrixXd components;  // k x d, orthonormal rows
  Eigen::VectorXd variances;   // k eigenvalues, non-increasing

  Eigen::Index k() const { return components.rows(); }
  Eigen::Index d() const { return components.cols(); }
};

// Top-k eigenvectors of the sample covariance; each component's
// largest-magnitude coordinate is made positive.
PcaModel pca_fit(std::span<const FeatureMatrix> train, int k);

Eigen::VectorXd pca_project(const PcaModel& model, const FeatureMatrix& features);
Eigen::VectorXd pca_reconstruct(const PcaModel& model, const Eigen::VectorXd& projection);

// Components kept for a compression rate over L-row inputs. Counted in rows
// like subsampling so the projection reshapes to round(rate * L) x 2.
int pca_components_for_rate(std::size_t rows, double rate);

// Projection laid out as a (k/2) x 2 matrix for the CNN input.
FeatureMatrix pca_features(const PcaModel& model, const FeatureMatrix& features);

}  // namespace wii
