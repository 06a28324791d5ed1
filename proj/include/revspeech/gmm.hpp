// revspeech/gmm.hpp

// Copyright 2026  The revspeech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "revspeech/features.hpp"

namespace revspeech {

constexpr double kVarianceFloor = 1e-6;
constexpr double kWeightFloor = 1e-8;
constexpr const char *kGmmFormatVersion = "gmm-v1";
constexpr const char *kGmmInitAlgorithm = "kmeans++/mt19937_64";

/// Diagonal-covariance Gaussian mixture bound to one feature front end.
struct GmmModel {
  std::string label;
  Eigen::VectorXd weights;    // M
  Eigen::MatrixXd means;      // M x D
  Eigen::MatrixXd variances;  // M x D
  std::string feature_fingerprint;
  std::uint64_t seed = 0;

  Eigen::Index num_components() const { return weights.size(); }
  Eigen::Index dim() const { return means.cols(); }

  bool operator==(const GmmModel &other) const;
};

/// Throws ModelFormatError when shapes, weights or variances break the model
/// invariants.
void ValidateModel(const GmmModel &model);

struct TrainingReport {
  int iterations = 0;
  std::vector<double> log_likelihood_trace;
  bool converged = false;
  std::uint64_t seed = 0;
};

struct TrainingOptions {
  int num_components = 4;
  std::uint64_t seed = 0;
  int max_iter = 200;
  double tol = 1e-5;
};

/// log g(x | mean, diag(variance)).
double LogComponentDensity(const Eigen::VectorXd &x, const Eigen::VectorXd &mean,
                           const Eigen::VectorXd &variance);

double ComponentDensity(const Eigen::VectorXd &x, const Eigen::VectorXd &mean,
                        const Eigen::VectorXd &variance);

/// Per-frame log p(x_t | model), num_frames entries.
Eigen::VectorXd FrameLogLikelihoods(const GmmModel &model, const Eigen::MatrixXd &frames);

/// Sum over frames of log p(x_t | model).
double LogLikelihood(const GmmModel &model, const FeatureMatrix &features);
double LogLikelihood(const GmmModel &model, const Eigen::MatrixXd &frames);

/// Component posteriors, num_frames x M; every row sums to one.
Eigen::MatrixXd Responsibilities(const GmmModel &model, const Eigen::MatrixXd &frames);

struct TrainingResult {
  GmmModel model;
  TrainingReport report;
};

/// k-means++ seeded EM. Throws InsufficientDataError when there are fewer
/// than 2 * num_components frames.
TrainingResult Train(const Eigen::MatrixXd &frames, const TrainingOptions &options);
TrainingResult Train(const FeatureMatrix &features, const std::string &label,
                     const TrainingOptions &options);

std::string SerializeModel(const GmmModel &model);
GmmModel ParseModel(const std::string &text);

void SaveModel(const GmmModel &model, const std::filesystem::path &path);
GmmModel LoadModel(const std::filesystem::path &path);

}  // namespace revspeech
