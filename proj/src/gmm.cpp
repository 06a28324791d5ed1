// gmm.cpp

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

#include "revspeech/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <random>

#include <json.hpp>

#include "revspeech/errors.hpp"
#include "revspeech/format.hpp"

namespace revspeech {

bool GmmModel::operator==(const GmmModel &other) const {
  auto same = [](const auto &a, const auto &b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
  };
  return label == other.label && feature_fingerprint == other.feature_fingerprint &&
         seed == other.seed && same(weights, other.weights) && same(means, other.means) &&
         same(variances, other.variances);
}

void ValidateModel(const GmmModel &model) {
  const Eigen::Index m = model.num_components();
  if (m < 1) throw ModelFormatError("model has no components");
  if (model.dim() < 1) throw ModelFormatError("model dimension must be positive");
  if (model.means.rows() != m || model.variances.rows() != m ||
      model.variances.cols() != model.dim())
    throw ModelFormatError("model parameter shapes disagree");
  if (!model.weights.allFinite() || !model.means.allFinite() || !model.variances.allFinite())
    throw ModelFormatError("model contains non-finite values");
  if (std::abs(model.weights.sum() - 1.0) > 1e-9)
    throw ModelFormatError("mixture weights do not sum to 1");
  if ((model.weights.array() < kWeightFloor).any())
    throw ModelFormatError("mixture weight below floor");
  if ((model.variances.array() < kVarianceFloor).any())
    throw ModelFormatError("variance below floor");
}

double LogComponentDensity(const Eigen::VectorXd &x, const Eigen::VectorXd &mean,
                           const Eigen::VectorXd &variance) {
  if (x.size() != mean.size() || x.size() != variance.size())
    throw ContractError("LogComponentDensity: dimension mismatch");
  const double d = static_cast<double>(x.size());
  const double mahalanobis = ((x - mean).array().square() / variance.array()).sum();
  return -0.5 * (d * std::log(2.0 * std::numbers::pi) + variance.array().log().sum() +
                 mahalanobis);
}

double ComponentDensity(const Eigen::VectorXd &x, const Eigen::VectorXd &mean,
                        const Eigen::VectorXd &variance) {
  return std::exp(LogComponentDensity(x, mean, variance));
}

namespace {

// T x M matrix of log w_i + log g(x_t | i).
Eigen::MatrixXd WeightedLogDensities(const GmmModel &model, const Eigen::MatrixXd &frames) {
  if (frames.cols() != model.dim())
    throw ContractError("feature dimension " + std::to_string(frames.cols()) +
                        " does not match model dimension " + std::to_string(model.dim()));
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  const Eigen::Index m = model.num_components();
  Eigen::MatrixXd out(frames.rows(), m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::RowVectorXd mean = model.means.row(i);
    const Eigen::RowVectorXd inv_var = model.variances.row(i).cwiseInverse();
    const double log_norm = -0.5 * (static_cast<double>(model.dim()) * log_2pi +
                                    model.variances.row(i).array().log().sum());
    out.col(i) =
        ((frames.rowwise() - mean).array().square().rowwise() * inv_var.array())
                .rowwise()
                .sum()
                .matrix() *
            -0.5 +
        Eigen::VectorXd::Constant(frames.rows(), log_norm + std::log(model.weights(i)));
  }
  return out;
}

Eigen::VectorXd RowLogSumExp(const Eigen::MatrixXd &a) {
  const Eigen::VectorXd peak = a.rowwise().maxCoeff();
  return peak + (a.colwise() - peak).array().exp().rowwise().sum().log().matrix();
}

}  // namespace

Eigen::VectorXd FrameLogLikelihoods(const GmmModel &model, const Eigen::MatrixXd &frames) {
  return RowLogSumExp(WeightedLogDensities(model, frames));
}

double LogLikelihood(const GmmModel &model, const Eigen::MatrixXd &frames) {
  return FrameLogLikelihoods(model, frames).sum();
}

double LogLikelihood(const GmmModel &model, const FeatureMatrix &features) {
  return LogLikelihood(model, features.rows);
}

Eigen::MatrixXd Responsibilities(const GmmModel &model, const Eigen::MatrixXd &frames) {
  const Eigen::MatrixXd a = WeightedLogDensities(model, frames);
  const Eigen::VectorXd lse = RowLogSumExp(a);
  return (a.colwise() - lse).array().exp().matrix();
}

namespace {

// Platform-independent uniform draw in [0, 1).
double Uniform(std::mt19937_64 &rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Eigen::Index NearestCenter(const Eigen::RowVectorXd &x, const Eigen::MatrixXd &centers,
                           Eigen::Index num_centers, double *dist2 = nullptr) {
  Eigen::Index best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Eigen::Index c = 0; c < num_centers; ++c) {
    const double d = (x - centers.row(c)).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist2) *dist2 = best_d;
  return best;
}

Eigen::MatrixXd KMeansPlusPlusSeeds(const Eigen::MatrixXd &x, Eigen::Index k,
                                    std::mt19937_64 &rng) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd centers(k, x.cols());
  auto pick_uniform = [&] {
    return std::min<Eigen::Index>(static_cast<Eigen::Index>(Uniform(rng) * n), n - 1);
  };
  centers.row(0) = x.row(pick_uniform());
  Eigen::VectorXd d2(n);
  for (Eigen::Index c = 1; c < k; ++c) {
    for (Eigen::Index t = 0; t < n; ++t) NearestCenter(x.row(t), centers, c, &d2(t));
    const double total = d2.sum();
    Eigen::Index chosen = n - 1;
    if (total > 0.0) {
      const double target = Uniform(rng) * total;
      double run = 0.0;
      for (Eigen::Index t = 0; t < n; ++t) {
        run += d2(t);
        if (run > target) {
          chosen = t;
          break;
        }
      }
    } else {
      chosen = pick_uniform();
    }
    centers.row(c) = x.row(chosen);
  }
  return centers;
}

void FloorAndNormalizeWeights(Eigen::VectorXd &w) {
  w = w.cwiseMax(kWeightFloor);
  w /= w.sum();
  w = w.cwiseMax(kWeightFloor);
}

GmmModel InitialModel(const Eigen::MatrixXd &x, Eigen::Index k, std::mt19937_64 &rng) {
  const Eigen::Index n = x.rows(), d = x.cols();
  Eigen::MatrixXd centers = KMeansPlusPlusSeeds(x, k, rng);

  std::vector<Eigen::Index> assign(static_cast<std::size_t>(n), -1);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (Eigen::Index t = 0; t < n; ++t) {
      const Eigen::Index c = NearestCenter(x.row(t), centers, k);
      if (assign[static_cast<std::size_t>(t)] != c) {
        assign[static_cast<std::size_t>(t)] = c;
        changed = true;
      }
    }
    if (!changed) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, d);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    for (Eigen::Index t = 0; t < n; ++t) {
      sums.row(assign[static_cast<std::size_t>(t)]) += x.row(t);
      counts(assign[static_cast<std::size_t>(t)]) += 1.0;
    }
    for (Eigen::Index c = 0; c < k; ++c)
      if (counts(c) > 0.0) centers.row(c) = sums.row(c) / counts(c);
  }

  const Eigen::RowVectorXd global_mean = x.colwise().mean();
  const Eigen::RowVectorXd global_var =
      (x.rowwise() - global_mean).array().square().colwise().mean().matrix();

  GmmModel model;
  model.weights = Eigen::VectorXd::Zero(k);
  model.means = centers;
  model.variances = Eigen::MatrixXd::Zero(k, d);
  for (Eigen::Index t = 0; t < n; ++t) {
    const Eigen::Index c = assign[static_cast<std::size_t>(t)];
    model.weights(c) += 1.0;
    model.variances.row(c) += (x.row(t) - centers.row(c)).array().square().matrix();
  }
  for (Eigen::Index c = 0; c < k; ++c) {
    if (model.weights(c) >= 2.0)
      model.variances.row(c) /= model.weights(c);
    else
      model.variances.row(c) = global_var;
  }
  model.variances = model.variances.cwiseMax(kVarianceFloor);
  model.weights /= static_cast<double>(n);
  FloorAndNormalizeWeights(model.weights);
  return model;
}

}  // namespace

TrainingResult Train(const Eigen::MatrixXd &frames, const TrainingOptions &options) {
  const Eigen::Index k = options.num_components;
  if (k < 1) throw ConfigError("gmm.num_components must be >= 1");
  if (options.max_iter < 1) throw ConfigError("gmm.max_iter must be >= 1");
  if (!(options.tol >= 0.0)) throw ConfigError("gmm.tol must be >= 0");
  if (frames.rows() < 2 * k)
    throw InsufficientDataError("training needs at least " + std::to_string(2 * k) +
                                " frames, got " + std::to_string(frames.rows()));
  if (frames.cols() < 1) throw ContractError("training frames have zero dimension");
  if (!frames.allFinite()) throw ContractError("training frames contain non-finite values");

  std::mt19937_64 rng(options.seed);
  TrainingResult result;
  GmmModel &model = result.model;
  model = InitialModel(frames, k, rng);
  model.seed = options.seed;
  result.report.seed = options.seed;

  const double n = static_cast<double>(frames.rows());
  for (int iter = 0;; ++iter) {
    // E-step.
    const Eigen::MatrixXd a = WeightedLogDensities(model, frames);
    const Eigen::VectorXd lse = RowLogSumExp(a);
    const double ll = lse.sum();
    auto &trace = result.report.log_likelihood_trace;
    trace.push_back(ll);
    if (trace.size() >= 2 && std::abs(ll - trace[trace.size() - 2]) < options.tol * std::abs(ll)) {
      result.report.converged = true;
      break;
    }
    if (iter == options.max_iter) break;
    const Eigen::MatrixXd resp = (a.colwise() - lse).array().exp().matrix();

    // M-step.
    const Eigen::VectorXd occupancy = resp.colwise().sum().transpose();
    for (Eigen::Index i = 0; i < k; ++i) {
      if (occupancy(i) <= 1e-300) continue;
      const Eigen::RowVectorXd mean = (resp.col(i).transpose() * frames) / occupancy(i);
      const Eigen::RowVectorXd var =
          (resp.col(i).transpose() * (frames.rowwise() - mean).array().square().matrix()) /
          occupancy(i);
      model.means.row(i) = mean;
      model.variances.row(i) = var.cwiseMax(kVarianceFloor);
    }
    model.weights = occupancy / n;
    FloorAndNormalizeWeights(model.weights);
    result.report.iterations = iter + 1;
  }
  ValidateModel(model);
  return result;
}

TrainingResult Train(const FeatureMatrix &features, const std::string &label,
                     const TrainingOptions &options) {
  TrainingResult result = Train(features.rows, options);
  result.model.label = label;
  result.model.feature_fingerprint = features.fingerprint;
  return result;
}

namespace {

void AppendRow(std::string &out, const auto &row) {
  out += "[";
  for (Eigen::Index j = 0; j < row.size(); ++j) {
    if (j) out += ", ";
    out += FormatDouble(row(j));
  }
  out += "]";
}

Eigen::MatrixXd MatrixFromJson(const nlohmann::json &rows, Eigen::Index m, Eigen::Index d,
                               const char *what) {
  if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != m)
    throw ModelFormatError(std::string(what) + ": expected " + std::to_string(m) + " rows");
  Eigen::MatrixXd out(m, d);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto &row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d)
      throw ModelFormatError(std::string(what) + ": row length does not match dim");
    for (Eigen::Index j = 0; j < d; ++j) out(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return out;
}

}  // namespace

std::string SerializeModel(const GmmModel &model) {
  ValidateModel(model);
  std::string out = "{\n";
  out += "  \"version\": \"" + std::string(kGmmFormatVersion) + "\",\n";
  out += "  \"label\": " + nlohmann::json(model.label).dump() + ",\n";
  out += "  \"dim\": " + std::to_string(model.dim()) + ",\n";
  out += "  \"num_components\": " + std::to_string(model.num_components()) + ",\n";
  out += "  \"feature_fingerprint\": " + nlohmann::json(model.feature_fingerprint).dump() + ",\n";
  out += "  \"init\": {\"algorithm\": \"" + std::string(kGmmInitAlgorithm) +
         "\", \"seed\": " + std::to_string(model.seed) + "},\n";
  out += "  \"weights\": ";
  AppendRow(out, model.weights);
  out += ",\n  \"means\": [\n";
  for (Eigen::Index i = 0; i < model.num_components(); ++i) {
    out += "    ";
    AppendRow(out, model.means.row(i));
    out += i + 1 < model.num_components() ? ",\n" : "\n";
  }
  out += "  ],\n  \"variances\": [\n";
  for (Eigen::Index i = 0; i < model.num_components(); ++i) {
    out += "    ";
    AppendRow(out, model.variances.row(i));
    out += i + 1 < model.num_components() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

GmmModel ParseModel(const std::string &text) {
  GmmModel model;
  try {
    const auto doc = nlohmann::json::parse(text);
    const auto version = doc.at("version").get<std::string>();
    if (version != kGmmFormatVersion)
      throw ModelFormatError("unsupported model version '" + version + "'");
    const auto algorithm = doc.at("init").at("algorithm").get<std::string>();
    if (algorithm != kGmmInitAlgorithm)
      throw ModelFormatError("unknown initialization algorithm '" + algorithm + "'");
    model.label = doc.at("label").get<std::string>();
    model.feature_fingerprint = doc.at("feature_fingerprint").get<std::string>();
    model.seed = doc.at("init").at("seed").get<std::uint64_t>();
    const auto d = doc.at("dim").get<Eigen::Index>();
    const auto m = doc.at("num_components").get<Eigen::Index>();
    if (d < 1 || m < 1) throw ModelFormatError("dim and num_components must be positive");
    const auto weights = doc.at("weights").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(weights.size()) != m)
      throw ModelFormatError("weights: expected " + std::to_string(m) + " entries");
    model.weights = Eigen::Map<const Eigen::VectorXd>(weights.data(), m);
    model.means = MatrixFromJson(doc.at("means"), m, d, "means");
    model.variances = MatrixFromJson(doc.at("variances"), m, d, "variances");
  } catch (const nlohmann::json::exception &e) {
    throw ModelFormatError(std::string("malformed model document: ") + e.what());
  }
  ValidateModel(model);
  return model;
}

void SaveModel(const GmmModel &model, const std::filesystem::path &path) {
  const std::string text = SerializeModel(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

GmmModel LoadModel(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return ParseModel(text);
}

}  // namespace revspeech
