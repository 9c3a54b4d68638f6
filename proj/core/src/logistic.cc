/*
 * Copyright 2026 The Enrich Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "enrich/logistic.h"

#include <algorithm>
#include <cmath>

#include "enrich/error.h"
#include "enrich/gbdt.h"

namespace enrich {
namespace {

struct Problem {
  const std::vector<double>& z;
  const std::vector<std::uint8_t>& y;
  std::vector<double> w;
  double weight_sum = 0.0;
  std::size_t d = 0;
  double l2 = 0.0;

  // Parameters: d weights followed by the intercept.
  double Objective(const std::vector<double>& theta) const {
    double loss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (w[i] == 0.0) continue;
      loss += WeightedLogLoss(y[i], Margin(theta, i), w[i]);
    }
    double reg = 0.0;
    for (std::size_t j = 0; j < d; ++j) reg += theta[j] * theta[j];
    return loss / weight_sum + 0.5 * l2 * reg;
  }

  std::vector<double> Gradient(const std::vector<double>& theta) const {
    std::vector<double> grad(d + 1, 0.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (w[i] == 0.0) continue;
      const double r = LogLossDerivatives(y[i], Margin(theta, i), w[i]).gradient;
      const double* zi = z.data() + i * d;
      for (std::size_t j = 0; j < d; ++j) grad[j] += r * zi[j];
      grad[d] += r;
    }
    for (std::size_t j = 0; j <= d; ++j) grad[j] /= weight_sum;
    for (std::size_t j = 0; j < d; ++j) grad[j] += l2 * theta[j];
    return grad;
  }

  double Margin(const std::vector<double>& theta, std::size_t i) const {
    const double* zi = z.data() + i * d;
    double m = theta[d];
    for (std::size_t j = 0; j < d; ++j) m += theta[j] * zi[j];
    return m;
  }
};

double InfNorm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double LogRegModel::PredictMargin(std::span<const double> row) const {
  double m = intercept;
  for (std::size_t j = 0; j < weights.size(); ++j) m += weights[j] * row[j];
  return m;
}

std::vector<double> LogRegModel::PredictProba(const FeatureMatrix& x) const {
  if (x.cols() != weights.size()) throw InvalidArgument("feature count mismatch");
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = Sigmoid(PredictMargin(x.row(i)));
  return out;
}

LogRegModel TrainWeightedLogReg(const FeatureMatrix& x, const LogRegParams& params) {
  if (x.rows() == 0) throw InvalidArgument("cannot train on an empty matrix");
  if (!(params.positive_weight >= 0.0 && params.negative_weight >= 0.0)) {
    throw InvalidArgument("class weights must be >= 0");
  }
  if (!(params.l2 >= 0.0)) throw InvalidArgument("l2 must be >= 0");
  if (params.max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  if (!(params.tol > 0.0)) throw InvalidArgument("tol must be > 0");

  const std::vector<double> z = x.Standardized();
  Problem prob{z, x.labels(), {}, 0.0, x.cols(), params.l2};
  prob.w.resize(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    prob.w[i] = x.labels()[i] ? params.positive_weight : params.negative_weight;
    prob.weight_sum += prob.w[i];
  }
  if (prob.weight_sum == 0.0) throw InvalidArgument("all sample weights are zero");

  const std::size_t d = x.cols();
  std::vector<double> theta(d + 1, 0.0);
  double f = prob.Objective(theta);
  std::vector<double> grad = prob.Gradient(theta);
  double step = 1.0;
  LogRegModel model;
  int it = 0;
  for (; it < params.max_iter && InfNorm(grad) >= params.tol; ++it) {
    double g2 = 0.0;
    for (double v : grad) g2 += v * v;
    std::vector<double> next(d + 1);
    double f_next = f;
    step *= 2.0;
    for (int tries = 0; tries < 60; ++tries) {
      for (std::size_t j = 0; j <= d; ++j) next[j] = theta[j] - step * grad[j];
      f_next = prob.Objective(next);
      if (f_next <= f - 0.5 * step * g2) break;
      step *= 0.5;
    }
    if (!(f_next <= f)) break;
    theta = std::move(next);
    f = f_next;
    grad = prob.Gradient(theta);
  }
  model.iterations = it;
  model.gradient_norm = InfNorm(grad);
  model.converged = model.gradient_norm < params.tol;

  // Map back to raw feature coordinates.
  const auto& scale = x.standardization();
  model.weights.resize(d);
  model.intercept = theta[d];
  for (std::size_t j = 0; j < d; ++j) {
    model.weights[j] = theta[j] / scale[j].std;
    model.intercept -= theta[j] * scale[j].mean / scale[j].std;
  }
  return model;
}

}  // namespace enrich
