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

#ifndef ENRICH_LOGISTIC_H_
#define ENRICH_LOGISTIC_H_

#include <span>
#include <vector>

#include "enrich/feature_matrix.h"

namespace enrich {

struct LogRegParams {
  double positive_weight = 1.0;
  double negative_weight = 1.0;
  double l2 = 0.0;
  int max_iter = 20000;
  double tol = 1e-6;
};

// Weights act on raw feature values.
struct LogRegModel {
  std::vector<double> weights;
  double intercept = 0.0;
  int iterations = 0;
  bool converged = false;
  // Infinity norm of the objective gradient at the returned solution, taken
  // in the standardized coordinates the optimizer works in.
  double gradient_norm = 0.0;

  double PredictMargin(std::span<const double> row) const;
  std::vector<double> PredictProba(const FeatureMatrix& x) const;
};

// Minimizes the class-weighted mean log-loss plus l2/2 * |w|^2 by gradient
// descent with backtracking line search, stopping once the gradient infinity
// norm drops below tol.
LogRegModel TrainWeightedLogReg(const FeatureMatrix& x, const LogRegParams& params);

}  // namespace enrich

#endif  // ENRICH_LOGISTIC_H_
