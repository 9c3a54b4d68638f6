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

#ifndef ENRICH_AUGMENTATION_H_
#define ENRICH_AUGMENTATION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "enrich/frame.h"

namespace enrich {

// Length-preserving series transforms. Inputs must be null-free; every
// transform returns a series of the input length and uses edge replication
// wherever a window would run off either end.

// 100 * (x[t] - x[t-1]) / x[t-1]; 0 at t = 0 and wherever x[t-1] == 0. When
// `zero_denominator` is non-null it is set if the zero rule fired.
std::vector<double> RelativeChange(std::span<const double> x,
                                   bool* zero_denominator = nullptr);
// x[t - l], with x[0] repeated for t < l. Requires 1 <= l < n.
std::vector<double> Lag(std::span<const double> x, int l);
// Trailing mean over w rows; shorter growing prefix for t < w - 1.
std::vector<double> RollingMean(std::span<const double> x, int w);
std::vector<double> ExpandingMean(std::span<const double> x);
// Centered uniform kernel of odd size c with edge replication.
std::vector<double> Convolve(std::span<const double> x, int c);
// Block average pooling; each index gets its block mean.
std::vector<double> Pool(std::span<const double> x, int p);
// Smooth random offset: `knots` evenly spaced knot offsets drawn uniformly
// from [-max_drift * A, max_drift * A], first knot pinned at 0, joined with
// monotone cubic interpolation. A is max - min of the series (or of
// `amplitude` when given), 1 for constant input.
std::vector<double> Drift(std::span<const double> x, double max_drift,
                          int knots, std::uint64_t seed,
                          std::optional<double> amplitude = std::nullopt);
// Resamples x along a random piecewise-linear time map with `changes`
// interior breakpoints and segment speeds drawn log-uniformly from
// [1/max_ratio, max_ratio]. Endpoints are fixed.
std::vector<double> TimeWarp(std::span<const double> x, double max_ratio,
                             int changes, std::uint64_t seed);

struct ValueRange {
  double min = 0.0;
  double max = 0.0;
};

// Rounds to the nearest of `levels` evenly spaced values spanning the range
// (the series' own range unless one is given); ties go to the lower level.
std::vector<double> Quantize(std::span<const double> x, int levels,
                             std::optional<ValueRange> range = std::nullopt);
std::vector<double> Reverse(std::span<const double> x);
// Adds iid Gaussian noise with standard deviation sigma_rel * std(x), or
// sigma_rel * reference_std when given. std 0 is replaced by 1.
std::vector<double> AddNoise(std::span<const double> x, double sigma_rel,
                             std::uint64_t seed,
                             std::optional<double> reference_std = std::nullopt);

// Additive classical decomposition: trend + seasonal + residual == x.
struct Decomposition {
  std::vector<double> trend;
  std::vector<double> seasonal;
  std::vector<double> residual;
};

// Requires period >= 2 and length >= 2 * period. The trend is a centered
// moving average (2xP weighting for even P) with replicated ends; the
// seasonal profile averages detrended values per phase over the rows where
// the moving average is fully defined, then is centered to sum to zero.
Decomposition Decompose(std::span<const double> x, int period);

enum class Family {
  kRelativeChange,
  kLag,
  kRolling,
  kExpandingMean,
  kConvolve,
  kPool,
  kDrift,
  kTimeWarp,
  kQuantize,
  kReverse,
  kNoise,
  kTrend,
  kSeasonal,
  kResidual,
};

inline constexpr Family kAllFamilies[] = {
    Family::kRelativeChange, Family::kLag,      Family::kRolling,
    Family::kExpandingMean,  Family::kConvolve, Family::kPool,
    Family::kDrift,          Family::kTimeWarp, Family::kQuantize,
    Family::kReverse,        Family::kNoise,    Family::kTrend,
    Family::kSeasonal,       Family::kResidual,
};

// Configuration name: relchg, lag, roll, expanding_mean, cnv, pool, drift, tw,
// quant, rev, noise, trend, seasonal, residual.
std::string_view FamilyName(Family family);
std::optional<Family> ParseFamily(std::string_view name);

struct FamilyParams {
  int lag = 1;
  int window = 5;
  int kernel = 3;
  int pool = 4;
  double drift_max = 0.1;
  int drift_knots = 5;
  double warp_ratio = 2.0;
  int warp_changes = 3;
  int levels = 10;
  double noise_scale = 0.01;
  std::optional<int> period;  // no default; required by trend/seasonal/residual
};

struct FamilySpec {
  Family family = Family::kLag;
  FamilyParams params;
};

struct AugmentationSpec {
  std::vector<FamilySpec> families;
  std::uint64_t seed = 0;
};

// Throws InvalidArgument listing every incomplete or out-of-range parameter.
void Validate(const AugmentationSpec& spec);

// Column prefix for a family: relchg, lag_<l>, roll_<w>, expanding_mean, cnv,
// pool, drift, tw, quant, rev, noise, trend, seasonal, resid.
std::string ColumnPrefix(const FamilySpec& family);

// Per-column statistics used by the stateful families (quantize range, noise
// scale, drift amplitude). Fitted on training rows and reused on test rows.
struct ColumnStats {
  double min = 0.0;
  double max = 0.0;
  double std = 0.0;
};

using AugmentationState = std::map<std::string, ColumnStats>;

AugmentationState FitAugmentationState(const TimeSeriesFrame& frame);

// Appends `<prefix>_<feature>` for every selected family and every source
// column, ordered by family (list order) then source column. Source columns
// and labels are untouched. Uses `state` for stateful families when given,
// otherwise statistics of `ds` itself. Throws on null cells or name
// collisions. Sets metadata "augmentation.relchg_zero_denominator" listing
// the columns where the zero-denominator rule fired.
LabeledDataset AugmentFrame(const LabeledDataset& ds, const AugmentationSpec& spec,
                            const AugmentationState* state = nullptr);

}  // namespace enrich

#endif  // ENRICH_AUGMENTATION_H_
