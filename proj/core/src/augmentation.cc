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

#include "enrich/augmentation.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "enrich/error.h"
#include "enrich/random.h"

namespace enrich {
namespace {

void RequireLength(std::span<const double> x, const char* op) {
  if (x.empty()) throw InvalidArgument(std::string(op) + ": empty series");
}

double PopulationStd(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

// Fritsch-Carlson slopes for a monotone piecewise cubic Hermite interpolant.
std::vector<double> MonotoneSlopes(std::span<const double> xs,
                                   std::span<const double> ys) {
  const std::size_t m = xs.size();
  std::vector<double> h(m - 1), delta(m - 1), slope(m, 0.0);
  for (std::size_t k = 0; k + 1 < m; ++k) {
    h[k] = xs[k + 1] - xs[k];
    delta[k] = h[k] > 0.0 ? (ys[k + 1] - ys[k]) / h[k] : 0.0;
  }
  slope[0] = delta[0];
  slope[m - 1] = delta[m - 2];
  for (std::size_t k = 1; k + 1 < m; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) continue;
    const double w1 = 2.0 * h[k] + h[k - 1];
    const double w2 = h[k] + 2.0 * h[k - 1];
    slope[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
  }
  return slope;
}

double HermiteAt(double t, std::span<const double> xs, std::span<const double> ys,
                 std::span<const double> slope) {
  std::size_t k = 0;
  while (k + 2 < xs.size() && t > xs[k + 1]) ++k;
  const double h = xs[k + 1] - xs[k];
  if (h <= 0.0) return ys[k];
  const double s = std::clamp((t - xs[k]) / h, 0.0, 1.0);
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * ys[k] + h10 * h * slope[k] + h01 * ys[k + 1] + h11 * h * slope[k + 1];
}

ColumnStats StatsOf(std::span<const double> x) {
  ColumnStats s;
  if (x.empty()) return s;
  auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  s.min = *lo;
  s.max = *hi;
  s.std = PopulationStd(x);
  return s;
}

}  // namespace

std::vector<double> RelativeChange(std::span<const double> x, bool* zero_denominator) {
  RequireLength(x, "relative_change");
  std::vector<double> out(x.size(), 0.0);
  bool fired = false;
  for (std::size_t t = 1; t < x.size(); ++t) {
    if (x[t - 1] == 0.0) {
      fired = true;
      continue;
    }
    out[t] = 100.0 * (x[t] - x[t - 1]) / x[t - 1];
  }
  if (zero_denominator) *zero_denominator = fired;
  return out;
}

std::vector<double> Lag(std::span<const double> x, int l) {
  RequireLength(x, "lag");
  if (l < 1 || static_cast<std::size_t>(l) >= x.size()) {
    throw InvalidArgument("lag requires 1 <= l < length (l=" + std::to_string(l) +
                          ", length=" + std::to_string(x.size()) + ")");
  }
  const auto shift = static_cast<std::size_t>(l);
  std::vector<double> out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) out[t] = t >= shift ? x[t - shift] : x[0];
  return out;
}

std::vector<double> RollingMean(std::span<const double> x, int w) {
  RequireLength(x, "rolling_mean");
  if (w < 1 || static_cast<std::size_t>(w) > x.size()) {
    throw InvalidArgument("rolling mean requires 1 <= w <= length");
  }
  const auto width = static_cast<std::size_t>(w);
  std::vector<double> out(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    const std::size_t lo = t + 1 >= width ? t + 1 - width : 0;
    double sum = 0.0;
    for (std::size_t i = lo; i <= t; ++i) sum += x[i];
    out[t] = sum / static_cast<double>(t - lo + 1);
  }
  return out;
}

std::vector<double> ExpandingMean(std::span<const double> x) {
  RequireLength(x, "expanding_mean");
  std::vector<double> out(x.size());
  double sum = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    sum += x[t];
    out[t] = sum / static_cast<double>(t + 1);
  }
  return out;
}

std::vector<double> Convolve(std::span<const double> x, int c) {
  RequireLength(x, "convolve");
  if (c < 1 || c % 2 == 0) throw InvalidArgument("convolution kernel size must be odd and >= 1");
  if (static_cast<std::size_t>(c) > x.size()) {
    throw InvalidArgument("convolution kernel larger than the series");
  }
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  const std::ptrdiff_t half = (c - 1) / 2;
  std::vector<double> out(x.size());
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    double sum = 0.0;
    for (std::ptrdiff_t j = -half; j <= half; ++j) {
      sum += x[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(t + j, 0, n - 1))];
    }
    out[static_cast<std::size_t>(t)] = sum / static_cast<double>(c);
  }
  return out;
}

std::vector<double> Pool(std::span<const double> x, int p) {
  RequireLength(x, "pool");
  if (p < 1) throw InvalidArgument("pool size must be >= 1");
  const auto size = static_cast<std::size_t>(p);
  std::vector<double> out(x.size());
  for (std::size_t lo = 0; lo < x.size(); lo += size) {
    const std::size_t hi = std::min(x.size(), lo + size);
    double sum = 0.0;
    for (std::size_t i = lo; i < hi; ++i) sum += x[i];
    const double mean = sum / static_cast<double>(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) out[i] = mean;
  }
  return out;
}

std::vector<double> Drift(std::span<const double> x, double max_drift, int knots,
                          std::uint64_t seed, std::optional<double> amplitude) {
  RequireLength(x, "drift");
  if (knots < 2) throw InvalidArgument("drift requires at least 2 knots");
  if (!(max_drift >= 0.0)) throw InvalidArgument("drift magnitude must be >= 0");
  std::vector<double> out(x.begin(), x.end());
  if (max_drift == 0.0 || x.size() == 1) return out;
  double a = amplitude.value_or(0.0);
  if (!amplitude) {
    auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    a = *hi - *lo;
  }
  if (!(a > 0.0)) a = 1.0;
  const double bound = max_drift * a;

  const auto m = static_cast<std::size_t>(knots);
  const double span_len = static_cast<double>(x.size() - 1);
  std::vector<double> xs(m), ys(m, 0.0);
  Rng rng(seed);
  for (std::size_t k = 0; k < m; ++k) {
    xs[k] = span_len * static_cast<double>(k) / static_cast<double>(m - 1);
    if (k > 0) ys[k] = rng.Uniform(-bound, bound);
  }
  const auto slope = MonotoneSlopes(xs, ys);
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double offset = HermiteAt(static_cast<double>(t), xs, ys, slope);
    out[t] += std::clamp(offset, -bound, bound);
  }
  return out;
}

std::vector<double> TimeWarp(std::span<const double> x, double max_ratio, int changes,
                             std::uint64_t seed) {
  RequireLength(x, "time_warp");
  if (!(max_ratio >= 1.0)) throw InvalidArgument("time warp ratio must be >= 1");
  if (changes < 0) throw InvalidArgument("time warp changes must be >= 0");
  std::vector<double> out(x.begin(), x.end());
  if (changes == 0 || max_ratio == 1.0 || x.size() <= 2) return out;

  const double end = static_cast<double>(x.size() - 1);
  const auto segments = static_cast<std::size_t>(changes) + 1;
  std::vector<double> knots(segments + 1), warped(segments + 1, 0.0);
  const double log_ratio = std::log(max_ratio);
  Rng rng(seed);
  for (std::size_t i = 0; i <= segments; ++i) {
    knots[i] = end * static_cast<double>(i) / static_cast<double>(segments);
  }
  for (std::size_t i = 0; i < segments; ++i) {
    const double speed = std::exp(rng.Uniform(-log_ratio, log_ratio));
    warped[i + 1] = warped[i] + speed * (knots[i + 1] - knots[i]);
  }
  const double scale = end / warped[segments];
  for (auto& w : warped) w *= scale;
  warped[segments] = end;

  std::size_t seg = 0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double tt = static_cast<double>(t);
    while (seg + 1 < segments && tt > knots[seg + 1]) ++seg;
    double tau;
    if (t == 0) {
      tau = 0.0;
    } else if (t + 1 == x.size()) {
      tau = end;
    } else {
      const double frac = (tt - knots[seg]) / (knots[seg + 1] - knots[seg]);
      tau = std::clamp(warped[seg] + frac * (warped[seg + 1] - warped[seg]), 0.0, end);
    }
    const auto i0 = static_cast<std::size_t>(std::floor(tau));
    const std::size_t i1 = std::min(i0 + 1, x.size() - 1);
    const double w = tau - static_cast<double>(i0);
    out[t] = w == 0.0 ? x[i0] : x[i0] + w * (x[i1] - x[i0]);
  }
  return out;
}

std::vector<double> Quantize(std::span<const double> x, int levels,
                             std::optional<ValueRange> range) {
  RequireLength(x, "quantize");
  if (levels < 2) throw InvalidArgument("quantize requires at least 2 levels");
  ValueRange r;
  if (range) {
    r = *range;
  } else {
    auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    r = {*lo, *hi};
  }
  std::vector<double> out(x.begin(), x.end());
  if (!(r.max > r.min)) return out;
  const auto q = static_cast<std::size_t>(levels);
  const double step = (r.max - r.min) / static_cast<double>(q - 1);
  for (auto& v : out) {
    const double pos = std::clamp((v - r.min) / step, 0.0, static_cast<double>(q - 1));
    auto j = static_cast<std::size_t>(std::floor(pos));
    if (pos - static_cast<double>(j) > 0.5) ++j;
    j = std::min(j, q - 1);
    v = j == q - 1 ? r.max : r.min + static_cast<double>(j) * step;
  }
  return out;
}

std::vector<double> Reverse(std::span<const double> x) {
  return std::vector<double>(x.rbegin(), x.rend());
}

std::vector<double> AddNoise(std::span<const double> x, double sigma_rel,
                             std::uint64_t seed, std::optional<double> reference_std) {
  RequireLength(x, "add_noise");
  if (!(sigma_rel >= 0.0)) throw InvalidArgument("noise scale must be >= 0");
  std::vector<double> out(x.begin(), x.end());
  if (sigma_rel == 0.0) return out;
  double sd = reference_std.value_or(PopulationStd(x));
  if (!(sd > 0.0)) sd = 1.0;
  Rng rng(seed);
  for (auto& v : out) v += sigma_rel * sd * rng.Normal();
  return out;
}

std::string_view FamilyName(Family family) {
  switch (family) {
    case Family::kRelativeChange: return "relchg";
    case Family::kLag: return "lag";
    case Family::kRolling: return "roll";
    case Family::kExpandingMean: return "expanding_mean";
    case Family::kConvolve: return "cnv";
    case Family::kPool: return "pool";
    case Family::kDrift: return "drift";
    case Family::kTimeWarp: return "tw";
    case Family::kQuantize: return "quant";
    case Family::kReverse: return "rev";
    case Family::kNoise: return "noise";
    case Family::kTrend: return "trend";
    case Family::kSeasonal: return "seasonal";
    case Family::kResidual: return "residual";
  }
  return "unknown";
}

std::optional<Family> ParseFamily(std::string_view name) {
  for (Family f : kAllFamilies) {
    if (FamilyName(f) == name) return f;
  }
  return std::nullopt;
}

void Validate(const AugmentationSpec& spec) {
  std::vector<std::string> problems;
  auto check = [&](bool ok, const FamilySpec& f, const char* what) {
    if (!ok) problems.push_back(std::string(FamilyName(f.family)) + ": " + what);
  };
  for (const auto& f : spec.families) {
    const auto& p = f.params;
    switch (f.family) {
      case Family::kLag: check(p.lag >= 1, f, "lag must be >= 1"); break;
      case Family::kRolling: check(p.window >= 1, f, "window must be >= 1"); break;
      case Family::kConvolve:
        check(p.kernel >= 1 && p.kernel % 2 == 1, f, "kernel must be odd and >= 1");
        break;
      case Family::kPool: check(p.pool >= 1, f, "pool must be >= 1"); break;
      case Family::kDrift:
        check(p.drift_max >= 0.0, f, "drift_max must be >= 0");
        check(p.drift_knots >= 2, f, "drift_knots must be >= 2");
        break;
      case Family::kTimeWarp:
        check(p.warp_ratio >= 1.0, f, "warp_ratio must be >= 1");
        check(p.warp_changes >= 0, f, "warp_changes must be >= 0");
        break;
      case Family::kQuantize: check(p.levels >= 2, f, "levels must be >= 2"); break;
      case Family::kNoise: check(p.noise_scale >= 0.0, f, "noise_scale must be >= 0"); break;
      case Family::kTrend:
      case Family::kSeasonal:
      case Family::kResidual:
        check(p.period.has_value(), f, "period is required");
        check(!p.period || *p.period >= 2, f, "period must be >= 2");
        break;
      default: break;
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid augmentation spec:";
    for (const auto& p : problems) msg += " " + p + ";";
    throw InvalidArgument(msg);
  }
}

std::string ColumnPrefix(const FamilySpec& family) {
  switch (family.family) {
    case Family::kLag: return "lag_" + std::to_string(family.params.lag);
    case Family::kRolling: return "roll_" + std::to_string(family.params.window);
    case Family::kResidual: return "resid";
    default: return std::string(FamilyName(family.family));
  }
}

AugmentationState FitAugmentationState(const TimeSeriesFrame& frame) {
  AugmentationState state;
  for (const auto& c : frame.columns()) state[c.name] = StatsOf(c.values);
  return state;
}

LabeledDataset AugmentFrame(const LabeledDataset& ds, const AugmentationSpec& spec,
                            const AugmentationState* state) {
  Validate(spec);
  const auto& frame = ds.frame();
  if (spec.families.empty()) return ds;
  for (const auto& c : frame.columns()) {
    for (std::size_t r = 0; r < c.values.size(); ++r) {
      if (IsNull(c.values[r])) {
        throw InvalidArgument("augmentation input has a null at row " + std::to_string(r) +
                              ", column '" + c.name + "'; impute first");
      }
    }
  }
  std::set<std::string> names;
  for (const auto& c : frame.columns()) names.insert(c.name);

  std::vector<Column> added;
  std::vector<std::string> zero_denominator;
  for (std::size_t fi = 0; fi < spec.families.size(); ++fi) {
    const FamilySpec& fam = spec.families[fi];
    const auto& p = fam.params;
    const std::string prefix = ColumnPrefix(fam);
    const std::uint64_t family_seed = DeriveSeed(spec.seed, fi);
    for (std::size_t ci = 0; ci < frame.num_columns(); ++ci) {
      const Column& src = frame.column(ci);
      std::span<const double> x = src.values;
      ColumnStats stats;
      if (state && state->count(src.name)) {
        stats = state->at(src.name);
      } else {
        stats = StatsOf(x);
      }
      const std::uint64_t seed = DeriveSeed(family_seed, ci);
      Column col{prefix + "_" + src.name, {}};
      if (!names.insert(col.name).second) {
        throw InvalidArgument("augmented column name collision: '" + col.name + "'");
      }
      switch (fam.family) {
        case Family::kRelativeChange: {
          bool fired = false;
          col.values = RelativeChange(x, &fired);
          if (fired) zero_denominator.push_back(src.name);
          break;
        }
        case Family::kLag: col.values = Lag(x, p.lag); break;
        case Family::kRolling: col.values = RollingMean(x, p.window); break;
        case Family::kExpandingMean: col.values = ExpandingMean(x); break;
        case Family::kConvolve: col.values = Convolve(x, p.kernel); break;
        case Family::kPool: col.values = Pool(x, p.pool); break;
        case Family::kDrift:
          col.values = Drift(x, p.drift_max, p.drift_knots, seed, stats.max - stats.min);
          break;
        case Family::kTimeWarp:
          col.values = TimeWarp(x, p.warp_ratio, p.warp_changes, seed);
          break;
        case Family::kQuantize:
          col.values = Quantize(x, p.levels, ValueRange{stats.min, stats.max});
          break;
        case Family::kReverse: col.values = Reverse(x); break;
        case Family::kNoise: col.values = AddNoise(x, p.noise_scale, seed, stats.std); break;
        case Family::kTrend: col.values = Decompose(x, *p.period).trend; break;
        case Family::kSeasonal: col.values = Decompose(x, *p.period).seasonal; break;
        case Family::kResidual: col.values = Decompose(x, *p.period).residual; break;
      }
      added.push_back(std::move(col));
    }
  }
  LabeledDataset out = ds.WithFrame(frame.AddColumns(std::move(added)));
  if (!zero_denominator.empty()) {
    std::string joined;
    for (const auto& n : zero_denominator) joined += (joined.empty() ? "" : ",") + n;
    out.SetMetadata("augmentation.relchg_zero_denominator", joined);
  }
  return out;
}

}  // namespace enrich
