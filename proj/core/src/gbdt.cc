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

#include "enrich/gbdt.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "enrich/error.h"
#include "enrich/random.h"

namespace enrich {
namespace {

constexpr int kModelFormatVersion = 1;
constexpr double kMinSplitGain = 1e-12;
constexpr double kPrevalenceClamp = 1e-6;

double Softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double LeafWeight(double g, double h, const GbdtParams& p) {
  const double denom = h + p.lambda;
  if (denom <= 0.0) return 0.0;
  const double shrunk = std::max(0.0, std::abs(g) - p.alpha);
  return g > 0.0 ? -shrunk / denom : shrunk / denom;
}

double Score(double g, double h, double lambda) {
  const double denom = h + lambda;
  return denom > 0.0 ? g * g / denom : 0.0;
}

nlohmann::json NodeToJson(const Tree& tree, int id) {
  const TreeNode& node = tree.nodes[static_cast<std::size_t>(id)];
  nlohmann::json j;
  if (node.is_leaf()) {
    j["leaf"] = node.weight;
    j["cover"] = node.cover;
    return j;
  }
  j["feature"] = node.feature;
  j["threshold"] = node.threshold;
  j["cover"] = node.cover;
  j["gain"] = node.gain;
  j["left"] = NodeToJson(tree, node.left);
  j["right"] = NodeToJson(tree, node.right);
  return j;
}

int NodeFromJson(const nlohmann::json& j, Tree& tree) {
  const int id = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  TreeNode node;
  node.cover = j.at("cover").get<double>();
  if (j.contains("leaf")) {
    node.weight = j.at("leaf").get<double>();
  } else {
    node.feature = j.at("feature").get<int>();
    node.threshold = j.at("threshold").get<double>();
    node.gain = j.value("gain", 0.0);
    node.left = NodeFromJson(j.at("left"), tree);
    node.right = NodeFromJson(j.at("right"), tree);
  }
  tree.nodes[static_cast<std::size_t>(id)] = node;
  return id;
}

}  // namespace

void GbdtParams::Validate() const {
  std::vector<std::string> problems;
  if (n_rounds < 1) problems.push_back("n_rounds must be >= 1");
  if (max_depth < 1) problems.push_back("max_depth must be >= 1");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) problems.push_back("learning_rate must lie in (0, 1]");
  if (!(lambda >= 0.0)) problems.push_back("lambda must be >= 0");
  if (!(alpha >= 0.0)) problems.push_back("alpha must be >= 0");
  if (!(subsample > 0.0 && subsample <= 1.0)) problems.push_back("subsample must lie in (0, 1]");
  if (!(scale_pos_weight > 0.0)) problems.push_back("scale_pos_weight must be > 0");
  if (!(min_child_hessian >= 0.0)) problems.push_back("min_child_hessian must be >= 0");
  if (problems.empty()) return;
  std::string msg = "invalid GBDT parameters: ";
  for (std::size_t i = 0; i < problems.size(); ++i) msg += (i ? "; " : "") + problems[i];
  throw InvalidArgument(msg);
}

nlohmann::json GbdtParams::ToJson() const {
  return {{"n_rounds", n_rounds},
          {"max_depth", max_depth},
          {"learning_rate", learning_rate},
          {"lambda", lambda},
          {"alpha", alpha},
          {"subsample", subsample},
          {"scale_pos_weight", scale_pos_weight},
          {"min_child_hessian", min_child_hessian},
          {"seed", seed}};
}

GbdtParams GbdtParams::FromJson(const nlohmann::json& j) {
  GbdtParams p;
  p.n_rounds = j.value("n_rounds", p.n_rounds);
  p.max_depth = j.value("max_depth", p.max_depth);
  p.learning_rate = j.value("learning_rate", p.learning_rate);
  p.lambda = j.value("lambda", p.lambda);
  p.alpha = j.value("alpha", p.alpha);
  p.subsample = j.value("subsample", p.subsample);
  p.scale_pos_weight = j.value("scale_pos_weight", p.scale_pos_weight);
  p.min_child_hessian = j.value("min_child_hessian", p.min_child_hessian);
  p.seed = j.value("seed", p.seed);
  return p;
}

bool operator==(const GbdtParams& a, const GbdtParams& b) {
  return a.n_rounds == b.n_rounds && a.max_depth == b.max_depth &&
         a.learning_rate == b.learning_rate && a.lambda == b.lambda && a.alpha == b.alpha &&
         a.subsample == b.subsample && a.scale_pos_weight == b.scale_pos_weight &&
         a.min_child_hessian == b.min_child_hessian && a.seed == b.seed;
}

double Tree::Predict(std::span<const double> row) const {
  if (nodes.empty()) return 0.0;
  std::size_t id = 0;
  while (!nodes[id].is_leaf()) {
    const TreeNode& n = nodes[id];
    id = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left
                                                                                         : n.right);
  }
  return nodes[id].weight;
}

double Sigmoid(double margin) {
  const double m = std::clamp(margin, -36.0, 36.0);
  if (m >= 0.0) return 1.0 / (1.0 + std::exp(-m));
  const double e = std::exp(m);
  return e / (1.0 + e);
}

double GbdtModel::PredictMargin(std::span<const double> row, std::size_t tree_limit) const {
  double sum = 0.0;
  const std::size_t count = std::min(tree_limit, trees.size());
  for (std::size_t t = 0; t < count; ++t) sum += trees[t].Predict(row);
  return base_score + learning_rate * sum;
}

std::vector<double> GbdtModel::PredictProba(const FeatureMatrix& x) const {
  if (x.cols() != feature_names.size()) {
    throw InvalidArgument("model expects " + std::to_string(feature_names.size()) +
                          " features, matrix has " + std::to_string(x.cols()));
  }
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = Sigmoid(PredictMargin(x.row(i)));
  return out;
}

nlohmann::json GbdtModel::ToJson() const {
  nlohmann::json j;
  j["format"] = "enrich-gbdt";
  j["version"] = kModelFormatVersion;
  j["base_score"] = base_score;
  j["learning_rate"] = learning_rate;
  j["feature_names"] = feature_names;
  j["params"] = params.ToJson();
  j["trees"] = nlohmann::json::array();
  for (const Tree& tree : trees) {
    j["trees"].push_back(tree.nodes.empty() ? nlohmann::json::object() : NodeToJson(tree, 0));
  }
  return j;
}

GbdtModel GbdtModel::FromJson(const nlohmann::json& j) {
  if (j.value("format", "") != "enrich-gbdt") throw DataError("not a GBDT model document");
  if (j.value("version", 0) != kModelFormatVersion) {
    throw DataError("unsupported model version " + j.value("version", nlohmann::json()).dump());
  }
  GbdtModel m;
  m.base_score = j.at("base_score").get<double>();
  m.learning_rate = j.at("learning_rate").get<double>();
  m.feature_names = j.at("feature_names").get<std::vector<std::string>>();
  m.params = GbdtParams::FromJson(j.at("params"));
  for (const auto& t : j.at("trees")) {
    Tree tree;
    if (!t.empty()) NodeFromJson(t, tree);
    m.trees.push_back(std::move(tree));
  }
  return m;
}

std::string GbdtModel::Serialize() const { return ToJson().dump(1) + "\n"; }

double WeightedLogLoss(std::uint8_t y, double margin, double weight) {
  return weight * (y ? Softplus(-margin) : Softplus(margin));
}

LossDerivatives LogLossDerivatives(std::uint8_t y, double margin, double weight) {
  const double p = Sigmoid(margin);
  return {weight * (p - static_cast<double>(y)), weight * p * (1.0 - p)};
}

double TrainingLogLoss(const GbdtModel& model, const FeatureMatrix& x, std::size_t tree_limit) {
  double total = 0.0;
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const std::uint8_t y = x.labels()[i];
    const double w = y ? model.params.scale_pos_weight : 1.0;
    total += WeightedLogLoss(y, model.PredictMargin(x.row(i), tree_limit), w);
    weight_sum += w;
  }
  return weight_sum > 0.0 ? total / weight_sum : 0.0;
}

GbdtModel TrainGbdt(const FeatureMatrix& x, const GbdtParams& params) {
  params.Validate();
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  if (n == 0 || d == 0) throw InvalidArgument("cannot train on an empty matrix");

  GbdtModel model;
  model.params = params;
  model.learning_rate = params.learning_rate;
  model.feature_names = x.feature_names();
  if (model.feature_names.size() != d) {
    model.feature_names.clear();
    for (std::size_t j = 0; j < d; ++j) model.feature_names.push_back("f" + std::to_string(j));
  }

  std::vector<double> w(n);
  double pos_mass = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = x.labels()[i] ? params.scale_pos_weight : 1.0;
    mass += w[i];
    if (x.labels()[i]) pos_mass += w[i];
  }
  const double prevalence = std::clamp(pos_mass / mass, kPrevalenceClamp, 1.0 - kPrevalenceClamp);
  model.base_score = std::log(prevalence / (1.0 - prevalence));

  std::vector<std::vector<std::uint32_t>> order(d);
  for (std::size_t f = 0; f < d; ++f) {
    auto& o = order[f];
    o.resize(n);
    std::iota(o.begin(), o.end(), 0u);
    std::stable_sort(o.begin(), o.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return x.at(a, f) < x.at(b, f); });
  }

  std::vector<double> margin(n, model.base_score);
  std::vector<double> g(n), h(n);
  std::vector<int> pos(n);
  Rng rng(params.seed);
  const std::size_t sample_size =
      params.subsample < 1.0
          ? std::max<std::size_t>(1, static_cast<std::size_t>(
                                         std::llround(params.subsample * static_cast<double>(n))))
          : n;

  struct Best {
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
    double gl = 0.0;
    double hl = 0.0;
  };
  struct Scan {
    double gl = 0.0;
    double hl = 0.0;
    double last = 0.0;
    bool has = false;
  };

  for (int round = 0; round < params.n_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const LossDerivatives der = LogLossDerivatives(x.labels()[i], margin[i], w[i]);
      g[i] = der.gradient;
      h[i] = der.hessian;
    }
    if (sample_size < n) {
      std::fill(pos.begin(), pos.end(), -1);
      for (std::size_t i : rng.SampleWithoutReplacement(n, sample_size)) pos[i] = 0;
    } else {
      std::fill(pos.begin(), pos.end(), 0);
    }

    Tree tree;
    std::vector<double> node_g(1, 0.0), node_h(1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (pos[i] < 0) continue;
      node_g[0] += g[i];
      node_h[0] += h[i];
    }
    tree.nodes.emplace_back();
    tree.nodes[0].cover = node_h[0];

    std::vector<int> frontier{0};
    for (int depth = 0; depth < params.max_depth && !frontier.empty(); ++depth) {
      std::vector<int> slot(tree.nodes.size(), -1);
      for (std::size_t s = 0; s < frontier.size(); ++s) slot[static_cast<std::size_t>(frontier[s])] = static_cast<int>(s);
      std::vector<Best> best(frontier.size());
      std::vector<Scan> scan(frontier.size());
      for (std::size_t f = 0; f < d; ++f) {
        std::fill(scan.begin(), scan.end(), Scan{});
        for (std::uint32_t i : order[f]) {
          const int p = pos[i];
          if (p < 0) continue;
          const int s = slot[static_cast<std::size_t>(p)];
          if (s < 0) continue;
          const double v = x.at(i, f);
          Scan& sc = scan[static_cast<std::size_t>(s)];
          if (sc.has && v > sc.last) {
            const double gp = node_g[static_cast<std::size_t>(p)];
            const double hp = node_h[static_cast<std::size_t>(p)];
            const double hr = hp - sc.hl;
            if (sc.hl >= params.min_child_hessian && hr >= params.min_child_hessian) {
              const double gain = 0.5 * (Score(sc.gl, sc.hl, params.lambda) +
                                         Score(gp - sc.gl, hr, params.lambda) -
                                         Score(gp, hp, params.lambda));
              Best& b = best[static_cast<std::size_t>(s)];
              if (gain > b.gain) {
                double threshold = 0.5 * (sc.last + v);
                if (!(sc.last < threshold && threshold <= v)) threshold = v;
                b = {gain, static_cast<int>(f), threshold, sc.gl, sc.hl};
              }
            }
          }
          sc.gl += g[i];
          sc.hl += h[i];
          sc.last = v;
          sc.has = true;
        }
      }

      std::vector<int> next;
      for (std::size_t s = 0; s < frontier.size(); ++s) {
        const Best& b = best[s];
        if (b.feature < 0 || !(b.gain > kMinSplitGain)) continue;
        const auto p = static_cast<std::size_t>(frontier[s]);
        const int left = static_cast<int>(tree.nodes.size());
        const int right = left + 1;
        TreeNode l, r;
        l.cover = b.hl;
        r.cover = node_h[p] - b.hl;
        tree.nodes.push_back(l);
        tree.nodes.push_back(r);
        node_g.push_back(b.gl);
        node_h.push_back(b.hl);
        node_g.push_back(node_g[p] - b.gl);
        node_h.push_back(node_h[p] - b.hl);
        TreeNode& parent = tree.nodes[p];
        parent.feature = b.feature;
        parent.threshold = b.threshold;
        parent.left = left;
        parent.right = right;
        parent.gain = b.gain;
        next.push_back(left);
        next.push_back(right);
      }
      if (next.empty()) break;
      for (std::size_t i = 0; i < n; ++i) {
        const int p = pos[i];
        if (p < 0) continue;
        const TreeNode& node = tree.nodes[static_cast<std::size_t>(p)];
        if (node.is_leaf() || slot[static_cast<std::size_t>(p)] < 0) continue;
        pos[i] = x.at(i, static_cast<std::size_t>(node.feature)) < node.threshold ? node.left
                                                                                   : node.right;
      }
      frontier = std::move(next);
    }

    for (std::size_t id = 0; id < tree.nodes.size(); ++id) {
      if (tree.nodes[id].is_leaf()) tree.nodes[id].weight = LeafWeight(node_g[id], node_h[id], params);
    }
    for (std::size_t i = 0; i < n; ++i) margin[i] += params.learning_rate * tree.Predict(x.row(i));
    model.trees.push_back(std::move(tree));
  }
  return model;
}

std::vector<std::uint8_t> PredictLabel(std::span<const double> probs, double threshold) {
  std::vector<std::uint8_t> out(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) out[i] = probs[i] >= threshold ? 1 : 0;
  return out;
}

std::vector<FeatureImportance> TotalCoverImportance(const GbdtModel& model) {
  std::vector<FeatureImportance> out(model.feature_names.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    out[j].feature = model.feature_names[j];
    out[j].index = j;
  }
  for (const Tree& tree : model.trees) {
    for (const TreeNode& node : tree.nodes) {
      if (node.is_leaf()) continue;
      auto& imp = out.at(static_cast<std::size_t>(node.feature));
      imp.total_cover += node.cover;
      ++imp.split_count;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const FeatureImportance& a, const FeatureImportance& b) {
    return a.total_cover > b.total_cover;
  });
  return out;
}

}  // namespace enrich
