// Copyright 2026 The Tabaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tabaudit/attacks.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tabaudit/kde.h"
#include "tabaudit/neighbors.h"

namespace tabaudit {
namespace {

struct FamilyInfo {
  AttackFamily family;
  const char* name;
  bool calibrated;
  EncodingMode encoding;
};

constexpr FamilyInfo kFamilies[] = {
    {AttackFamily::kDcr, "dcr", false, EncodingMode::kOneHot},
    {AttackFamily::kDcrDiff, "dcr_diff", true, EncodingMode::kOneHot},
    {AttackFamily::kDensity, "density", false, EncodingMode::kOrdinal},
    {AttackFamily::kDomias, "domias", true, EncodingMode::kOrdinal},
    {AttackFamily::kDpi, "dpi", true, EncodingMode::kOneHot},
    {AttackFamily::kGenLra, "gen_lra", true, EncodingMode::kOrdinal},
    {AttackFamily::kLocalNeighborhood, "local_neighborhood", false,
     EncodingMode::kOneHot},
    {AttackFamily::kLogan, "logan", true, EncodingMode::kOneHot},
    {AttackFamily::kClassifier, "classifier", true, EncodingMode::kOneHot},
    {AttackFamily::kMc, "mc", false, EncodingMode::kOneHot},
};

const FamilyInfo& Info(AttackFamily family) {
  for (const auto& info : kFamilies) {
    if (info.family == family) return info;
  }
  throw std::invalid_argument("unknown attack family");
}

std::map<std::string, double> Defaults(AttackFamily family) {
  switch (family) {
    case AttackFamily::kDpi:
      return {{"k", 5}};
    case AttackFamily::kGenLra:
      return {{"k", 5}, {"refit_bandwidth", 1}};
    case AttackFamily::kLocalNeighborhood:
      return {{"radius", 1.0}};
    case AttackFamily::kLogan:
      return {{"epochs", 200}, {"hidden", 256}, {"learning_rate", 1e-3},
              {"batch_size", 256}};
    case AttackFamily::kClassifier:
      return {{"trees", 100}, {"max_depth", 8}};
    default:
      return {};
  }
}

size_t PositiveCount(const std::map<std::string, double>& hp,
                     const std::string& key, const std::string& id) {
  const double v = hp.at(key);
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e9) {
    throw ValidationError(id + ": " + key + " must be a positive integer");
  }
  return static_cast<size_t>(v);
}

void RequireRows(const Matrix& m, size_t min_rows, const char* what) {
  if (m.rows() < min_rows) {
    throw ValidationError(std::string(what) + " needs at least " +
                          std::to_string(min_rows) + " row(s), got " +
                          std::to_string(m.rows()));
  }
}

void RequireSameWidth(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw std::invalid_argument("encoded matrices differ in width");
  }
}

std::vector<double> KdeScores(const Matrix& targets, const KdeModel& model) {
  std::vector<double> out(targets.rows());
  for (size_t i = 0; i < targets.rows(); ++i) {
    out[i] = model.LogPdf(targets.Row(i));
  }
  return out;
}

}  // namespace

const std::vector<AttackFamily>& AllFamilies() {
  static const std::vector<AttackFamily> all = [] {
    std::vector<AttackFamily> v;
    for (const auto& info : kFamilies) v.push_back(info.family);
    return v;
  }();
  return all;
}

const char* FamilyName(AttackFamily family) { return Info(family).name; }

AttackFamily ParseFamily(const std::string& name) {
  for (const auto& info : kFamilies) {
    if (name == info.name) return info.family;
  }
  throw ValidationError("unknown attack family \"" + name + "\"");
}

bool RequiresReference(AttackFamily family) { return Info(family).calibrated; }

EncodingMode EncodingFor(AttackFamily family) { return Info(family).encoding; }

std::string AttackSpec::Id() const {
  std::string id = FamilyName(family);
  if (hyperparams.empty()) return id;
  id += '[';
  bool first = true;
  for (const auto& [key, value] : hyperparams) {
    if (!first) id += ',';
    first = false;
    id += key + "=" + FormatShortest(value);
  }
  id += ']';
  return id;
}

std::map<std::string, double> AttackSpec::Resolved() const {
  std::map<std::string, double> out = Defaults(family);
  for (const auto& [key, value] : hyperparams) {
    if (!out.count(key)) {
      throw ValidationError(std::string(FamilyName(family)) +
                            ": unknown hyperparameter \"" + key + "\"");
    }
    if (!std::isfinite(value)) {
      throw ValidationError(Id() + ": hyperparameter " + key + " is not finite");
    }
    out[key] = value;
  }
  return out;
}

nlohmann::ordered_json AttackSpec::ToJson() const {
  nlohmann::ordered_json j;
  j["family"] = FamilyName(family);
  for (const auto& [key, value] : hyperparams) {
    if (value == std::floor(value) && std::abs(value) < 1e15) {
      j[key] = static_cast<int64_t>(value);
    } else {
      j[key] = value;
    }
  }
  return j;
}

AttackSpec AttackSpec::FromJson(const nlohmann::ordered_json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string()) {
    throw ValidationError("attack spec must be an object with a \"family\"");
  }
  AttackSpec spec;
  spec.family = ParseFamily(j["family"].get<std::string>());
  for (const auto& [key, value] : j.items()) {
    if (key == "family") continue;
    if (!value.is_number()) {
      throw ValidationError("attack spec key \"" + key + "\" must be numeric");
    }
    spec.hyperparams[key] = value.get<double>();
  }
  spec.Resolved();  // rejects unknown keys early
  return spec;
}

AttackSpec AttackSpec::Parse(const std::string& text) {
  std::stringstream ss(text);
  std::string part;
  std::getline(ss, part, ':');
  AttackSpec spec;
  spec.family = ParseFamily(part);
  while (std::getline(ss, part, ':')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("attack \"" + text + "\": expected key=value, got \"" +
                            part + "\"");
    }
    const std::string key = part.substr(0, eq);
    const std::string value = part.substr(eq + 1);
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') {
      throw ValidationError("attack \"" + text + "\": bad number \"" + value +
                            "\"");
    }
    spec.hyperparams[key] = v;
  }
  spec.Resolved();
  return spec;
}

std::vector<double> DcrScores(const Matrix& targets, const Matrix& synthetic) {
  RequireRows(synthetic, 1, "dcr: synthetic set");
  RequireSameWidth(targets, synthetic);
  const NeighborIndex index(synthetic);
  std::vector<double> out(targets.rows());
  for (size_t i = 0; i < targets.rows(); ++i) {
    out[i] = -index.NearestDistance(targets.Row(i));
  }
  return out;
}

std::vector<double> DcrDiffScores(const Matrix& targets, const Matrix& synthetic,
                                  const Matrix& reference) {
  RequireRows(synthetic, 1, "dcr_diff: synthetic set");
  RequireRows(reference, 1, "dcr_diff: reference set");
  RequireSameWidth(targets, synthetic);
  RequireSameWidth(targets, reference);
  const NeighborIndex s_index(synthetic);
  const NeighborIndex r_index(reference);
  std::vector<double> out(targets.rows());
  for (size_t i = 0; i < targets.rows(); ++i) {
    out[i] = r_index.NearestDistance(targets.Row(i)) -
             s_index.NearestDistance(targets.Row(i));
  }
  return out;
}

std::vector<double> DensityScores(const Matrix& targets, const Matrix& synthetic) {
  RequireRows(synthetic, 2, "density: synthetic set");
  RequireSameWidth(targets, synthetic);
  return KdeScores(targets, KdeModel::Fit(synthetic));
}

std::vector<double> DomiasScores(const Matrix& targets, const Matrix& synthetic,
                                 const Matrix& reference) {
  RequireRows(synthetic, 2, "domias: synthetic set");
  RequireRows(reference, 2, "domias: reference set");
  RequireSameWidth(targets, synthetic);
  RequireSameWidth(targets, reference);
  const auto ps = KdeScores(targets, KdeModel::Fit(synthetic));
  const auto pr = KdeScores(targets, KdeModel::Fit(reference));
  std::vector<double> out(targets.rows());
  for (size_t i = 0; i < out.size(); ++i) out[i] = ps[i] - pr[i];
  return out;
}

std::vector<double> DpiScores(const Matrix& targets, const Matrix& synthetic,
                              const Matrix& reference, size_t k) {
  RequireSameWidth(targets, synthetic);
  RequireSameWidth(targets, reference);
  const size_t n_s = synthetic.rows();
  if (k == 0 || k > n_s + reference.rows()) {
    throw ValidationError("dpi: k=" + std::to_string(k) +
                          " exceeds the pooled synthetic+reference size " +
                          std::to_string(n_s + reference.rows()));
  }
  // Synthetic rows take ids [0, n_s), reference rows follow.
  const NeighborIndex pooled(Matrix::Stack(synthetic, reference));
  std::vector<double> out(targets.rows());
  for (size_t i = 0; i < targets.rows(); ++i) {
    size_t from_synthetic = 0;
    for (const Neighbor& nb : pooled.Knn(targets.Row(i), k)) {
      if (nb.id < n_s) ++from_synthetic;
    }
    const double c_s = static_cast<double>(from_synthetic);
    const double c_r = static_cast<double>(k - from_synthetic);
    out[i] = (c_s + 0.5) / (c_r + 0.5);
  }
  return out;
}

std::vector<double> GenLraScores(const Matrix& targets, const Matrix& synthetic,
                                 const Matrix& reference, size_t k,
                                 bool refit_bandwidth) {
  RequireRows(reference, 2, "gen_lra: reference set");
  RequireSameWidth(targets, synthetic);
  RequireSameWidth(targets, reference);
  if (k == 0 || k > synthetic.rows()) {
    throw ValidationError("gen_lra: k=" + std::to_string(k) +
                          " exceeds the synthetic size " +
                          std::to_string(synthetic.rows()));
  }
  const size_t dim = reference.cols();
  const size_t n_r = reference.rows();
  const double h_ref = ScottBandwidth(reference);

  // Squared distances from each synthetic row to every reference row,
  // computed on first use, and the baseline log-density under KDE(R).
  std::vector<std::vector<double>> d2_cache(synthetic.rows());
  std::vector<double> base_logpdf(synthetic.rows(),
                                  std::numeric_limits<double>::quiet_NaN());
  const auto distances_to_reference = [&](size_t s) -> std::vector<double>& {
    auto& d2 = d2_cache[s];
    if (d2.empty()) {
      d2.resize(n_r + 1);
      for (size_t r = 0; r < n_r; ++r) {
        d2[r] = SquaredDistance(synthetic.Row(s), reference.Row(r));
      }
      base_logpdf[s] = GaussianMixtureLogPdf(
          std::span<const double>(d2.data(), n_r), h_ref, dim);
    }
    return d2;
  };

  const NeighborIndex s_index(synthetic);
  std::vector<double> out(targets.rows());
  for (size_t i = 0; i < targets.rows(); ++i) {
    const auto x = targets.Row(i);
    const double h = refit_bandwidth ? ScottBandwidthWithExtra(reference, x)
                                     : h_ref;
    double score = 0.0;
    for (const Neighbor& nb : s_index.Knn(x, k)) {
      auto& d2 = distances_to_reference(nb.id);
      // The last slot holds the target's own kernel.
      d2[n_r] = SquaredDistance(synthetic.Row(nb.id), x);
      score += GaussianMixtureLogPdf(d2, h, dim) - base_logpdf[nb.id];
    }
    out[i] = score;
  }
  return out;
}

std::vector<double> LocalNeighborhoodScores(const Matrix& targets,
                                            const Matrix& synthetic,
                                            double radius) {
  RequireSameWidth(targets, synthetic);
  if (!(radius > 0.0)) {
    throw ValidationError("local_neighborhood: radius must be positive");
  }
  const NeighborIndex index(synthetic);
  std::vector<double> out(targets.rows());
  for (size_t i = 0; i < targets.rows(); ++i) {
    out[i] = static_cast<double>(index.RadiusCount(targets.Row(i), radius));
  }
  return out;
}

std::vector<double> LoganScores(const Matrix& targets, const Matrix& synthetic,
                                const Matrix& reference, const MlpConfig& config,
                                RandomSeed seed) {
  RequireSameWidth(targets, synthetic);
  const auto model = TrainDiscriminator(DiscriminatorKind::kMlp, synthetic,
                                        reference, {config, {}}, seed);
  return model->ScoreRows(targets);
}

std::vector<double> ClassifierScores(const Matrix& targets,
                                     const Matrix& synthetic,
                                     const Matrix& reference,
                                     const ForestConfig& config,
                                     RandomSeed seed) {
  RequireSameWidth(targets, synthetic);
  const auto model = TrainDiscriminator(DiscriminatorKind::kForest, synthetic,
                                        reference, {{}, config}, seed);
  return model->ScoreRows(targets);
}

double McRadius(const Matrix& synthetic) {
  RequireRows(synthetic, 2, "mc: synthetic set");
  const size_t n = synthetic.rows();
  std::vector<double> nn(n, std::numeric_limits<double>::infinity());
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double d2 = SquaredDistance(synthetic.Row(i), synthetic.Row(j));
      nn[i] = std::min(nn[i], d2);
      nn[j] = std::min(nn[j], d2);
    }
  }
  for (double& v : nn) v = std::sqrt(v);
  std::sort(nn.begin(), nn.end());
  const double median =
      n % 2 == 1 ? nn[n / 2] : (nn[n / 2 - 1] + nn[n / 2]) / 2.0;
  return std::max(median, 1e-6);
}

std::vector<double> McScores(const Matrix& targets, const Matrix& synthetic) {
  RequireSameWidth(targets, synthetic);
  const double eps = McRadius(synthetic);
  const NeighborIndex index(synthetic);
  const double n = static_cast<double>(synthetic.rows());
  std::vector<double> out(targets.rows());
  for (size_t i = 0; i < targets.rows(); ++i) {
    out[i] = static_cast<double>(index.RadiusCount(targets.Row(i), eps)) / n;
  }
  return out;
}

TransformerPair FitTransformers(const Quadruple& quadruple, FitSource source) {
  const DataTable* fit = &quadruple.synthetic;
  if (source == FitSource::kReference) {
    if (!quadruple.reference) {
      throw ValidationError("encoder fit source is reference, but no reference "
                            "table was supplied");
    }
    fit = &*quadruple.reference;
  }
  return TransformerPair{
      FittedTransformer::Fit(*fit, EncodingMode::kOneHot, source),
      FittedTransformer::Fit(*fit, EncodingMode::kOrdinal, source)};
}

AttackInputs EncodeInputs(const Quadruple& quadruple, const EvalSet& eval,
                          const TransformerPair& transformers) {
  const auto encode = [&](const FittedTransformer& t) {
    EncodedViews v;
    v.targets = t.Transform(eval.targets).values;
    v.synthetic = t.Transform(quadruple.synthetic).values;
    if (quadruple.reference) v.reference = t.Transform(*quadruple.reference).values;
    return v;
  };
  return AttackInputs{encode(transformers.onehot), encode(transformers.ordinal),
                      eval.labels};
}

AttackResult RunAttack(const AttackSpec& spec, const AttackInputs& inputs,
                       RandomSeed seed) {
  const std::string id = spec.Id();
  const auto hp = spec.Resolved();
  const EncodedViews& v = inputs.views(spec.encoding());
  if (spec.requires_reference() && !v.reference) {
    throw ValidationError(id + " is a calibrated attack and needs a reference "
                          "table");
  }
  if (v.targets.rows() != inputs.labels.size()) {
    throw std::invalid_argument(id + ": targets and labels differ in length");
  }
  std::vector<double> scores;
  switch (spec.family) {
    case AttackFamily::kDcr:
      scores = DcrScores(v.targets, v.synthetic);
      break;
    case AttackFamily::kDcrDiff:
      scores = DcrDiffScores(v.targets, v.synthetic, *v.reference);
      break;
    case AttackFamily::kDensity:
      scores = DensityScores(v.targets, v.synthetic);
      break;
    case AttackFamily::kDomias:
      scores = DomiasScores(v.targets, v.synthetic, *v.reference);
      break;
    case AttackFamily::kDpi:
      scores = DpiScores(v.targets, v.synthetic, *v.reference,
                         PositiveCount(hp, "k", id));
      break;
    case AttackFamily::kGenLra:
      scores = GenLraScores(v.targets, v.synthetic, *v.reference,
                            PositiveCount(hp, "k", id),
                            hp.at("refit_bandwidth") != 0.0);
      break;
    case AttackFamily::kLocalNeighborhood:
      scores = LocalNeighborhoodScores(v.targets, v.synthetic, hp.at("radius"));
      break;
    case AttackFamily::kLogan: {
      MlpConfig config;
      config.epochs = PositiveCount(hp, "epochs", id);
      config.hidden = PositiveCount(hp, "hidden", id);
      config.batch_size = PositiveCount(hp, "batch_size", id);
      config.learning_rate = hp.at("learning_rate");
      if (!(config.learning_rate > 0.0)) {
        throw ValidationError(id + ": learning_rate must be positive");
      }
      scores = LoganScores(v.targets, v.synthetic, *v.reference, config, seed);
      break;
    }
    case AttackFamily::kClassifier: {
      ForestConfig config;
      config.trees = PositiveCount(hp, "trees", id);
      config.max_depth = PositiveCount(hp, "max_depth", id);
      scores = ClassifierScores(v.targets, v.synthetic, *v.reference, config,
                                seed);
      break;
    }
    case AttackFamily::kMc:
      scores = McScores(v.targets, v.synthetic);
      break;
  }
  return AttackResult(id, std::move(scores), inputs.labels, hp, seed.value);
}

}  // namespace tabaudit
