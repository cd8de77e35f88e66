#include "ccnkit/persist.hpp"

#include <algorithm>

#include "ccnkit/error.hpp"
#include "ccnkit/io.hpp"

namespace ccn {

using nlohmann::json;

namespace {

template <class T>
T field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ValidationError(std::string("model file: missing field '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model file: bad field '") + key + "': " + e.what());
  }
}

json matrix_to_json(const Matrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.storage()}};
}

Matrix matrix_from_json(const json& doc) {
  return Matrix::from_data(field<std::size_t>(doc, "rows"), field<std::size_t>(doc, "cols"),
                           field<Vector>(doc, "data"));
}

}  // namespace

json loss_spec_to_json(const LossSpec& s) {
  return {{"kind", to_string(s.kind)}, {"xi_plus", s.xi_plus}, {"xi_minus", s.xi_minus},
          {"kappa", s.kappa},          {"q", s.q},             {"lambda", s.lambda}};
}

LossSpec loss_spec_from_json(const json& doc) {
  LossSpec s;
  s.kind = parse_loss_kind(field<std::string>(doc, "kind"));
  s.xi_plus = field<double>(doc, "xi_plus");
  s.xi_minus = field<double>(doc, "xi_minus");
  s.kappa = field<double>(doc, "kappa");
  s.q = field<double>(doc, "q");
  s.lambda = field<double>(doc, "lambda");
  s.validate();
  return s;
}

json params_to_json(const ModelParams& p) {
  json c = json::array();
  for (std::size_t k = 1; k < p.n_labels(); ++k)
    for (std::size_t l = 0; l < k; ++l) c.push_back(json::array({k, l, p.C(k, l)}));
  return {{"b", p.b}, {"W", matrix_to_json(p.W)}, {"C", c}};
}

ModelParams params_from_json(const json& doc) {
  ModelParams p;
  p.b = field<Vector>(doc, "b");
  p.W = matrix_from_json(field<json>(doc, "W"));
  const std::size_t l = p.b.size();
  if (p.W.rows() != l) throw ValidationError("model file: W has " + std::to_string(p.W.rows()) +
                                             " rows for " + std::to_string(l) + " labels");
  p.C = Matrix(l, l, 0.0);
  for (const json& e : field<json>(doc, "C")) {
    if (!e.is_array() || e.size() != 3) throw ValidationError("model file: C entries must be [k, l, value]");
    const auto k = e[0].get<std::size_t>(), j = e[1].get<std::size_t>();
    if (k >= l || j >= k) throw ValidationError("model file: C entry (" + std::to_string(k) + ", " +
                                                std::to_string(j) + ") is outside the lower triangle");
    p.C(k, j) = e[2].get<double>();
  }
  p.validate();
  return p;
}

json model_to_json(const FittedModel& m) {
  json doc = params_to_json(m.params);
  doc["schema_version"] = kModelSchemaVersion;
  doc["activation"] = to_string(m.activation);
  doc["propagation"] = to_string(m.propagation);
  doc["loss_spec"] = loss_spec_to_json(m.loss_spec);
  doc["label_order"] = m.label_order;
  doc["training_loss"] = m.training_loss;
  doc["n_starts_used"] = m.n_starts_used;
  doc["degenerate_label_warning"] = m.degenerate_label_warning;
  return doc;
}

FittedModel model_from_json(const json& doc) {
  const int version = field<int>(doc, "schema_version");
  if (version != kModelSchemaVersion) {
    throw ValidationError("model file: schema_version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(kModelSchemaVersion) + ")");
  }
  FittedModel m;
  m.params = params_from_json(doc);
  m.activation = parse_activation(field<std::string>(doc, "activation"));
  m.propagation = parse_propagation(field<std::string>(doc, "propagation"));
  m.loss_spec = loss_spec_from_json(field<json>(doc, "loss_spec"));
  m.label_order = field<Permutation>(doc, "label_order");
  m.training_loss = doc.value("training_loss", 0.0);
  m.n_starts_used = doc.value("n_starts_used", std::size_t{0});
  m.degenerate_label_warning = doc.value("degenerate_label_warning", false);

  Permutation check = m.label_order;
  std::sort(check.begin(), check.end());
  bool ok = check.size() == m.params.n_labels();
  for (std::size_t i = 0; ok && i < check.size(); ++i) ok = check[i] == i;
  if (!ok) throw ValidationError("model file: label_order is not a permutation of 0.." +
                                 std::to_string(m.params.n_labels()) + "-1");
  return m;
}

void save_model(const std::filesystem::path& path, const FittedModel& model) {
  write_text(path, model_to_json(model).dump(2) + "\n");
}

FittedModel load_model(const std::filesystem::path& path) {
  try {
    return model_from_json(json::parse(read_text(path)));
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

json design_to_json(const SimDesign& d) {
  json doc = params_to_json(d.params);
  doc["schema_version"] = kModelSchemaVersion;
  doc["name"] = d.name;
  doc["activation"] = to_string(Activation::sigmoid);
  doc["sigma"] = matrix_to_json(d.sigma);
  doc["realization"] = to_string(d.realization);
  doc["post_transform"] = to_string(d.post_transform);
  doc["n"] = d.n;
  return doc;
}

SimDesign design_from_json(const json& doc) {
  SimDesign d;
  d.name = field<std::string>(doc, "name");
  d.params = params_from_json(doc);
  d.sigma = matrix_from_json(field<json>(doc, "sigma"));
  const auto r = field<std::string>(doc, "realization");
  if (r == "probabilistic") d.realization = Realization::probabilistic;
  else if (r == "sequential") d.realization = Realization::sequential;
  else throw ValidationError("design file: unknown realization '" + r + "'");
  const auto t = field<std::string>(doc, "post_transform");
  if (t == "none") d.post_transform = PostTransform::none;
  else if (t == "reverse-labels") d.post_transform = PostTransform::reverse_labels;
  else throw ValidationError("design file: unknown post_transform '" + t + "'");
  d.n = doc.value("n", std::size_t{200});
  d.validate();
  return d;
}

json report_to_json(const DependencyReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json doc;
  doc["label_density"] = r.label_density;
  doc["label_dependency"] = opt(r.label_dependency);
  doc["unconditional_dependency"] = opt(r.unconditional_dependency);
  if (r.conditional_dependency) {
    const CdepResult& c = *r.conditional_dependency;
    doc["conditional_dependency"] = c.score;
    doc["conditional_detail"] = {{"raw_difference", c.raw_difference},
                                 {"performance_without", c.performance_without},
                                 {"performance_with", c.performance_with},
                                 {"fallbacks", c.fallbacks}};
  } else {
    doc["conditional_dependency"] = nullptr;
  }
  doc["metric_used"] = to_string(r.config.metric);
  doc["cv_config"] = {{"outer_folds", r.config.outer_folds},
                      {"inner_folds", r.config.inner_folds},
                      {"lambda_grid", r.config.lambda_grid},
                      {"seed", r.config.seed}};
  return doc;
}

}  // namespace ccn
