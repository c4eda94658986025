#include "mvmam/models.hpp"

#include <cmath>
#include <sstream>

namespace mvmam {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double param(const std::map<std::string, double>& params, const char* name) {
  return params.at(name);
}

// --- Maier-Stein field: V(u,v) = (u - u^3 - beta u v^2, -(1 + u^2) v) ---

std::function<Vec(const Vec&)> maier_stein_value(const std::map<std::string, double>& p) {
  const double beta = param(p, "beta");
  return [beta](const Vec& x) {
    const double u = x(0), v = x(1);
    Vec out(2);
    out(0) = u - u * u * u - beta * u * v * v;
    out(1) = -(1.0 + u * u) * v;
    return out;
  };
}

std::function<Mat(const Vec&)> maier_stein_jacobian(const std::map<std::string, double>& p) {
  const double beta = param(p, "beta");
  return [beta](const Vec& x) {
    const double u = x(0), v = x(1);
    Mat j(2, 2);
    j(0, 0) = 1.0 - 3.0 * u * u - beta * v * v;
    j(0, 1) = -2.0 * beta * u * v;
    j(1, 0) = -2.0 * u * v;
    j(1, 1) = -(1.0 + u * u);
    return j;
  };
}

// --- 1-D double well: V(x) = x - x^3 (gradient of -(x^4/4 - x^2/2)) ---

std::function<Vec(const Vec&)> double_well_value(const std::map<std::string, double>&) {
  return [](const Vec& x) {
    Vec out(1);
    out(0) = x(0) - x(0) * x(0) * x(0);
    return out;
  };
}

std::function<Mat(const Vec&)> double_well_jacobian(const std::map<std::string, double>&) {
  return [](const Vec& x) {
    Mat j(1, 1);
    j(0, 0) = 1.0 - 3.0 * x(0) * x(0);
    return j;
  };
}

// --- linear interaction: F_L(u,v) = (u, -v) ---

std::function<Vec(const Vec&)> linear_value(const std::map<std::string, double>&) {
  return [](const Vec& r) {
    Vec out(2);
    out(0) = r(0);
    out(1) = -r(1);
    return out;
  };
}

std::function<Mat(const Vec&)> linear_jacobian(const std::map<std::string, double>&) {
  return [](const Vec&) {
    Mat j(2, 2);
    j << 1.0, 0.0, 0.0, -1.0;
    return j;
  };
}

// --- regularized Biot-Savart: F_BS(u,v) = (-v, u) / (2 pi (u^2+v^2+delta)) ---

std::function<Vec(const Vec&)> biot_savart_value(const std::map<std::string, double>& p) {
  const double delta = param(p, "delta");
  return [delta](const Vec& r) {
    const double u = r(0), v = r(1);
    const double d = u * u + v * v + delta;
    Vec out(2);
    out(0) = -v / (kTwoPi * d);
    out(1) = u / (kTwoPi * d);
    return out;
  };
}

std::function<Mat(const Vec&)> biot_savart_jacobian(const std::map<std::string, double>& p) {
  const double delta = param(p, "delta");
  return [delta](const Vec& r) {
    const double u = r(0), v = r(1);
    const double d = u * u + v * v + delta;
    const double s = 1.0 / (kTwoPi * d * d);
    Mat j(2, 2);
    j(0, 0) = 2.0 * u * v * s;
    j(0, 1) = (2.0 * v * v - d) * s;
    j(1, 0) = (d - 2.0 * u * u) * s;
    j(1, 1) = -2.0 * u * v * s;
    return j;
  };
}

// --- zero interaction, any dimension ---

std::function<Vec(const Vec&)> zero_value(const std::map<std::string, double>&) {
  return [](const Vec& r) { return Vec(Vec::Zero(r.size())); };
}

std::function<Mat(const Vec&)> zero_jacobian(const std::map<std::string, double>&) {
  return [](const Vec& r) { return Mat(Mat::Zero(r.size(), r.size())); };
}

std::string join(const std::vector<std::string>& names) {
  std::ostringstream os;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) os << ", ";
    os << '"' << names[i] << '"';
  }
  return os.str();
}

std::map<std::string, double> merge_params(const std::map<std::string, double>& defaults,
                                           const std::map<std::string, double>& given,
                                           const std::string& kind) {
  for (const auto& [k, v] : given) {
    if (!defaults.count(k)) {
      throw config_error("unknown parameter \"" + k + "\" for \"" + kind + "\"");
    }
    (void)v;
  }
  auto merged = defaults;
  for (const auto& [k, v] : given) merged[k] = v;
  return merged;
}

}  // namespace

BuiltinCatalog::BuiltinCatalog() {
  fields_["maier-stein"] = FieldDef{2, {{"beta", 10.0}}, &maier_stein_value, &maier_stein_jacobian};
  fields_["double-well"] = FieldDef{1, {}, &double_well_value, &double_well_jacobian};
  interactions_["linear"] = InteractionDef{2, {}, &linear_value, &linear_jacobian, true};
  interactions_["biot-savart-regularized"] =
      InteractionDef{2, {{"delta", 0.01}}, &biot_savart_value, &biot_savart_jacobian, true};
  interactions_["zero"] = InteractionDef{0, {}, &zero_value, &zero_jacobian, true};
}

BuiltinCatalog& BuiltinCatalog::instance() {
  static BuiltinCatalog catalog;
  return catalog;
}

void BuiltinCatalog::register_field(const std::string& name, FieldDef def) {
  fields_[name] = std::move(def);
}

void BuiltinCatalog::register_interaction(const std::string& name, InteractionDef def) {
  interactions_[name] = std::move(def);
}

const FieldDef& BuiltinCatalog::field(const std::string& name) const {
  auto it = fields_.find(name);
  if (it == fields_.end()) {
    throw config_error("unknown field \"" + name + "\"; known fields: " + join(field_names()));
  }
  return it->second;
}

const InteractionDef& BuiltinCatalog::interaction(const std::string& name) const {
  auto it = interactions_.find(name);
  if (it == interactions_.end()) {
    throw config_error("unknown interaction \"" + name + "\"; known interactions: " +
                       join(interaction_names()));
  }
  return it->second;
}

std::vector<std::string> BuiltinCatalog::field_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : fields_) out.push_back(k);
  return out;
}

std::vector<std::string> BuiltinCatalog::interaction_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : interactions_) out.push_back(k);
  return out;
}

ModelSpec build_model(const std::string& field_kind,
                      const std::map<std::string, double>& field_params,
                      const std::string& interaction_kind,
                      const std::map<std::string, double>& interaction_params,
                      const Vec& x1, const Vec& x2, double fd_step) {
  const auto& catalog = BuiltinCatalog::instance();
  const auto& fdef = catalog.field(field_kind);
  const auto& idef = catalog.interaction(interaction_kind);

  if (x1.size() == 0 || x1.size() != x2.size()) {
    throw config_error("x1 and x2 must be non-empty and of equal length");
  }
  if (!all_finite(x1) || !all_finite(x2)) {
    throw config_error("x1 and x2 must be finite");
  }
  const int dim = static_cast<int>(x1.size());
  if (fdef.required_dim != 0 && fdef.required_dim != dim) {
    throw config_error("field \"" + field_kind + "\" requires dimension " +
                       std::to_string(fdef.required_dim) + ", got " + std::to_string(dim));
  }
  if (idef.required_dim != 0 && idef.required_dim != dim) {
    throw config_error("interaction \"" + interaction_kind + "\" requires dimension " +
                       std::to_string(idef.required_dim) + ", got " + std::to_string(dim));
  }
  if (fd_step <= 0.0) throw config_error("fd_step must be positive");

  ModelSpec model;
  model.dim = dim;
  model.field_kind = field_kind;
  model.field_params = merge_params(fdef.default_params, field_params, field_kind);
  model.interaction_kind = interaction_kind;
  model.interaction_params =
      merge_params(idef.default_params, interaction_params, interaction_kind);
  model.anchor_x1 = x1;
  model.target_x2 = x2;
  model.fd_step = fd_step;

  if (interaction_kind == "biot-savart-regularized" &&
      model.interaction_params.at("delta") <= 0.0) {
    throw config_error("biot-savart-regularized requires delta > 0");
  }

  model.V = fdef.make_value(model.field_params);
  if (fdef.make_jacobian) model.grad_V = fdef.make_jacobian(model.field_params);
  model.F = idef.make_value(model.interaction_params);
  if (idef.make_jacobian) model.grad_F = idef.make_jacobian(model.interaction_params);

  if (idef.zero_at_origin) {
    const Vec f0 = model.F(Vec::Zero(dim));
    if (f0.cwiseAbs().maxCoeff() != 0.0) {
      throw config_error("interaction \"" + interaction_kind +
                         "\" is declared zero at the origin but F(0) != 0");
    }
  }
  return model;
}

}  // namespace mvmam
