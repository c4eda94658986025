#pragma once

#include <map>
#include <string>
#include <vector>

#include "mvmam/model.hpp"

namespace mvmam {

/// Factory signature: given the (defaulted) parameter map, produce the
/// callable pair. Jacobian callables may be empty to request the
/// finite-difference fallback.
struct FieldDef {
  int required_dim = 0;  // 0 = any dimension
  std::map<std::string, double> default_params;
  std::function<Vec(const Vec&)> (*make_value)(const std::map<std::string, double>&) = nullptr;
  std::function<Mat(const Vec&)> (*make_jacobian)(const std::map<std::string, double>&) = nullptr;
};

struct InteractionDef {
  int required_dim = 0;
  std::map<std::string, double> default_params;
  std::function<Vec(const Vec&)> (*make_value)(const std::map<std::string, double>&) = nullptr;
  std::function<Mat(const Vec&)> (*make_jacobian)(const std::map<std::string, double>&) = nullptr;
  bool zero_at_origin = true;  // checked at model construction when set
};

/// Registry of named vector fields and interaction kernels. Builtins are
/// installed on first access; user models may be registered under new
/// identifiers before building specs from them.
class BuiltinCatalog {
 public:
  static BuiltinCatalog& instance();

  void register_field(const std::string& name, FieldDef def);
  void register_interaction(const std::string& name, InteractionDef def);

  const FieldDef& field(const std::string& name) const;
  const InteractionDef& interaction(const std::string& name) const;

  std::vector<std::string> field_names() const;
  std::vector<std::string> interaction_names() const;

 private:
  BuiltinCatalog();
  std::map<std::string, FieldDef> fields_;
  std::map<std::string, InteractionDef> interactions_;
};

/// Build a validated ModelSpec from catalog identifiers. Missing parameters
/// take the catalog defaults (beta = 10 for "maier-stein", delta = 0.01 for
/// "biot-savart-regularized"); unknown identifiers or parameters and
/// non-positive delta are rejected with a config_error.
ModelSpec build_model(const std::string& field_kind,
                      const std::map<std::string, double>& field_params,
                      const std::string& interaction_kind,
                      const std::map<std::string, double>& interaction_params,
                      const Vec& x1, const Vec& x2, double fd_step = 1e-6);

}  // namespace mvmam
