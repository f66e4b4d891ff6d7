#include <gtube/serialization.hpp>

#include <gtube/errors.hpp>

#include <cmath>
#include <fstream>

namespace gtube {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

namespace {

json matrix(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (int j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
    rows.push_back(r);
  }
  return rows;
}

// complex matrices as {"re": [...], "im": [...]}
json cmatrix(const Eigen::MatrixXcd& M) { return {{"re", matrix(M.real())}, {"im", matrix(M.imag())}}; }

Eigen::MatrixXd read_matrix(const json& j) {
  const int r = static_cast<int>(j.size());
  const int c = r ? static_cast<int>(j[0].size()) : 0;
  Eigen::MatrixXd M(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < c; ++k) M(i, k) = j[i][k].get<double>();
  return M;
}

Eigen::MatrixXcd read_cmatrix(const json& j) {
  const Eigen::MatrixXd re = read_matrix(j.at("re")), im = read_matrix(j.at("im"));
  Eigen::MatrixXcd M(re.rows(), re.cols());
  M.real() = re;
  M.imag() = im;
  return M;
}

}  // namespace

json to_json(const PhaseReport& r) {
  return {{"tau", r.tau},
          {"critical_point", r.critical_point},
          {"phase_at_critical", r.phase_at_critical},
          {"gradient_norm", r.gradient_norm},
          {"hessian", matrix(r.hessian)},
          {"inverse", matrix(r.inverse)},
          {"hessian_matches_display", r.hessian_deviation <= 1e-14},
          {"hessian_times_inverse_is_identity", r.product_error <= 1e-14},
          {"product_error", r.product_error},
          {"determinant", r.determinant},
          {"determinant_expected", r.tau * r.tau / 4.0},
          {"signature", r.signature},
          {"gamma_lambda_tau", r.gamma_lambda_tau},
          {"gamma_lambda_tau_expected", 8.0 * kPi * kPi}};
}

json to_json(const HeisenbergChart& c) {
  return {{"model", c.model.name()},
          {"dim", c.model.m},
          {"tau", c.tau},
          {"base", {{"x", c.base.x}, {"y", c.base.y}}},
          {"rotation", matrix(c.rotation)},
          {"linear_map", cmatrix(c.linear_map)},
          {"quadratic", cmatrix(c.quadratic)},
          {"condition_number", c.condition_number},
          {"validity_radius", c.validity_radius}};
}

HeisenbergChart chart_from_json(const json& j) {
  try {
    HeisenbergChart c;
    c.model = FlatModel::from_name(j.at("model").get<std::string>(), j.at("dim").get<int>());
    c.tau = j.at("tau").get<double>();
    c.base.x = j.at("base").at("x").get<RVec>();
    c.base.y = j.at("base").at("y").get<RVec>();
    c.rotation = read_matrix(j.at("rotation"));
    c.linear_map = read_cmatrix(j.at("linear_map"));
    c.quadratic = read_cmatrix(j.at("quadratic"));
    c.condition_number = j.at("condition_number").get<double>();
    c.validity_radius = j.at("validity_radius").get<double>();
    return c;
  } catch (const json::exception& e) {
    throw DomainError(std::string("chart_from_json: ") + e.what());
  }
}

json to_json(const LogLogFit& f) {
  return {{"slope", number(f.slope)},
          {"intercept", number(f.intercept)},
          {"ci_low", number(f.ci_low)},
          {"ci_high", number(f.ci_high)},
          {"points_used", f.used},
          {"floor_limited", f.floor_limited},
          {"non_convergent", f.non_convergent}};
}

json to_json(const RemainderFit& f) {
  json s = json::array();
  for (const auto& r : f.series)
    s.push_back({{"direction", r.direction},
                 {"required_slope", r.required},
                 {"slope", number(r.slope)},
                 {"floor_limited", r.floor_limited},
                 {"radii", r.radii},
                 {"sup_remainder", r.sup_remainder}});
  return {{"series", s}, {"passes", f.passes()}};
}

json to_json(const ScalingReport& r) {
  json rows = json::array();
  for (const auto& d : r.details)
    rows.push_back({{"lambda", d.lambda},
                    {"sup_error", d.sup_error},
                    {"worst_tuple", d.worst_tuple},
                    {"window", d.window},
                    {"modes", d.modes},
                    {"certified_tail", d.tail},
                    {"diagonal_min", d.diagonal_min}});
  return {{"kernel", to_string(r.kind)},
          {"m", r.m},
          {"tau", r.tau},
          {"eps", r.eps},
          {"rho", r.rho},
          {"grid_size", r.grid_size},
          {"lambdas", r.lambdas},
          {"errors", r.errors},
          {"per_lambda", rows},
          {"fit", to_json(r.fit)},
          {"monotone", r.monotone}};
}

json to_json(const CrossConsistency& c) {
  return {{"lambdas", c.lambdas}, {"differences", c.differences}, {"fit", to_json(c.fit)}};
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io", "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error("io", "write failed for '" + path + "'");
}

}  // namespace gtube
