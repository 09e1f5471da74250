#include "arm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace arm {

bool all_finite(const Matrix& m) { return m.allFinite(); }

ClusterLabels ClusterLabels::from_raw(const std::vector<long long>& raw) {
  std::map<long long, int> index;
  for (long long v : raw) index.emplace(v, 0);
  int next = 0;
  for (auto& [value, id] : index) id = next++;

  ClusterLabels out;
  out.ids.reserve(raw.size());
  for (long long v : raw) out.ids.push_back(index.at(v));
  out.k = next;
  return out;
}

ClusterLabels ClusterLabels::canonical() const {
  std::map<int, int> index;
  ClusterLabels out;
  out.ids.reserve(ids.size());
  for (int v : ids) {
    auto [it, inserted] = index.emplace(v, static_cast<int>(index.size()));
    out.ids.push_back(it->second);
  }
  out.k = std::max(k, static_cast<int>(index.size()));
  return out;
}

ErrorModel parse_error_model(const std::string& name) {
  if (name == "fro" || name == "frobenius") return ErrorModel::Frobenius;
  if (name == "l1") return ErrorModel::L1;
  if (name == "l21") return ErrorModel::L21;
  throw std::invalid_argument("unknown error model '" + name + "' (expected fro, l1 or l21)");
}

std::string to_string(ErrorModel model) {
  switch (model) {
    case ErrorModel::Frobenius: return "fro";
    case ErrorModel::L1: return "l1";
    case ErrorModel::L21: return "l21";
  }
  return "?";
}

Svd thin_svd(const Matrix& a) {
  if (!a.allFinite()) throw NumericalError("SVD input contains non-finite entries");
  if (a.size() == 0) return {Matrix(a.rows(), 0), Vector(0), Matrix(a.cols(), 0)};

  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Vector singular_values(const Matrix& a) {
  if (!a.allFinite()) throw NumericalError("SVD input contains non-finite entries");
  if (a.size() == 0) return Vector(0);
  Eigen::BDCSVD<Matrix> svd(a);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
  return svd.singularValues();
}

}  // namespace arm
