#include "viscoswell/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace viscoswell {

bool DiagTensor3::all_finite() const {
  return std::isfinite(d1) && std::isfinite(d2) && std::isfinite(d3);
}

Invariants invariants(const DiagTensor3& b) {
  if (!b.all_finite() || !b.all_positive()) {
    throw std::domain_error("invariants: Cauchy-Green tensor entries must be positive and finite");
  }
  const double tr = b.trace();
  return {tr, 0.5 * (tr * tr - b.squared().trace()), b.det()};
}

DiagTensor3 elastic_stretch(const DiagTensor3& f, const DiagTensor3& g) {
  if (g.d1 == 0.0 || g.d2 == 0.0 || g.d3 == 0.0) {
    throw std::domain_error("elastic_stretch: natural-configuration map G is singular");
  }
  return {f.d1 / g.d1, f.d2 / g.d2, f.d3 / g.d3};
}

DiagTensor3 left_cauchy_green(const DiagTensor3& f) { return f.squared(); }

Jacobians jacobians(const DiagTensor3& f, const DiagTensor3& g) {
  const double jg = g.det();
  if (jg == 0.0) {
    throw std::domain_error("jacobians: natural-configuration map G is singular");
  }
  const double j = f.det();
  return {j, jg, j / jg};
}

}  // namespace viscoswell
