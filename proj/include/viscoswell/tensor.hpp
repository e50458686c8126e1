#pragma once

#include <array>

namespace viscoswell {

/// Diagonal 3x3 tensor. All deformation states in the 1D swelling problem
/// (F, G, B_G, B_p, D_G) are diagonal, so only the diagonal is stored.
struct DiagTensor3 {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  static constexpr DiagTensor3 identity() { return {1.0, 1.0, 1.0}; }
  static constexpr DiagTensor3 scalar(double s) { return {s, s, s}; }
  /// diag(1, 1, s): the uniaxial family of the 1D motion.
  static constexpr DiagTensor3 uniaxial(double s) { return {1.0, 1.0, s}; }

  double trace() const { return d1 + d2 + d3; }
  double det() const { return d1 * d2 * d3; }
  /// Frobenius inner product A : B.
  double dot(const DiagTensor3& o) const { return d1 * o.d1 + d2 * o.d2 + d3 * o.d3; }
  double norm_squared() const { return dot(*this); }
  bool all_finite() const;
  bool all_positive() const { return d1 > 0.0 && d2 > 0.0 && d3 > 0.0; }

  DiagTensor3 squared() const { return {d1 * d1, d2 * d2, d3 * d3}; }

  friend constexpr DiagTensor3 operator+(const DiagTensor3& a, const DiagTensor3& b) {
    return {a.d1 + b.d1, a.d2 + b.d2, a.d3 + b.d3};
  }
  friend constexpr DiagTensor3 operator-(const DiagTensor3& a, const DiagTensor3& b) {
    return {a.d1 - b.d1, a.d2 - b.d2, a.d3 - b.d3};
  }
  friend constexpr DiagTensor3 operator*(double s, const DiagTensor3& a) {
    return {s * a.d1, s * a.d2, s * a.d3};
  }
  friend constexpr DiagTensor3 operator*(const DiagTensor3& a, double s) { return s * a; }
  friend constexpr bool operator==(const DiagTensor3&, const DiagTensor3&) = default;
};

struct Invariants {
  double first = 0.0;   // tr B
  double second = 0.0;  // ((tr B)^2 - tr(B^2)) / 2
  double third = 0.0;   // det B
};

/// Principal invariants of a left Cauchy-Green tensor. Throws
/// std::domain_error unless every entry is strictly positive and finite.
Invariants invariants(const DiagTensor3& b);

/// Elastic part F G^{-1} of the deformation (natural -> current).
/// Throws std::domain_error on a zero entry of G.
DiagTensor3 elastic_stretch(const DiagTensor3& f, const DiagTensor3& g);

/// B = F F^T for a diagonal (hence symmetric) F.
DiagTensor3 left_cauchy_green(const DiagTensor3& f);

struct Jacobians {
  double total = 0.0;    // J   = det F
  double natural = 0.0;  // J_G = det G
  double elastic = 0.0;  // J_p = J / J_G
};

Jacobians jacobians(const DiagTensor3& f, const DiagTensor3& g);

}  // namespace viscoswell
