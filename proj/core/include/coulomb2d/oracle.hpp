#pragma once

// Independent numerical route to the matrix elements, for validation only.
//
//   V = (1/2pi) * integral C_{l4}^{l1}(q) D_{l3}^{l2}(q) xi/q d^2q,
//   C_{l'}^{l}(q) = integral psi_l^* psi_l' e^{-i q.r} d^2r,  D(q) = C(-q),
//
// integrated in polar coordinates (the 1/q cancels the Jacobian). Also the
// one-dimensional u-integral whose closed form is the kernel v_ij.

#include <complex>
#include <cstdint>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "coulomb2d/elements.hpp"

namespace coulomb2d::oracle {

struct QuadratureSpec {
  unsigned radial_nodes = 200;
  unsigned angular_nodes = 128;
  /// Radial cutoff in units of 1 / min(ax, ay).
  double radial_cutoff = 40.0;
  /// Allowed relative disagreement between the base and doubled grids.
  double target_rel_tol = 1e-8;

  /// Throws DomainError unless node counts are >= 8 and the Gaussian
  /// envelope at the cutoff is below 1e-18.
  void validate() const;

  [[nodiscard]] QuadratureSpec refined() const;
};

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendre(unsigned n);
};

/// One-axis factor of the form factor, without its phase:
///   sqrt(n-!/n+!) (a q / sqrt 2)^(n+ - n-) e^{-a^2 q^2 / 4} L_{n-}^{n+ - n-}(a^2 q^2 / 2).
/// The full factor for e^{-i q x} is (-i)^(n+ - n-) times this.
[[nodiscard]] double form_factor_axis(double a, unsigned n1, unsigned n4,
                                      double q);

/// Momentum-space overlap C_{l4}^{l}(q) = <l| e^{-i q.r} |l4>.
[[nodiscard]] std::complex<double> form_factor_C(const Geometry& geom,
                                                 const Orbital& lam,
                                                 const Orbital& lam4, double qx,
                                                 double qy);

/// D_{l3}^{l2}(q) = C_{l3}^{l2}(-q).
[[nodiscard]] std::complex<double> form_factor_D(const Geometry& geom,
                                                 const Orbital& lam2,
                                                 const Orbital& lam3, double qx,
                                                 double qy);

/// Polar grid for one geometry with cached per-axis form-factor samples.
/// Angles cover [0, pi] with each node paired with its antipode. Not
/// thread-safe (the cache grows on demand); use one instance per thread.
class QuadratureGrid {
 public:
  QuadratureGrid(const Geometry& geom, unsigned radial_nodes,
                 unsigned angular_nodes, double radial_cutoff);

  /// Real part of the integral; throws ToleranceNotMet if the imaginary
  /// part exceeds 1e-10 * (1 + |real|).
  [[nodiscard]] double integrate(const ElementIndex& idx);

  [[nodiscard]] const Geometry& geometry() const noexcept { return geom_; }
  [[nodiscard]] std::size_t point_count() const noexcept {
    return weights_.size();
  }

 private:
  const std::vector<double>& axis_samples(int axis, unsigned n1, unsigned n4);

  Geometry geom_;
  std::vector<double> qx_;
  std::vector<double> qy_;
  std::vector<double> weights_;
  std::map<std::tuple<int, unsigned, unsigned>, std::vector<double>> cache_;
};

/// Element by quadrature on two grids: the QuadratureSpec node counts and
/// doubled node counts. Returns the finer estimate. Throws ToleranceNotMet if the two
/// disagree by more than max(target_rel_tol * |fine|, 1e-13).
class ElementQuadrature {
 public:
  explicit ElementQuadrature(const Geometry& geom, QuadratureSpec spec = {});

  [[nodiscard]] double operator()(const ElementIndex& idx);

 private:
  QuadratureSpec spec_;
  QuadratureGrid coarse_;
  QuadratureGrid fine_;
};

/// One-shot wrapper around ElementQuadrature.
[[nodiscard]] double element_quadrature(const Geometry& geom,
                                        const ElementIndex& idx,
                                        const QuadratureSpec& spec = {});

/// Adaptive integral over [0, inf) of
///   (1 + 2u^2/gamma^2)^-(j+1/2) (1 + 2u^2)^-(i+1/2) du
/// after u = tan(theta), to relative 1e-11. Its closed form is
/// gamma / (2 sqrt 2) * v_ij. Throws ToleranceNotMet or DomainError.
[[nodiscard]] double u_integral(unsigned i, unsigned j, double gamma);

}  // namespace coulomb2d::oracle
