#include "coulomb2d/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "coulomb2d/errors.hpp"
#include "coulomb2d/specfun.hpp"

namespace coulomb2d::oracle {

namespace {

// (-i)^d
std::complex<double> minus_i_power(unsigned d) {
  switch (d % 4) {
    case 0:
      return {1.0, 0.0};
    case 1:
      return {0.0, -1.0};
    case 2:
      return {-1.0, 0.0};
    default:
      return {0.0, 1.0};
  }
}

unsigned absdiff(unsigned a, unsigned b) { return a > b ? a - b : b - a; }

unsigned total_difference(const Orbital& a, const Orbital& b) {
  return absdiff(a.nx, b.nx) + absdiff(a.ny, b.ny);
}

}  // namespace

void QuadratureSpec::validate() const {
  if (radial_nodes < 8 || angular_nodes < 8) {
    throw DomainError("quadrature needs at least 8 radial and angular nodes");
  }
  // exp(-c^2 / 2) < 1e-18  <=>  c > sqrt(2 * 18 * ln 10)
  const double min_cutoff = std::sqrt(36.0 * std::numbers::ln10);
  if (!(radial_cutoff > min_cutoff)) {
    throw DomainError("radial cutoff " + std::to_string(radial_cutoff) +
                      " leaves Gaussian tail above 1e-18 (need > " +
                      std::to_string(min_cutoff) + ")");
  }
  if (!(target_rel_tol > 0.0)) {
    throw DomainError("target_rel_tol must be positive");
  }
}

QuadratureSpec QuadratureSpec::refined() const {
  QuadratureSpec out = *this;
  out.radial_nodes *= 2;
  out.angular_nodes *= 2;
  return out;
}

GaussLegendre::GaussLegendre(unsigned n) : nodes(n), weights(n) {
  const long double pi = std::numbers::pi_v<long double>;
  for (unsigned k = 0; k < (n + 1) / 2; ++k) {
    long double x = std::cos(pi * (k + 0.75L) / (n + 0.5L));
    long double dp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1.0L;
      long double p1 = x;
      for (unsigned m = 2; m <= n; ++m) {
        const long double p2 = ((2.0L * m - 1.0L) * x * p1 - (m - 1.0L) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0L);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) {
        break;
      }
    }
    const long double w = 2.0L / ((1.0L - x * x) * dp * dp);
    nodes[k] = static_cast<double>(-x);
    nodes[n - 1 - k] = static_cast<double>(x);
    weights[k] = weights[n - 1 - k] = static_cast<double>(w);
  }
  if (n % 2 == 1) {
    nodes[n / 2] = 0.0;
  }
}

double form_factor_axis(double a, unsigned n1, unsigned n4, double q) {
  const unsigned hi = std::max(n1, n4);
  const unsigned lo = std::min(n1, n4);
  const unsigned d = hi - lo;
  const double aq = a * q;
  const double t = 0.5 * aq * aq;
  const double norm =
      std::exp(0.5 * (specfun::log_factorial(lo) - specfun::log_factorial(hi)));
  return norm * std::pow(aq / std::numbers::sqrt2, static_cast<int>(d)) *
         std::exp(-0.5 * t) * specfun::laguerre(lo, d, t);
}

std::complex<double> form_factor_C(const Geometry& geom, const Orbital& lam,
                                   const Orbital& lam4, double qx, double qy) {
  const double value = form_factor_axis(geom.ax, lam.nx, lam4.nx, qx) *
                       form_factor_axis(geom.ay, lam.ny, lam4.ny, qy);
  return minus_i_power(total_difference(lam, lam4)) * value;
}

std::complex<double> form_factor_D(const Geometry& geom, const Orbital& lam2,
                                   const Orbital& lam3, double qx, double qy) {
  return form_factor_C(geom, lam2, lam3, -qx, -qy);
}

QuadratureGrid::QuadratureGrid(const Geometry& geom, unsigned radial_nodes,
                               unsigned angular_nodes, double radial_cutoff)
    : geom_(geom) {
  if (!(geom.ax > 0.0 && geom.ay > 0.0)) {
    throw DomainError("oscillator lengths must be positive");
  }
  const GaussLegendre radial(radial_nodes);
  const GaussLegendre angular(angular_nodes);
  const double q_max = radial_cutoff / std::min(geom.ax, geom.ay);
  const double pi = std::numbers::pi;

  // Layout: first half holds q at theta in [0, pi], second half the
  // antipodes -q in the same order, so point p and p + half are paired.
  const std::size_t half = std::size_t{radial_nodes} * angular_nodes;
  qx_.resize(2 * half);
  qy_.resize(2 * half);
  weights_.resize(2 * half);
  std::size_t p = 0;
  for (unsigned r = 0; r < radial_nodes; ++r) {
    const double q = 0.5 * q_max * (radial.nodes[r] + 1.0);
    const double wq = 0.5 * q_max * radial.weights[r];
    for (unsigned a = 0; a < angular_nodes; ++a) {
      const double theta = 0.5 * pi * (angular.nodes[a] + 1.0);
      const double wt = 0.5 * pi * angular.weights[a];
      qx_[p] = q * std::cos(theta);
      qy_[p] = q * std::sin(theta);
      qx_[p + half] = -qx_[p];
      qy_[p + half] = -qy_[p];
      weights_[p] = weights_[p + half] = wq * wt;
      ++p;
    }
  }
}

const std::vector<double>& QuadratureGrid::axis_samples(int axis, unsigned n1,
                                                        unsigned n4) {
  const auto key = std::make_tuple(axis, std::min(n1, n4), std::max(n1, n4));
  auto it = cache_.find(key);
  if (it != cache_.end()) {
    return it->second;
  }
  const auto& q = axis == 0 ? qx_ : qy_;
  const double a = axis == 0 ? geom_.ax : geom_.ay;
  std::vector<double> samples(q.size());
  for (std::size_t p = 0; p < q.size(); ++p) {
    samples[p] = form_factor_axis(a, n1, n4, q[p]);
  }
  return cache_.emplace(key, std::move(samples)).first->second;
}

double QuadratureGrid::integrate(const ElementIndex& idx) {
  const auto& x14 = axis_samples(0, idx[0].nx, idx[3].nx);
  const auto& y14 = axis_samples(1, idx[0].ny, idx[3].ny);
  const auto& x23 = axis_samples(0, idx[1].nx, idx[2].nx);
  const auto& y23 = axis_samples(1, idx[1].ny, idx[2].ny);

  // C(q) D(q) = phase * X14(q) Y14(q) X23(-q) Y23(-q); the phase is constant.
  const std::size_t half = weights_.size() / 2;
  long double sum = 0.0L;
  for (std::size_t p = 0; p < weights_.size(); ++p) {
    const std::size_t antipode = p < half ? p + half : p - half;
    sum += static_cast<long double>(weights_[p]) * x14[p] * y14[p] *
           x23[antipode] * y23[antipode];
  }
  const std::complex<double> phase =
      minus_i_power(total_difference(idx[0], idx[3])) *
      minus_i_power(total_difference(idx[1], idx[2]));
  const std::complex<double> value =
      phase * (geom_.xi / (2.0 * std::numbers::pi) * static_cast<double>(sum));
  if (std::fabs(value.imag()) > 1e-10 * (1.0 + std::fabs(value.real()))) {
    throw ToleranceNotMet("quadrature left imaginary part " +
                          std::to_string(value.imag()));
  }
  return value.real();
}

ElementQuadrature::ElementQuadrature(const Geometry& geom, QuadratureSpec spec)
    : spec_((spec.validate(), spec)),
      coarse_(geom, spec.radial_nodes, spec.angular_nodes, spec.radial_cutoff),
      fine_(geom, spec.refined().radial_nodes, spec.refined().angular_nodes,
            spec.radial_cutoff) {}

double ElementQuadrature::operator()(const ElementIndex& idx) {
  const double coarse = coarse_.integrate(idx);
  const double fine = fine_.integrate(idx);
  if (std::fabs(coarse - fine) >
      std::max(spec_.target_rel_tol * std::fabs(fine), 1e-13)) {
    throw ToleranceNotMet("quadrature refinement disagrees: " +
                          std::to_string(coarse) + " vs " +
                          std::to_string(fine));
  }
  return fine;
}

double element_quadrature(const Geometry& geom, const ElementIndex& idx,
                          const QuadratureSpec& spec) {
  ElementQuadrature quad(geom, spec);
  return quad(idx);
}

double u_integral(unsigned i, unsigned j, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw DomainError("u_integral requires 0 < gamma <= 1");
  }
  const double g2 = gamma * gamma;
  // u = tan(theta):
  //   cos^(2i+2j)(theta) (cos^2 + 2 sin^2 / g^2)^-(j+1/2) (cos^2 + 2 sin^2)^-(i+1/2)
  auto integrand = [=](double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double c2 = c * c;
    const double s2 = s * s;
    return std::pow(c2, static_cast<double>(i + j)) *
           std::pow(c2 + 2.0 * s2 / g2, -(j + 0.5)) *
           std::pow(c2 + 2.0 * s2, -(i + 0.5));
  };
  double error = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
          integrand, 0.0, 0.5 * std::numbers::pi, 20, 1e-14, &error);
  if (!(error <= 1e-11 * std::fabs(value))) {
    throw ToleranceNotMet("u_integral(" + std::to_string(i) + ", " +
                          std::to_string(j) + ") error estimate " +
                          std::to_string(error));
  }
  return value;
}

}  // namespace coulomb2d::oracle
