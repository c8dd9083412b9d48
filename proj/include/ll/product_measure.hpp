#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ll/rng.hpp"
#include "ll/special.hpp"

namespace ll {

/// One coordinate law of a product measure: density, log-density derivatives
/// on (-1/2, 1/2) (condition (i)), a 1-D sampler, and the declared regularity
/// and sub-Gaussian constants of conditions (i)-(ii).
struct Component {
  std::string name;
  std::function<double(double)> density;
  std::function<double(double, int)> log_density_deriv;  // orders 0..4
  std::function<double(RandomStream&)> draw;
  double deriv_bound_C = 1.0;   // condition (i): |(log rho)^(k)| <= C on (-1/2,1/2)
  double subgauss_c = 0.1;      // condition (ii): int exp(c t^2) rho <= C
  double subgauss_C = 10.0;
  double quad_lo = -0.5, quad_hi = 0.5;  // effective support for quadrature
};

struct ProductMeasure {
  int n = 0;
  std::vector<Component> components;  // size 1 means i.i.d., else size n
  const Component& comp(int i) const {
    return components.size() == 1 ? components[0] : components[std::size_t(i)];
  }
};

/// density e^{-|t|^p} / (2 Gamma(1+1/p)); the exponential-power law behind
/// the exact ell_p-ball sampler.
double sample_exp_power(double p, RandomStream& stream);

inline Component gaussian_component() {
  Component c;
  c.name = "gaussian";
  const double lognorm = -0.5 * std::log(2.0 * M_PI);
  c.density = [=](double t) { return std::exp(-0.5 * t * t + lognorm); };
  c.log_density_deriv = [=](double t, int k) -> double {
    switch (k) {
      case 0: return -0.5 * t * t + lognorm;
      case 1: return -t;
      case 2: return -1.0;
      default: return 0.0;
    }
  };
  c.draw = [](RandomStream& s) { return s.normal(); };
  c.deriv_bound_C = 1.0;
  c.subgauss_c = 0.25;
  c.subgauss_C = std::sqrt(2.0);
  c.quad_lo = -9.0;
  c.quad_hi = 9.0;
  return c;
}

inline Component uniform_cube_component() {
  Component c;
  c.name = "uniform";
  c.density = [](double t) { return std::fabs(t) <= 0.5 ? 1.0 : 0.0; };
  c.log_density_deriv = [](double, int) { return 0.0; };
  c.draw = [](RandomStream& s) { return s.uniform() - 0.5; };
  c.deriv_bound_C = 1e-9;
  c.subgauss_c = 1.0;
  c.subgauss_C = std::exp(0.25);
  return c;
}

/// exp(1) law; the simplex sampler's base coordinate.
inline Component exponential_component() {
  Component c;
  c.name = "exponential";
  c.density = [](double t) { return t >= 0.0 ? std::exp(-t) : 0.0; };
  c.log_density_deriv = [](double t, int k) -> double {
    if (t < 0.0) throw std::domain_error("exponential log-density at t < 0");
    return k == 0 ? -t : (k == 1 ? -1.0 : 0.0);
  };
  c.draw = [](RandomStream& s) { return s.exponential(); };
  c.deriv_bound_C = 1.0;
  c.subgauss_c = 0.0;  // exponential tail, not sub-Gaussian
  c.subgauss_C = 0.0;
  c.quad_lo = 0.0;
  c.quad_hi = 45.0;
  return c;
}

inline Component exp_power_component(double p) {
  Component c;
  c.name = "exp_power";
  const double lognorm = -std::log(2.0) - std::lgamma(1.0 + 1.0 / p);
  c.density = [=](double t) { return std::exp(-std::pow(std::fabs(t), p) + lognorm); };
  c.log_density_deriv = [=](double t, int k) -> double {
    double at = std::fabs(t), sg = t < 0.0 ? -1.0 : 1.0;
    switch (k) {
      case 0: return -std::pow(at, p) + lognorm;
      case 1: return -p * std::pow(at, p - 1.0) * sg;
      case 2: return -p * (p - 1.0) * std::pow(at, p - 2.0);
      case 3: return -p * (p - 1.0) * (p - 2.0) * std::pow(at, p - 3.0) * sg;
      default: return -p * (p - 1.0) * (p - 2.0) * (p - 3.0) * std::pow(at, p - 4.0);
    }
  };
  c.draw = [=](RandomStream& s) { return sample_exp_power(p, s); };
  c.deriv_bound_C = 4.0 * p * p * p;
  c.subgauss_c = p >= 2.0 ? 0.25 : 0.0;
  c.subgauss_C = 4.0;
  c.quad_lo = -std::pow(45.0, 1.0 / p);
  c.quad_hi = std::pow(45.0, 1.0 / p);
  return c;
}

inline ProductMeasure product_of(Component c, int n) {
  ProductMeasure m;
  m.n = n;
  m.components.push_back(std::move(c));
  return m;
}

inline ProductMeasure gaussian_product(int n) { return product_of(gaussian_component(), n); }
inline ProductMeasure uniform_cube_product(int n) { return product_of(uniform_cube_component(), n); }

}  // namespace ll
