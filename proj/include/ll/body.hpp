#pragma once

#include <cmath>
#include <stdexcept>

#include "ll/special.hpp"

namespace ll {

/// B_p^n scaled to volume one: { x : ||x||_p <= kappa_{p,n} }.
struct LpBall {
  double p;
  int n;
  double radius;  // kappa_{p,n}

  LpBall(double p_, int n_) : p(p_), n(n_), radius(kappa(p_, n_)) {
    if (n_ < 1) throw std::invalid_argument("LpBall: n < 1");
    if (p_ < 1.0) throw std::invalid_argument("LpBall: p < 1");
  }
};

}  // namespace ll
