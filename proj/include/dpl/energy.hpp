// The energy functional J = Phi - lambda*Psi, its componentwise gradient
// (which is the Euler-Lagrange residual of the difference equation), and a
// central-difference gradient verifier.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dpl/lattice.hpp"
#include "dpl/nonlinearity.hpp"

namespace dpl {

struct EnergyReport {
  double phi = 0.0;
  double psi = 0.0;
  double j = 0.0;
  double lambda = 0.0;
};

// Phi(u) = (1/p) sum [a(k)|du(k-1)|^p + b(k)|u(k)|^p] = norm_X(u)^p / p,
// summed over the padded window (all outside terms vanish exactly).
inline double internal_energy(const LatticeVec& u, const Weights& w,
                              Exponent p) {
  return norm_X_pow(u, w, p) / p.value();
}

// Psi(u) = sum_k F(k, u(k)); off-window terms vanish because F(k, 0) = 0.
inline double forcing_potential(const LatticeVec& u, const Nonlinearity& nl) {
  detail::CompensatedSum s;
  for (index_t k = u.lo(); k <= u.hi(); ++k) {
    s.add(nl.F(k, u[k]));
  }
  return s.value();
}

inline EnergyReport total_energy(const LatticeVec& u, const Weights& w,
                                 Exponent p, const Nonlinearity& nl,
                                 double lambda) {
  detail::require(std::isfinite(lambda) && lambda > 0.0,
                  "lambda must be a positive real parameter");
  EnergyReport r;
  r.phi = internal_energy(u, w, p);
  r.psi = forcing_potential(u, nl);
  r.lambda = lambda;
  r.j = r.phi - lambda * r.psi;
  return r;
}

// Partial derivative of J with respect to u(k):
//   g(k) = -a(k+1) phi_p(du(k)) + a(k) phi_p(du(k-1)) + b(k) phi_p(u(k))
//          - lambda f(k, u(k)),
// exactly the residual of the difference equation at index k. The returned
// window is u's window padded by one index on each side (the full reach of
// u's influence); beyond it g(k) = -lambda f(k, 0), which vanishes for every
// admissible nonlinearity.
inline LatticeVec energy_gradient(const LatticeVec& u, const Weights& w,
                                  Exponent p, const Nonlinearity& nl,
                                  double lambda) {
  const index_t lo = u.lo() - 1;
  const index_t hi = u.hi() + 1;
  std::vector<double> g(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (index_t k = lo; k <= hi; ++k) {
    const double val = -w.a(k + 1) * phi_p(forward_diff(u, k + 1), p) +
                       w.a(k) * phi_p(forward_diff(u, k), p) +
                       w.b(k) * phi_p(u[k], p) - lambda * nl.f(k, u[k]);
    g[static_cast<std::size_t>(k - lo)] = val;
  }
  return LatticeVec(lo, std::move(g));
}

// Max over the padded window of
//   |central difference of J - analytic gradient| / (1 + |analytic|).
inline double gradient_check(const LatticeVec& u, const Weights& w, Exponent p,
                             const Nonlinearity& nl, double lambda, double h) {
  detail::require(h > 0.0, "finite-difference step must be positive");
  const LatticeVec g = energy_gradient(u, w, p, nl, lambda);
  double worst = 0.0;
  for (index_t k = g.lo(); k <= g.hi(); ++k) {
    const double up = total_energy(u.with(k, u[k] + h), w, p, nl, lambda).j;
    const double dn = total_energy(u.with(k, u[k] - h), w, p, nl, lambda).j;
    const double fd = (up - dn) / (2.0 * h);
    const double err = std::abs(fd - g[k]) / (1.0 + std::abs(g[k]));
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace dpl
