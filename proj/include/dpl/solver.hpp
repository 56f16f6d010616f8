// Box-constrained minimization of J over W_n by projected gradient descent
// with Armijo backtracking, spike initialization, adaptive windows with a
// tail certificate, the n-indexed sequence driver, and a brute-force oracle.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dpl/energy.hpp"
#include "dpl/lattice.hpp"
#include "dpl/nonlinearity.hpp"

namespace dpl {

// Constraint region W_n = { u : lower <= u(k) <= upper for all k }.
struct BoxSet {
  int n = 0;
  double lower = 0.0;
  double upper = 0.0;
};

inline BoxSet make_box_for(int n, double r, const OscillatorySpec& spec) {
  BoxSet b{n, r, spec.d(n)};
  detail::require(b.lower < 0.0 && b.upper > 0.0,
                  "box requires lower < 0 < upper = d_n");
  return b;
}

struct SolverParams {
  double tol_pg = 1e-8;        // projected-gradient sup-norm stop
  double tol_residual = 1e-6;  // residual bound at box-inactive indices
  int max_iter = 0;            // 0 = automatic 50 * window size
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double step0 = 1.0;
  int window_K0 = 16;
  double window_growth = 4.0;
  double tail_eps = 1e-8;
  double r = -1.0;  // box lower bound, any negative value

  void validate() const {
    detail::require(tol_pg > 0.0, "tol_pg must be positive");
    detail::require(tol_residual > 0.0, "tol_residual must be positive");
    detail::require(max_iter >= 0, "max_iter must be >= 0");
    detail::require(armijo_c > 0.0 && armijo_c < 1.0, "armijo_c must lie in (0,1)");
    detail::require(backtrack > 0.0 && backtrack < 1.0,
                    "backtrack must lie in (0,1)");
    detail::require(step0 > 0.0, "step0 must be positive");
    detail::require(window_K0 >= 1, "window_K0 must be >= 1");
    detail::require(window_growth > 1.0, "window_growth must exceed 1");
    detail::require(tail_eps > 0.0, "tail_eps must be positive");
    detail::require(r < 0.0, "box lower bound r must be negative");
  }
};

struct Certificates {
  bool claim2_bounds = false;
  bool residual_ok = false;
  bool tail_ok = false;
};

struct SolutionRecord {
  int n = 0;
  LatticeVec u = LatticeVec::zero();
  double eta = 0.0;
  double norm_x = 0.0;
  double u_max = 0.0;
  double residual_inf = 0.0;
  double pg_norm = 0.0;
  int iterations = 0;
  index_t window_lo = 0;
  index_t window_hi = 0;
  Certificates certificates;
  bool converged = false;
  bool descent_ok = true;  // every accepted step strictly decreased J
  index_t spike_k0 = 0;
  double spike_t = 0.0;
  double spike_bound = 0.0;  // energy of the selected spike initializer
  std::string note;
};

// Closed-form energy of the single-site trial function u(k0) = t:
//   J = (1/p)(a(k0+1) + a(k0) + b(k0)) t^p - lambda F(k0, t).
inline double spike_energy(index_t k0, double t, const Weights& w, Exponent p,
                           const Nonlinearity& nl, double lambda) {
  detail::require(t >= 0.0, "spike height must be nonnegative");
  if (t == 0.0) return 0.0;
  const double scale = w.a(k0 + 1) + w.a(k0) + w.b(k0);
  return scale * detail::pow_abs(t, p.value()) / p.value() - lambda * nl.F(k0, t);
}

struct SpikeChoice {
  index_t k0 = 0;
  double t = 0.0;
  double energy = 0.0;
};

// Grid search over sites |k0| <= k_search and heights drawn from the spec
// sequences, restricted to the box (t <= d_n always).
inline SpikeChoice select_spike(int n, const OscillatorySpec& spec,
                                const Weights& w, Exponent p,
                                const Nonlinearity& nl, double lambda,
                                index_t k_search) {
  const double d_n = spec.d(n);
  std::vector<double> grid;
  for (int m = 1; m <= n + 1; ++m) grid.push_back(spec.c(m));
  for (int m = 1; m <= n; ++m) grid.push_back(spec.d(m));
  grid.push_back(d_n);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::erase_if(grid, [&](double t) { return t <= 0.0 || t > d_n; });
  detail::require(!grid.empty(), "spike grid is empty");

  SpikeChoice best;
  best.energy = std::numeric_limits<double>::infinity();
  for (index_t k0 = -k_search; k0 <= k_search; ++k0) {
    for (double t : grid) {
      const double e = spike_energy(k0, t, w, p, nl, lambda);
      if (e < best.energy) {
        best = SpikeChoice{k0, t, e};
      }
    }
  }
  return best;
}

// Window containing k0 and 0 with margin max(window_K0, ceil(growth * n))
// on each side.
inline std::pair<index_t, index_t> window_select(int n, index_t k0,
                                                 const SolverParams& params) {
  const index_t margin = std::max<index_t>(
      params.window_K0,
      static_cast<index_t>(std::ceil(params.window_growth * n)));
  return {std::min<index_t>(k0, 0) - margin, std::max<index_t>(k0, 0) + margin};
}

namespace detail {

struct DescentState {
  std::vector<double> x;
  index_t lo = 0;
  int iterations = 0;
  double pg_norm = std::numeric_limits<double>::infinity();
  bool converged = false;
  bool descent_ok = true;
  std::string note;
};

inline double eval_j(const std::vector<double>& x, index_t lo, const Weights& w,
                     Exponent p, const Nonlinearity& nl, double lambda) {
  const double j = total_energy(LatticeVec(lo, x), w, p, nl, lambda).j;
  if (!std::isfinite(j)) {
    throw std::runtime_error("non-finite energy encountered during descent");
  }
  return j;
}

// Monotone projected gradient descent with Armijo backtracking; the trial
// step is seeded by the Barzilai-Borwein quotient of the previous move.
inline DescentState project_descend(std::vector<double> x0, index_t lo,
                                    const BoxSet& box, const Weights& w,
                                    Exponent p, const Nonlinearity& nl,
                                    double lambda, const SolverParams& params,
                                    int max_iter) {
  DescentState st;
  st.x = std::move(x0);
  st.lo = lo;
  const std::size_t m = st.x.size();
  auto clamp = [&](double v) { return std::clamp(v, box.lower, box.upper); };

  // For 1 < p < 2 keep iterates off exact kink ties of the difference terms.
  auto kink_guard = [&](std::vector<double>& v) {
    if (p.value() >= 2.0) return;
    for (std::size_t i = 1; i < m; ++i) {
      if (v[i] != 0.0 && v[i] == v[i - 1]) v[i] = clamp(v[i] + 1e-12);
    }
  };

  for (double& v : st.x) v = clamp(v);
  kink_guard(st.x);

  double jx = eval_j(st.x, lo, w, p, nl, lambda);
  std::vector<double> grad(m), prev_x, prev_g;
  auto fill_grad = [&] {
    const LatticeVec g = energy_gradient(LatticeVec(lo, st.x), w, p, nl, lambda);
    for (std::size_t i = 0; i < m; ++i) {
      grad[i] = g[lo + static_cast<index_t>(i)];
    }
  };

  for (int it = 0; it < max_iter; ++it) {
    fill_grad();
    double pg = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      pg = std::max(pg, std::abs(st.x[i] - clamp(st.x[i] - grad[i])));
    }
    st.pg_norm = pg;
    if (pg <= params.tol_pg) {
      st.converged = true;
      break;
    }

    double alpha = params.step0;
    if (!prev_x.empty()) {
      double ss = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double s = st.x[i] - prev_x[i];
        const double y = grad[i] - prev_g[i];
        ss += s * s;
        sy += s * y;
      }
      if (sy > 0.0 && ss > 0.0) {
        alpha = std::clamp(ss / sy, 1e-14, 1e10);
      }
    }

    prev_x = st.x;
    prev_g = grad;

    bool accepted = false;
    std::vector<double> v(m);
    for (int bt = 0; bt < 64; ++bt) {
      double dir = 0.0;  // <grad, v - x>, nonpositive for a projected step
      for (std::size_t i = 0; i < m; ++i) {
        v[i] = clamp(st.x[i] - alpha * grad[i]);
        dir += grad[i] * (v[i] - st.x[i]);
      }
      kink_guard(v);
      if (v == st.x) break;  // projected step vanished
      const double jv = eval_j(v, lo, w, p, nl, lambda);
      if (jv <= jx + params.armijo_c * dir) {
        st.descent_ok = st.descent_ok && jv < jx;
        st.x = std::move(v);
        jx = jv;
        accepted = true;
        break;
      }
      alpha *= params.backtrack;
    }
    ++st.iterations;
    if (!accepted) {
      st.note = "line search stalled";
      break;
    }
  }
  if (!st.converged && st.note.empty()) st.note = "max iterations exceeded";
  return st;
}

}  // namespace detail

// Residual sup-norm over the padded window, measured only where the box is
// inactive (the gradient need not vanish at active bounds).
inline double inactive_residual(const LatticeVec& u, const BoxSet& box,
                                const Weights& w, Exponent p,
                                const Nonlinearity& nl, double lambda) {
  const LatticeVec g = energy_gradient(u, w, p, nl, lambda);
  double worst = 0.0;
  for (index_t k = g.lo(); k <= g.hi(); ++k) {
    const double v = u[k];
    if (v == box.lower || v == box.upper) continue;
    worst = std::max(worst, std::abs(g[k]));
  }
  return worst;
}

// Minimize J over W_n. Starts from the best of {selected spike, warm start,
// zero}; re-solves on a doubled window (at most 3 doublings) whenever the
// converged iterate fails the tail certificate at the window edges.
inline SolutionRecord minimize_on_Wn(int n, double lambda,
                                     const OscillatorySpec& spec,
                                     const Nonlinearity& nl, const Weights& w,
                                     Exponent p, const SolverParams& params,
                                     const LatticeVec* warm = nullptr) {
  params.validate();
  detail::require(n >= 1, "n must be >= 1");
  detail::require(std::isfinite(lambda) && lambda > 0.0,
                  "lambda must be a positive real parameter");
  const BoxSet box = make_box_for(n, params.r, spec);

  const index_t k_search = std::max<index_t>(
      params.window_K0,
      static_cast<index_t>(std::ceil(params.window_growth * n)));
  const SpikeChoice spike = select_spike(n, spec, w, p, nl, lambda, k_search);

  auto [lo, hi] = window_select(n, spike.k0, params);
  if (warm != nullptr) {
    lo = std::min(lo, warm->lo());
    hi = std::max(hi, warm->hi());
  }

  SolutionRecord rec;
  rec.n = n;
  rec.spike_k0 = spike.k0;
  rec.spike_t = spike.t;
  rec.spike_bound = spike.energy;

  detail::DescentState st;
  int total_iterations = 0;
  bool descent_ok = true;
  std::optional<LatticeVec> carried;  // best iterate from a smaller window
  for (int attempt = 0;; ++attempt) {
    const std::size_t size = static_cast<std::size_t>(hi - lo + 1);
    auto embed = [&](const LatticeVec& v) {
      std::vector<double> xv(size, 0.0);
      for (index_t k = v.lo(); k <= v.hi(); ++k) {
        xv[static_cast<std::size_t>(k - lo)] = v[k];
      }
      return xv;
    };

    std::vector<double> x(size, 0.0);
    double jx = 0.0;  // the zero candidate
    if (spike.energy < jx) {
      std::vector<double> xs(size, 0.0);
      xs[static_cast<std::size_t>(spike.k0 - lo)] = spike.t;
      x = std::move(xs);
      jx = spike.energy;
    }
    if (warm != nullptr) {
      const double jw = total_energy(*warm, w, p, nl, lambda).j;
      if (jw < jx) {
        x = embed(*warm);
        jx = jw;
      }
    }
    if (carried.has_value()) {
      const double jc = total_energy(*carried, w, p, nl, lambda).j;
      if (jc < jx) {
        x = embed(*carried);
        jx = jc;
      }
    }

    const int max_iter = params.max_iter > 0
                             ? params.max_iter
                             : 50 * static_cast<int>(size);
    st = detail::project_descend(std::move(x), lo, box, w, p, nl, lambda,
                                 params, max_iter);
    total_iterations += st.iterations;
    descent_ok = descent_ok && st.descent_ok;

    const bool tail_ok = std::abs(st.x.front()) <= params.tail_eps &&
                         std::abs(st.x.back()) <= params.tail_eps;
    if (tail_ok || !st.converged || attempt >= 3) break;
    carried = LatticeVec(lo, st.x);
    const index_t half = (hi - lo + 1) / 2;
    lo -= half;
    hi += half;
  }

  LatticeVec u(lo, st.x);
  rec.u = u;
  rec.window_lo = lo;
  rec.window_hi = hi;
  rec.iterations = total_iterations;
  rec.pg_norm = st.pg_norm;
  rec.converged = st.converged;
  rec.descent_ok = descent_ok;
  rec.note = st.note;
  rec.eta = total_energy(u, w, p, nl, lambda).j;
  rec.norm_x = norm_X(u, w, p);
  rec.u_max = u.max_value();
  rec.residual_inf = inactive_residual(u, box, w, p, nl, lambda);
  rec.certificates.claim2_bounds =
      u.min_value() >= -1e-10 && u.max_value() <= spec.c(n) + 1e-10;
  rec.certificates.residual_ok = rec.residual_inf <= params.tol_residual;
  rec.certificates.tail_ok = std::abs(u[lo]) <= params.tail_eps &&
                             std::abs(u[hi]) <= params.tail_eps;
  return rec;
}

// Solve for n = 1..N; each solve is warm-started with the previous minimizer
// (feasible since the boxes are nested), so eta is nonincreasing by
// construction. Per-n failures are recorded and do not abort later n.
inline std::vector<SolutionRecord> run_sequence(int N, double lambda,
                                                const OscillatorySpec& spec,
                                                const Nonlinearity& nl,
                                                const Weights& w, Exponent p,
                                                const SolverParams& params) {
  detail::require(N >= 1, "N must be >= 1");
  std::vector<SolutionRecord> records;
  records.reserve(static_cast<std::size_t>(N));
  std::optional<LatticeVec> prev;
  for (int n = 1; n <= N; ++n) {
    try {
      const LatticeVec* warm = prev.has_value() ? &*prev : nullptr;
      SolutionRecord rec =
          minimize_on_Wn(n, lambda, spec, nl, w, p, params, warm);
      if (rec.converged) prev = rec.u;
      records.push_back(std::move(rec));
    } catch (const std::runtime_error& e) {
      SolutionRecord failed;
      failed.n = n;
      failed.eta = std::numeric_limits<double>::quiet_NaN();
      failed.converged = false;
      failed.note = e.what();
      records.push_back(std::move(failed));
    }
  }
  return records;
}

struct BruteForceResult {
  LatticeVec u = LatticeVec::zero();
  double j = 0.0;
};

// Exhaustive minimum of J over value_grid^window restricted to the box.
// Test oracle; refuses more than 5 sites or 1e7 combinations.
inline BruteForceResult brute_force_min(index_t lo, index_t hi,
                                        std::span<const double> value_grid,
                                        double lambda, const Nonlinearity& nl,
                                        const Weights& w, Exponent p,
                                        const BoxSet& box) {
  detail::require(box.lower <= box.upper, "box must satisfy lower <= upper");
  const index_t sites = hi - lo + 1;
  detail::require(sites >= 1 && sites <= 5,
                  "brute force supports 1..5 sites only");
  std::vector<double> levels;
  for (double v : value_grid) {
    if (v >= box.lower && v <= box.upper) levels.push_back(v);
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  detail::require(!levels.empty(), "no grid values inside the box");
  double combos = 1.0;
  for (index_t i = 0; i < sites; ++i) combos *= static_cast<double>(levels.size());
  detail::require(combos <= 1e7, "brute force limited to 1e7 combinations");

  std::vector<std::size_t> idx(static_cast<std::size_t>(sites), 0);
  std::vector<double> vals(static_cast<std::size_t>(sites), levels[0]);
  BruteForceResult best;
  best.j = std::numeric_limits<double>::infinity();
  while (true) {
    const LatticeVec u(lo, vals);
    const double j = total_energy(u, w, p, nl, lambda).j;
    if (j < best.j) {
      best.j = j;
      best.u = u;
    }
    // odometer increment
    std::size_t pos = 0;
    while (pos < idx.size()) {
      if (++idx[pos] < levels.size()) {
        vals[pos] = levels[idx[pos]];
        break;
      }
      idx[pos] = 0;
      vals[pos] = levels[0];
      ++pos;
    }
    if (pos == idx.size()) break;
  }
  return best;
}

}  // namespace dpl
