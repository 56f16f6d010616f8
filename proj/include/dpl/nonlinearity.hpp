// Nonlinearity abstraction, the two oscillatory tent constructions, the
// logarithmic comparison family, and numeric probes for the oscillation
// hypotheses and the growth quantities B_plus/B_minus/B_zero.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "dpl/lattice.hpp"

namespace dpl {

// Evaluable pair (f, F) with F(k, t) the primitive of f(k, .) vanishing at 0.
// F must be supplied in closed form (or a construction-owned quadrature);
// energy evaluation never integrates.
struct Nonlinearity {
  std::function<double(index_t, double)> f;
  std::function<double(index_t, double)> F;
  bool vanishes_nonpositive = false;  // F(k, s) = 0 for s <= 0
  bool continuous = true;
  std::string name;
};

inline Nonlinearity zero_nonlinearity() {
  Nonlinearity nl;
  nl.f = [](index_t, double) { return 0.0; };
  nl.F = [](index_t, double) { return 0.0; };
  nl.vanishes_nonpositive = true;
  nl.continuous = true;
  nl.name = "zero";
  return nl;
}

// Sequence rule indexable for n >= 1.
class SeqRule {
 public:
  enum class Kind { Linear, Power, List };

  // a*n + b
  static SeqRule linear(double a, double b) {
    SeqRule r(Kind::Linear);
    r.a_ = a;
    r.b_ = b;
    return r;
  }
  // a*n^alpha + b
  static SeqRule power(double a, double alpha, double b) {
    SeqRule r(Kind::Power);
    r.a_ = a;
    r.alpha_ = alpha;
    r.b_ = b;
    return r;
  }
  // Explicit values for n = 1..values.size(), overflow rule beyond.
  static SeqRule list(std::vector<double> values, SeqRule overflow) {
    detail::require(!values.empty(), "sequence list must be nonempty");
    SeqRule r(Kind::List);
    r.values_ = std::move(values);
    r.overflow_ = std::make_shared<SeqRule>(std::move(overflow));
    return r;
  }

  double operator()(int n) const {
    detail::require(n >= 1, "sequence rules are indexed from n = 1");
    switch (kind_) {
      case Kind::Linear:
        return a_ * n + b_;
      case Kind::Power:
        return a_ * std::pow(static_cast<double>(n), alpha_) + b_;
      case Kind::List:
        if (n <= static_cast<int>(values_.size())) {
          return values_[static_cast<std::size_t>(n - 1)];
        }
        return (*overflow_)(n);
    }
    return 0.0;
  }

 private:
  explicit SeqRule(Kind k) : kind_(k) {}
  Kind kind_;
  double a_ = 0.0;
  double b_ = 0.0;
  double alpha_ = 1.0;
  std::vector<double> values_;
  std::shared_ptr<const SeqRule> overflow_;
};

// The driving sequences {c_n}, {d_n}, {h_n} with the interlacing
// 0 < c_n < d_n < c_{n+1}, indexable for n = 1..n_max (the c rule is also
// queried at n_max + 1). h may be rule-given or derived from (w, p).
class OscillatorySpec {
 public:
  OscillatorySpec(SeqRule c_rule, SeqRule d_rule, SeqRule h_rule, int n_max)
      : c_([c_rule](int n) { return c_rule(n); }),
        d_([d_rule](int n) { return d_rule(n); }),
        h_([h_rule](int n) { return h_rule(n); }),
        n_max_(n_max) {
    detail::require(n_max >= 1, "n_max must be >= 1");
    validate_ordering();
  }

  // h_n = (n + factor) * (a(n+1) + a(n) + b(n)) * c_{n+1}^p, the minimal
  // shape satisfying the single-site growth inequality with slack `factor`.
  static OscillatorySpec auto_h_single_site(SeqRule c_rule, SeqRule d_rule,
                                            double factor, const Weights& w,
                                            Exponent p, int n_max) {
    detail::require(factor > 0.0, "margin factor must be positive");
    const double pv = p.value();
    auto h = [c_rule, factor, w, pv](int n) {
      const double scale = w.a(n + 1) + w.a(n) + w.b(n);
      return (n + factor) * scale * std::pow(c_rule(n + 1), pv);
    };
    return OscillatorySpec(std::move(c_rule), std::move(d_rule), h, n_max);
  }

  // Minimal h making the cumulative inequality
  // sum_{k<=n} h_k > n * (a(1)+a(0)+b(0)) * c_{n+1}^p strict with the given
  // additive margin: sum_{k<=n} h_k = n * S * c_{n+1}^p + margin.
  static OscillatorySpec auto_h_cumulative(SeqRule c_rule, SeqRule d_rule,
                                           double margin, const Weights& w,
                                           Exponent p, int n_max) {
    detail::require(margin > 0.0, "margin must be positive");
    const double scale = w.a(1) + w.a(0) + w.b(0);
    const double pv = p.value();
    auto target = [c_rule, scale, pv, margin](int n) {
      if (n == 0) return 0.0;
      return n * scale * std::pow(c_rule(n + 1), pv) + margin;
    };
    auto h = [target](int n) { return target(n) - target(n - 1); };
    return OscillatorySpec(std::move(c_rule), std::move(d_rule), h, n_max);
  }

 private:
  OscillatorySpec(SeqRule c_rule, SeqRule d_rule,
                  std::function<double(int)> h_fn, int n_max)
      : c_([c_rule](int n) { return c_rule(n); }),
        d_([d_rule](int n) { return d_rule(n); }),
        h_(std::move(h_fn)),
        n_max_(n_max) {
    detail::require(n_max >= 1, "n_max must be >= 1");
    validate_ordering();
  }

 public:
  double c(int n) const { return c_(n); }
  double d(int n) const { return d_(n); }
  double h(int n) const { return h_(n); }
  int n_max() const { return n_max_; }

  double cumulative_h(int n) const {
    detail::CompensatedSum s;
    for (int k = 1; k <= n; ++k) s.add(h_(k));
    return s.value();
  }

  // 0 < c_n < d_n < c_{n+1} with c strictly increasing over the queried range.
  void validate_ordering() const {
    detail::require(c_(1) > 0.0, "need 0 < c_1");
    for (int n = 1; n <= n_max_; ++n) {
      detail::require(c_(n) < d_(n), "need c_n < d_n for all n");
      detail::require(d_(n) < c_(n + 1), "need d_n < c_{n+1} for all n");
    }
  }

  // Single-site growth inequality required by the first tent construction.
  void validate_single_site(const Weights& w, Exponent p) const {
    for (int n = 1; n <= n_max_; ++n) {
      const double scale = w.a(n + 1) + w.a(n) + w.b(n);
      const double bound = n * scale * std::pow(c_(n + 1), p.value());
      detail::require(h_(n) > bound,
                      "need h_n > n*(a(n+1)+a(n)+b(n))*c_{n+1}^p for n = " +
                          std::to_string(n));
    }
  }

  // Cumulative growth inequality required by the stacked tent construction.
  void validate_cumulative(const Weights& w, Exponent p) const {
    const double scale = w.a(1) + w.a(0) + w.b(0);
    for (int n = 1; n <= n_max_; ++n) {
      detail::require(h_(n) >= 0.0, "need h_n >= 0 for n = " + std::to_string(n));
      const double bound = n * scale * std::pow(c_(n + 1), p.value());
      detail::require(cumulative_h(n) > bound,
                      "need sum h_k > n*(a(1)+a(0)+b(0))*c_{n+1}^p for n = " +
                          std::to_string(n));
    }
  }

 private:
  std::function<double(int)> c_;
  std::function<double(int)> d_;
  std::function<double(int)> h_;
  int n_max_;
};

namespace detail {

// Tent of unit-normalized area h on [lo, hi]:
//   f(t) = (2h/w^2) * (w - 2|t - mid|),  w = hi - lo,
// with the piecewise-quadratic primitive in closed form.
struct TentBump {
  double lo = 0.0;
  double hi = 0.0;
  double h = 0.0;

  double f(double t) const {
    if (t <= lo || t >= hi) return 0.0;
    const double w = hi - lo;
    const double mid = 0.5 * (lo + hi);
    return (2.0 * h / (w * w)) * (w - 2.0 * std::abs(t - mid));
  }

  double F(double t) const {
    if (t <= lo) return 0.0;
    if (t >= hi) return h;
    const double w = hi - lo;
    const double mid = 0.5 * (lo + hi);
    if (t <= mid) {
      const double x = t - lo;
      return 2.0 * h * x * x / (w * w);
    }
    const double x = hi - t;
    return h - 2.0 * h * x * x / (w * w);
  }
};

}  // namespace detail

// Tents marching rightward in k: site k >= 1 carries one tent of area h_k on
// [d_k, c_{k+1}]; nonpositive sites carry nothing.
inline Nonlinearity make_example1(const OscillatorySpec& spec, const Weights& w,
                                  Exponent p) {
  spec.validate_single_site(w, p);
  auto bump = [spec](index_t k) {
    const int n = static_cast<int>(k);
    return detail::TentBump{spec.d(n), spec.c(n + 1), spec.h(n)};
  };
  Nonlinearity nl;
  nl.f = [bump](index_t k, double t) {
    if (k <= 0) return 0.0;
    return bump(k).f(t);
  };
  nl.F = [bump](index_t k, double t) {
    if (k <= 0) return 0.0;
    return bump(k).F(t);
  };
  nl.vanishes_nonpositive = true;
  nl.continuous = true;
  nl.name = "example1";
  return nl;
}

// All tents stacked on site 0: the n-th has area h_n on [d_n, c_{n+1}].
// The tent coefficient is normalized so each integral is exactly h_n, and
// therefore F(0, c_{n+1}) = sum_{k<=n} h_k in closed form.
inline Nonlinearity make_example2(const OscillatorySpec& spec, const Weights& w,
                                  Exponent p) {
  spec.validate_cumulative(w, p);

  struct Site0 {
    OscillatorySpec spec;
    std::vector<double> d, c_next, h, cum;  // index n-1 for n = 1..n_max

    explicit Site0(const OscillatorySpec& s) : spec(s) {
      double acc = 0.0;
      for (int n = 1; n <= s.n_max(); ++n) {
        d.push_back(s.d(n));
        c_next.push_back(s.c(n + 1));
        h.push_back(s.h(n));
        acc += s.h(n);
        cum.push_back(acc);
      }
    }

    // Locate the first precomputed tent whose right edge is >= t; walk the
    // rules beyond n_max on demand.
    double eval(double t, bool primitive) const {
      if (t <= d[0]) return 0.0;
      auto it = std::lower_bound(c_next.begin(), c_next.end(), t);
      if (it != c_next.end()) {
        const std::size_t i = static_cast<std::size_t>(it - c_next.begin());
        const detail::TentBump tent{d[i], c_next[i], h[i]};
        const double below = i == 0 ? 0.0 : cum[i - 1];
        return primitive ? below + tent.F(t) : tent.f(t);
      }
      // Beyond the precomputed range.
      double below = cum.back();
      int n = spec.n_max() + 1;
      while (true) {
        const detail::TentBump tent{spec.d(n), spec.c(n + 1), spec.h(n)};
        if (t <= tent.hi) {
          return primitive ? below + tent.F(t) : tent.f(t);
        }
        below += tent.h;
        ++n;
        detail::require(n < (1 << 24), "tent lookup ran away; t too large");
      }
    }
  };

  auto site0 = std::make_shared<const Site0>(spec);
  Nonlinearity nl;
  nl.f = [site0](index_t k, double t) {
    if (k != 0) return 0.0;
    return site0->eval(t, false);
  };
  nl.F = [site0](index_t k, double t) {
    if (k != 0) return 0.0;
    return site0->eval(t, true);
  };
  nl.vanishes_nonpositive = true;
  nl.continuous = true;
  nl.name = "example2";
  return nl;
}

namespace detail {

// Adaptive Simpson on [a, b], standard halving with an absolute/relative mix.
inline double simpson_slice(double a, double fa, double b, double fb,
                            double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& g,
                                   double a, double fa, double b, double fb,
                                   double m, double fm, double whole,
                                   double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = g(lm);
  const double frm = g(rm);
  const double left = simpson_slice(a, fa, m, fm, flm);
  const double right = simpson_slice(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(g, a, fa, m, fm, lm, flm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(g, m, fm, b, fb, rm, frm, right, 0.5 * tol,
                              depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& g, double a,
                               double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = g(a);
  const double fb = g(b);
  const double fm = g(m);
  const double whole = simpson_slice(a, fa, b, fb, fm);
  return adaptive_simpson_rec(g, a, fa, b, fb, m, fm, whole, tol, 48);
}

}  // namespace detail

// f(k, t) = k^{-mu} |t|^{p-2} t ln(1 + |t|^nu) for k >= 1, zero for k <= 0.
// The primitive has no elementary closed form; it is computed by adaptive
// quadrature and cached per |t| (the integrand is even in t).
inline Nonlinearity make_kuang_family(double mu, double nu, Exponent p) {
  detail::require(std::isfinite(mu) && mu > 1.0, "kuang family needs mu > 1");
  detail::require(std::isfinite(nu) && nu >= 1.0, "kuang family needs nu >= 1");

  struct Cache {
    mutable std::mutex m;
    mutable std::map<double, double> g;  // |t| -> integral of s^{p-1} ln(1+s^nu)
  };
  auto cache = std::make_shared<Cache>();
  const double pv = p.value();

  auto g_of = [cache, pv, nu](double tabs) {
    if (tabs == 0.0) return 0.0;
    {
      std::scoped_lock lock(cache->m);
      auto it = cache->g.find(tabs);
      if (it != cache->g.end()) return it->second;
    }
    auto integrand = [pv, nu](double s) {
      if (s <= 0.0) return 0.0;
      return std::pow(s, pv - 1.0) * std::log1p(std::pow(s, nu));
    };
    const double val =
        detail::adaptive_simpson(integrand, 0.0, tabs, 1e-13 * std::max(1.0, tabs));
    std::scoped_lock lock(cache->m);
    cache->g.emplace(tabs, val);
    return val;
  };

  Nonlinearity nl;
  nl.f = [mu, nu, pv](index_t k, double t) {
    if (k <= 0 || t == 0.0) return 0.0;
    const double kw = std::pow(static_cast<double>(k), -mu);
    return kw * std::copysign(std::pow(std::abs(t), pv - 1.0), t) *
           std::log1p(std::pow(std::abs(t), nu));
  };
  nl.F = [mu, g_of](index_t k, double t) {
    if (k <= 0 || t == 0.0) return 0.0;
    const double kw = std::pow(static_cast<double>(k), -mu);
    return kw * g_of(std::abs(t));  // even in t
  };
  nl.vanishes_nonpositive = false;
  nl.continuous = true;
  nl.name = "kuang";
  return nl;
}

// ---------------------------------------------------------------------------
// Hypothesis probes
// ---------------------------------------------------------------------------

// Decay of |f(k, t)| / |t|^{p-1} as t -> 0, uniformly over k.
struct F1Report {
  std::vector<double> t_grid;      // decreasing positive
  std::vector<double> sup_ratios;  // sup over k of max(|f(k,t)|,|f(k,-t)|)/t^{p-1}
  bool monotone_nonincreasing = false;
  double final_ratio = 0.0;
  double limit_tol = 0.0;
  bool pass = false;
};

inline F1Report check_F1(const Nonlinearity& nl, Exponent p,
                         std::vector<double> t_grid, index_t k_lo, index_t k_hi,
                         double limit_tol = 1e-2) {
  detail::require(!t_grid.empty(), "F1 needs a nonempty t grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    detail::require(t_grid[i] > 0.0, "F1 grid must be positive");
    if (i > 0) detail::require(t_grid[i] < t_grid[i - 1], "F1 grid must decrease");
  }
  F1Report r;
  r.t_grid = std::move(t_grid);
  r.limit_tol = limit_tol;
  for (double t : r.t_grid) {
    double sup = 0.0;
    const double denom = std::pow(t, p.value() - 1.0);
    for (index_t k = k_lo; k <= k_hi; ++k) {
      sup = std::max(sup, std::abs(nl.f(k, t)) / denom);
      sup = std::max(sup, std::abs(nl.f(k, -t)) / denom);
    }
    r.sup_ratios.push_back(sup);
  }
  r.monotone_nonincreasing = true;
  for (std::size_t i = 1; i < r.sup_ratios.size(); ++i) {
    if (r.sup_ratios[i] > r.sup_ratios[i - 1] + 1e-12) {
      r.monotone_nonincreasing = false;
      break;
    }
  }
  r.final_ratio = r.sup_ratios.back();
  r.pass = r.monotone_nonincreasing && r.final_ratio <= limit_tol;
  return r;
}

// Sign condition f <= 0 on every interval [c_n, d_n].
struct F2Report {
  double max_value = -std::numeric_limits<double>::infinity();
  index_t witness_k = 0;
  int witness_n = 0;
  double witness_t = 0.0;
  bool pass = false;
};

inline F2Report check_F2(const Nonlinearity& nl, const OscillatorySpec& spec,
                         int samples_per_interval, index_t k_lo, index_t k_hi) {
  detail::require(samples_per_interval >= 3,
                  "F2 needs at least 3 samples per interval");
  F2Report r;
  for (int n = 1; n <= spec.n_max(); ++n) {
    const double a = spec.c(n);
    const double b = spec.d(n);
    for (index_t k = k_lo; k <= k_hi; ++k) {
      for (int i = 0; i < samples_per_interval; ++i) {
        const double t = a + (b - a) * i / (samples_per_interval - 1);
        const double v = nl.f(k, t);
        if (v > r.max_value) {
          r.max_value = v;
          r.witness_k = k;
          r.witness_n = n;
          r.witness_t = t;
        }
      }
    }
  }
  r.pass = r.max_value <= 0.0;
  return r;
}

// Summability surrogate for sup_{t in [r, d_n]} |F(., t)| in l1: per-site
// maxima s_k for |k| <= K, partial sums, and the mass fraction carried by
// the outer half of the index range.
struct F3Report {
  index_t K = 0;
  std::vector<double> s;             // s[k + K] for k = -K..K
  std::vector<double> partial_sums;  // over |k| <= j, j = 0..K
  double total = 0.0;
  double tail_sum = 0.0;   // over K/2 < |k| <= K
  double tail_ratio = 0.0; // tail_sum / total (0 when total == 0)
};

inline F3Report check_F3(const Nonlinearity& nl, const OscillatorySpec& spec,
                         double r, int n, index_t K, int t_samples = 65) {
  detail::require(r < 0.0, "F3 probe needs r < 0");
  detail::require(n >= 1 && n <= spec.n_max(), "F3 probe needs 1 <= n <= n_max");
  detail::require(K >= 2 && t_samples >= 2, "F3 probe grid too small");
  F3Report rep;
  rep.K = K;
  const double d_n = spec.d(n);
  rep.s.assign(static_cast<std::size_t>(2 * K + 1), 0.0);
  for (index_t k = -K; k <= K; ++k) {
    double m = 0.0;
    for (int i = 0; i < t_samples; ++i) {
      const double t = r + (d_n - r) * i / (t_samples - 1);
      m = std::max(m, std::abs(nl.F(k, t)));
    }
    rep.s[static_cast<std::size_t>(k + K)] = m;
  }
  detail::CompensatedSum total;
  rep.partial_sums.resize(static_cast<std::size_t>(K + 1));
  total.add(rep.s[static_cast<std::size_t>(K)]);  // k = 0
  rep.partial_sums[0] = total.value();
  for (index_t j = 1; j <= K; ++j) {
    total.add(rep.s[static_cast<std::size_t>(K - j)]);
    total.add(rep.s[static_cast<std::size_t>(K + j)]);
    rep.partial_sums[static_cast<std::size_t>(j)] = total.value();
  }
  rep.total = total.value();
  const index_t half = K / 2;
  detail::CompensatedSum tail;
  for (index_t j = half + 1; j <= K; ++j) {
    tail.add(rep.s[static_cast<std::size_t>(K - j)]);
    tail.add(rep.s[static_cast<std::size_t>(K + j)]);
  }
  rep.tail_sum = tail.value();
  rep.tail_ratio = rep.total > 0.0 ? rep.tail_sum / rep.total : 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Growth-rate probe for B_plus / B_minus / B_zero
// ---------------------------------------------------------------------------

// One banded tail estimate: the maximum of F(k,t)/((a(k+1)+a(k)+b(k)) t^p)
// over sampled points beyond (k_hi, t_hi) but not beyond the next threshold
// pair. Values are lower bounds of limsup-type quantities, never exact.
struct BandEstimate {
  index_t k_hi = 0;
  double t_hi = 0.0;
  double value = 0.0;
  index_t argmax_k = 0;
  double argmax_t = 0.0;
  int samples = 0;
};

struct BProbeReport {
  std::vector<index_t> k_grid;
  std::vector<double> t_grid;
  std::vector<BandEstimate> plus;
  std::vector<BandEstimate> minus;
  std::vector<BandEstimate> zero;
  double B_plus_est = 0.0;
  double B_minus_est = 0.0;
  double B_zero_est = 0.0;
  double B_est = 0.0;
  // Divergence evidence: band values strictly increase and the argmax moves
  // the way the quantity demands (outward for B_+/B_-, fixed site for B_0).
  bool plus_increasing = false;
  bool minus_increasing = false;
  bool zero_increasing = false;
};

namespace detail {

inline bool strictly_increasing_bands(const std::vector<BandEstimate>& bands) {
  if (bands.size() < 2) return false;
  for (const auto& b : bands) {
    if (b.samples == 0) return false;
  }
  for (std::size_t i = 1; i < bands.size(); ++i) {
    if (!(bands[i].value > bands[i - 1].value)) return false;
  }
  return true;
}

}  // namespace detail

inline BProbeReport estimate_B(const Nonlinearity& nl, const Weights& w,
                               Exponent p, std::vector<index_t> k_grid,
                               std::vector<double> t_grid,
                               int n_thresholds = 4) {
  detail::require(!k_grid.empty() && !t_grid.empty(), "B probe needs grids");
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    detail::require(k_grid[i] >= 0, "B probe k grid must be nonnegative");
    if (i > 0) detail::require(k_grid[i] > k_grid[i - 1], "k grid must increase");
  }
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    detail::require(t_grid[i] > 0.0, "B probe t grid must be positive");
    if (i > 0) detail::require(t_grid[i] > t_grid[i - 1], "t grid must increase");
  }

  BProbeReport rep;
  rep.k_grid = std::move(k_grid);
  rep.t_grid = std::move(t_grid);

  auto ratio = [&](index_t k, double t) {
    const double scale = w.a(k + 1) + w.a(k) + w.b(k);
    return nl.F(k, t) / (scale * detail::pow_abs(t, p.value()));
  };

  std::vector<index_t> pos;
  for (index_t k : rep.k_grid) {
    if (k >= 1) pos.push_back(k);
  }
  const int m = std::max(1, std::min({n_thresholds, static_cast<int>(pos.size()),
                                      static_cast<int>(rep.t_grid.size())}));
  std::vector<index_t> kappa(static_cast<std::size_t>(m));
  std::vector<double> tau(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    kappa[static_cast<std::size_t>(i)] =
        pos.empty() ? 0 : pos[pos.size() * static_cast<std::size_t>(i) / m];
    tau[static_cast<std::size_t>(i)] =
        rep.t_grid[rep.t_grid.size() * static_cast<std::size_t>(i) / m];
  }

  auto in_tail = [&](int i, index_t k, double t, int side) {
    // side: +1 plus band (k >= kappa), -1 minus band (k <= -kappa), 0 zero
    // band (any k).
    if (t < tau[static_cast<std::size_t>(i)]) return false;
    if (side > 0) return k >= kappa[static_cast<std::size_t>(i)];
    if (side < 0) return k <= -kappa[static_cast<std::size_t>(i)];
    return true;
  };

  auto build = [&](int side) {
    std::vector<BandEstimate> bands;
    for (int i = 0; i < m; ++i) {
      BandEstimate b;
      b.k_hi = side == 0 ? 0 : kappa[static_cast<std::size_t>(i)];
      b.t_hi = tau[static_cast<std::size_t>(i)];
      double best = -std::numeric_limits<double>::infinity();
      for (index_t kk : rep.k_grid) {
        for (int sign : {+1, -1}) {
          const index_t k = sign * kk;
          if (sign < 0 && kk == 0) continue;
          for (double t : rep.t_grid) {
            if (!in_tail(i, k, t, side)) continue;
            if (i + 1 < m && in_tail(i + 1, k, t, side)) continue;
            const double v = ratio(k, t);
            ++b.samples;
            if (v > best) {
              best = v;
              b.argmax_k = k;
              b.argmax_t = t;
            }
          }
        }
      }
      b.value = b.samples > 0 ? best : 0.0;
      bands.push_back(b);
    }
    return bands;
  };

  rep.plus = build(+1);
  rep.minus = build(-1);
  rep.zero = build(0);

  rep.B_plus_est = rep.plus.empty() ? 0.0 : rep.plus.back().value;
  rep.B_minus_est = rep.minus.empty() ? 0.0 : rep.minus.back().value;
  rep.B_zero_est = rep.zero.empty() ? 0.0 : rep.zero.back().value;
  rep.B_est = std::max({rep.B_plus_est, rep.B_minus_est, rep.B_zero_est});

  auto argmax_marches = [](const std::vector<BandEstimate>& bands, int dir) {
    for (std::size_t i = 1; i < bands.size(); ++i) {
      if (dir > 0 && !(bands[i].argmax_k > bands[i - 1].argmax_k)) return false;
      if (dir < 0 && !(bands[i].argmax_k < bands[i - 1].argmax_k)) return false;
      if (dir == 0 && bands[i].argmax_k != bands[i - 1].argmax_k) return false;
    }
    return true;
  };

  rep.plus_increasing =
      detail::strictly_increasing_bands(rep.plus) && argmax_marches(rep.plus, +1);
  rep.minus_increasing = detail::strictly_increasing_bands(rep.minus) &&
                         argmax_marches(rep.minus, -1);
  rep.zero_increasing =
      detail::strictly_increasing_bands(rep.zero) && argmax_marches(rep.zero, 0);
  return rep;
}

}  // namespace dpl
