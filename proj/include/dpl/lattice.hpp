// Sequence-space primitives: weight rules, finitely supported lattice
// vectors, the odd power map, and the weighted norm with its embedding chain.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dpl {

using index_t = std::int64_t;

namespace detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Neumaier variant of compensated summation. Adding exact zeros leaves the
// state untouched, so zero-padded windows sum bit-identically.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double pow_abs(double t, double p) {
  if (p == 2.0) return t * t;
  return std::pow(std::abs(t), p);
}

}  // namespace detail

// Growth exponent p > 1 of the power map and the norm.
class Exponent {
 public:
  explicit Exponent(double p) : p_(p) {
    detail::require(std::isfinite(p) && p > 1.0,
                    "exponent must be a finite real with p > 1");
  }
  double value() const { return p_; }

 private:
  double p_;
};

// Odd power map |t|^{p-2} t, extended by continuity to 0 at t = 0.
inline double phi_p(double t, Exponent p) {
  if (t == 0.0) return 0.0;
  if (p.value() == 2.0) return t;
  return std::copysign(std::pow(std::abs(t), p.value() - 1.0), t);
}

// Rule-defined positive weight sequence on the integers. The rule, not a
// sample, supplies the exact lower bound min_value().
class WeightSeq {
 public:
  enum class Kind { Constant, AffineAbs, Power, Table };

  static WeightSeq constant(double c) {
    detail::require(std::isfinite(c) && c > 0.0,
                    "constant weight must be positive");
    WeightSeq w(Kind::Constant);
    w.c0_ = c;
    return w;
  }

  // c0 + c1*|k|
  static WeightSeq affine_abs(double c0, double c1) {
    detail::require(std::isfinite(c0) && c0 > 0.0,
                    "affine-abs weight needs c0 > 0");
    detail::require(std::isfinite(c1) && c1 >= 0.0,
                    "affine-abs weight needs c1 >= 0");
    WeightSeq w(Kind::AffineAbs);
    w.c0_ = c0;
    w.c1_ = c1;
    return w;
  }

  // c0 + c1*|k|^alpha
  static WeightSeq power(double c0, double c1, double alpha) {
    detail::require(std::isfinite(c0) && c0 > 0.0, "power weight needs c0 > 0");
    detail::require(std::isfinite(c1) && c1 >= 0.0,
                    "power weight needs c1 >= 0");
    detail::require(std::isfinite(alpha) && alpha > 0.0,
                    "power weight needs alpha > 0");
    WeightSeq w(Kind::Power);
    w.c0_ = c0;
    w.c1_ = c1;
    w.alpha_ = alpha;
    return w;
  }

  // Explicit values on [lo, lo + values.size()), default rule elsewhere.
  static WeightSeq table(std::vector<double> values, index_t lo,
                         WeightSeq fallback) {
    detail::require(!values.empty(), "weight table must be nonempty");
    for (double v : values) {
      detail::require(std::isfinite(v) && v > 0.0,
                      "weight table entries must be positive");
    }
    WeightSeq w(Kind::Table);
    w.table_ = std::move(values);
    w.table_lo_ = lo;
    w.fallback_ = std::make_shared<WeightSeq>(std::move(fallback));
    return w;
  }

  double operator()(index_t k) const {
    switch (kind_) {
      case Kind::Constant:
        return c0_;
      case Kind::AffineAbs:
        return c0_ + c1_ * static_cast<double>(std::llabs(k));
      case Kind::Power:
        return c0_ + c1_ * std::pow(static_cast<double>(std::llabs(k)), alpha_);
      case Kind::Table: {
        const index_t off = k - table_lo_;
        if (off >= 0 && off < static_cast<index_t>(table_.size())) {
          return table_[static_cast<std::size_t>(off)];
        }
        return (*fallback_)(k);
      }
    }
    return c0_;
  }

  // Exact infimum over all of Z, read off the rule.
  double min_value() const {
    switch (kind_) {
      case Kind::Constant:
      case Kind::AffineAbs:
      case Kind::Power:
        return c0_;
      case Kind::Table: {
        double m = fallback_->min_value();
        for (double v : table_) m = std::min(m, v);
        return m;
      }
    }
    return c0_;
  }

  Kind kind() const { return kind_; }

  WeightSeq& declare_coercive(index_t kstar) {
    coercive_ = true;
    kstar_ = kstar;
    return *this;
  }
  bool coercive() const { return coercive_; }
  index_t coercive_from() const { return kstar_; }

  // Testable surrogate for b(k) -> +inf: nondecreasing in |k| beyond kstar,
  // sampled on both signs up to k_upto.
  bool nondecreasing_beyond(index_t kstar, index_t k_upto) const {
    for (index_t k = kstar; k < k_upto; ++k) {
      if ((*this)(k + 1) < (*this)(k)) return false;
      if ((*this)(-k - 1) < (*this)(-k)) return false;
    }
    return true;
  }

 private:
  explicit WeightSeq(Kind kind) : kind_(kind) {}

  Kind kind_;
  double c0_ = 0.0;
  double c1_ = 0.0;
  double alpha_ = 1.0;
  std::vector<double> table_;
  index_t table_lo_ = 0;
  std::shared_ptr<const WeightSeq> fallback_;
  bool coercive_ = false;
  index_t kstar_ = 0;
};

// The (a, b) pair of Eq.-defining weights: a scales the difference term,
// b the potential term.
struct Weights {
  WeightSeq a;
  WeightSeq b;
};

// Finitely supported real function on Z: values on [offset, offset+n),
// exact zero outside. Immutable after construction.
class LatticeVec {
 public:
  LatticeVec(index_t offset, std::vector<double> values)
      : offset_(offset), values_(std::move(values)) {
    detail::require(!values_.empty(), "lattice vector window must be nonempty");
    for (double v : values_) {
      detail::require(std::isfinite(v), "lattice vector values must be finite");
    }
  }

  static LatticeVec zero() { return LatticeVec(0, {0.0}); }
  static LatticeVec spike(index_t k0, double t) { return LatticeVec(k0, {t}); }

  double operator[](index_t k) const {
    const index_t off = k - offset_;
    if (off < 0 || off >= static_cast<index_t>(values_.size())) return 0.0;
    return values_[static_cast<std::size_t>(off)];
  }

  index_t lo() const { return offset_; }
  index_t hi() const { return offset_ + static_cast<index_t>(values_.size()) - 1; }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }

  // Copy with u(k) = v; window extended with zeros if k lies outside.
  LatticeVec with(index_t k, double v) const {
    const index_t lo2 = std::min(lo(), k);
    const index_t hi2 = std::max(hi(), k);
    std::vector<double> vals(static_cast<std::size_t>(hi2 - lo2 + 1), 0.0);
    for (index_t j = lo(); j <= hi(); ++j) {
      vals[static_cast<std::size_t>(j - lo2)] = (*this)[j];
    }
    vals[static_cast<std::size_t>(k - lo2)] = v;
    return LatticeVec(lo2, std::move(vals));
  }

  // Zero-padded copy on an enclosing window.
  LatticeVec embedded(index_t lo2, index_t hi2) const {
    detail::require(lo2 <= lo() && hi2 >= hi(),
                    "embedding window must contain the current window");
    std::vector<double> vals(static_cast<std::size_t>(hi2 - lo2 + 1), 0.0);
    for (index_t j = lo(); j <= hi(); ++j) {
      vals[static_cast<std::size_t>(j - lo2)] = (*this)[j];
    }
    return LatticeVec(lo2, std::move(vals));
  }

  // Minimal window carrying the same induced function.
  LatticeVec trimmed() const {
    index_t a = lo();
    index_t b = hi();
    while (a < b && (*this)[a] == 0.0) ++a;
    while (b > a && (*this)[b] == 0.0) --b;
    std::vector<double> vals(static_cast<std::size_t>(b - a + 1));
    for (index_t j = a; j <= b; ++j) {
      vals[static_cast<std::size_t>(j - a)] = (*this)[j];
    }
    return LatticeVec(a, std::move(vals));
  }

  double max_value() const { return *std::max_element(values_.begin(), values_.end()); }
  double min_value() const { return *std::min_element(values_.begin(), values_.end()); }
  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  // Equality of induced functions, regardless of window placement.
  friend bool operator==(const LatticeVec& x, const LatticeVec& y) {
    const index_t a = std::min(x.lo(), y.lo());
    const index_t b = std::max(x.hi(), y.hi());
    for (index_t k = a; k <= b; ++k) {
      if (x[k] != y[k]) return false;
    }
    return true;
  }

 private:
  index_t offset_;
  std::vector<double> values_;
};

inline double forward_diff(const LatticeVec& u, index_t k) {
  return u[k] - u[k - 1];
}

// Sum a(k)|du(k-1)|^p + b(k)|u(k)|^p over the window padded by one index on
// each side; every term outside is exactly zero, so the value is exact, not
// truncated. Left-to-right compensated order, deterministic.
inline double norm_X_pow(const LatticeVec& u, const Weights& w, Exponent p) {
  detail::CompensatedSum s;
  for (index_t k = u.lo() - 1; k <= u.hi() + 1; ++k) {
    s.add(w.a(k) * detail::pow_abs(forward_diff(u, k), p.value()));
    s.add(w.b(k) * detail::pow_abs(u[k], p.value()));
  }
  return s.value();
}

inline double norm_X(const LatticeVec& u, const Weights& w, Exponent p) {
  return std::pow(norm_X_pow(u, w, p), 1.0 / p.value());
}

inline double norm_lp(const LatticeVec& u, Exponent p) {
  detail::CompensatedSum s;
  for (double v : u.values()) s.add(detail::pow_abs(v, p.value()));
  return std::pow(s.value(), 1.0 / p.value());
}

inline double norm_linf(const LatticeVec& u) { return u.max_abs(); }

struct EmbeddingReport {
  double linf = 0.0;
  double lp = 0.0;
  double weighted_bound = 0.0;  // b0^{-1/p} * norm_X
  bool holds = false;
};

// Checks the chain linf <= lp <= b0^{-1/p} * norm_X with 1e-12 relative slack.
inline EmbeddingReport embedding_check(const LatticeVec& u, const Weights& w,
                                       Exponent p) {
  const double b0 = w.b.min_value();
  detail::require(b0 > 0.0, "embedding requires b0 > 0");
  EmbeddingReport r;
  r.linf = norm_linf(u);
  r.lp = norm_lp(u, p);
  r.weighted_bound = std::pow(b0, -1.0 / p.value()) * norm_X(u, w, p);
  const double slack = 1e-12;
  r.holds = r.linf <= r.lp * (1.0 + slack) &&
            r.lp <= r.weighted_bound * (1.0 + slack);
  return r;
}

}  // namespace dpl
