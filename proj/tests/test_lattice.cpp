#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "dpl/lattice.hpp"

using namespace dpl;
using Catch::Approx;

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Weights d1_weights() {
  return Weights{WeightSeq::constant(1.0), WeightSeq::affine_abs(2.0, 1.0)};
}

LatticeVec random_vec(std::mt19937_64& rng, index_t lo, index_t hi, double a,
                      double b) {
  std::vector<double> vals(static_cast<std::size_t>(hi - lo + 1));
  for (double& v : vals) v = a + (b - a) * uniform01(rng);
  return LatticeVec(lo, std::move(vals));
}

}  // namespace

TEST_CASE("phi_p pinned values") {
  CHECK(phi_p(3.0, Exponent(2.0)) == 3.0);
  CHECK(phi_p(0.0, Exponent(1.3)) == 0.0);
  CHECK(phi_p(-2.0, Exponent(3.0)) == -4.0);
}

TEST_CASE("phi_p is odd") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const double t = -5.0 + 10.0 * uniform01(rng);
    const double p = 1.0 + 1e-3 + 3.0 * uniform01(rng);
    const Exponent ex(p);
    CHECK(phi_p(-t, ex) == -phi_p(t, ex));
  }
}

TEST_CASE("exponent rejects p <= 1") {
  CHECK_THROWS_AS(Exponent(1.0), std::invalid_argument);
  CHECK_THROWS_AS(Exponent(0.5), std::invalid_argument);
  CHECK_NOTHROW(Exponent(1.0001));
}

TEST_CASE("forward differences with zero extension") {
  const LatticeVec u = LatticeVec::spike(0, 1.0);
  CHECK(forward_diff(u, 0) == 1.0);
  CHECK(forward_diff(u, 1) == -1.0);
  const LatticeVec z = LatticeVec::zero();
  for (index_t k = -3; k <= 3; ++k) CHECK(forward_diff(z, k) == 0.0);
}

TEST_CASE("weighted norm on the pinned spike configuration") {
  const Weights w = d1_weights();
  const Exponent p(2.0);
  CHECK(norm_X(LatticeVec::zero(), w, p) == 0.0);
  // a(0) + a(1) + b(0) = 1 + 1 + 2 = 4, so the norm is 2.
  CHECK(norm_X(LatticeVec::spike(0, 1.0), w, p) == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("weighted norm is absolutely homogeneous") {
  const Weights w = d1_weights();
  std::mt19937_64 rng(11);
  for (double pv : {2.0, 2.5, 3.0}) {
    const Exponent p(pv);
    for (int i = 0; i < 50; ++i) {
      const LatticeVec u = random_vec(rng, -6, 6, -1.0, 1.0);
      const double c = -3.0 + 6.0 * uniform01(rng);
      std::vector<double> scaled(u.values().begin(), u.values().end());
      for (double& v : scaled) v *= c;
      const LatticeVec cu(u.lo(), scaled);
      CHECK(norm_X(cu, w, p) ==
            Approx(std::abs(c) * norm_X(u, w, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("window extension changes no norm") {
  const Weights w = d1_weights();
  std::mt19937_64 rng(13);
  for (int i = 0; i < 50; ++i) {
    const LatticeVec u = random_vec(rng, -4, 4, -1.0, 1.0);
    const LatticeVec big = u.embedded(-20, 20);
    for (double pv : {2.0, 2.7}) {
      const Exponent p(pv);
      CHECK(norm_X(big, w, p) == Approx(norm_X(u, w, p)).epsilon(1e-15));
      CHECK(norm_lp(big, p) == Approx(norm_lp(u, p)).epsilon(1e-15));
      CHECK(norm_linf(big) == norm_linf(u));
    }
  }
}

TEST_CASE("p=2 norm agrees with an independent two-pass quadratic form") {
  const Weights w = d1_weights();
  const Exponent p(2.0);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const LatticeVec u = random_vec(rng, -8, 8, -2.0, 2.0);
    double qa = 0.0;
    for (index_t k = u.lo(); k <= u.hi() + 1; ++k) {
      const double d = u[k] - u[k - 1];
      qa += w.a(k) * d * d;
    }
    double qb = 0.0;
    for (index_t k = u.lo(); k <= u.hi(); ++k) {
      qb += w.b(k) * u[k] * u[k];
    }
    const double n = norm_X(u, w, p);
    CHECK(n * n == Approx(qa + qb).epsilon(1e-12));
  }
}

TEST_CASE("lp and sup norms") {
  const Exponent p2(2.0);
  const LatticeVec spike = LatticeVec::spike(0, 1.0);
  CHECK(norm_lp(spike, p2) == 1.0);
  CHECK(norm_linf(spike) == 1.0);
  const LatticeVec pm(0, {1.0, -1.0});
  CHECK(norm_lp(pm, p2) == Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(norm_linf(pm) == 1.0);
  CHECK(norm_lp(LatticeVec::zero(), p2) == 0.0);
  CHECK(norm_linf(LatticeVec::zero()) == 0.0);
}

TEST_CASE("embedding chain on the pinned configuration") {
  const Weights w = d1_weights();
  const Exponent p(2.0);
  const EmbeddingReport r = embedding_check(LatticeVec::spike(0, 1.0), w, p);
  CHECK(r.holds);
  CHECK(r.linf == 1.0);
  CHECK(r.lp == 1.0);
  CHECK(r.weighted_bound == Approx(std::sqrt(2.0)).epsilon(1e-14));

  const EmbeddingReport z = embedding_check(LatticeVec::zero(), w, p);
  CHECK(z.holds);
  CHECK(z.linf == 0.0);
}

TEST_CASE("embedding chain holds on 1000 random vectors") {
  const Weights w = d1_weights();
  std::mt19937_64 rng(23);
  for (double pv : {2.0, 2.5}) {
    const Exponent p(pv);
    for (int i = 0; i < 1000; ++i) {
      const LatticeVec u = random_vec(rng, -20, 20, -1.0, 1.0);
      CHECK(embedding_check(u, w, p).holds);
    }
  }
}

TEST_CASE("lattice vectors compare by induced function") {
  const LatticeVec a(0, {0.0, 1.0, 0.0});
  const LatticeVec b(1, {1.0});
  CHECK(a == b);
  CHECK(a.trimmed().lo() == 1);
  CHECK(a.trimmed().size() == 1);
  const LatticeVec c(1, {1.0, 0.5});
  CHECK_FALSE(a == c);
}

TEST_CASE("lattice vector construction validates") {
  CHECK_THROWS_AS(LatticeVec(0, {}), std::invalid_argument);
  CHECK_THROWS_AS(LatticeVec(0, {std::nan("")}), std::invalid_argument);
  CHECK_THROWS_AS(LatticeVec(0, {1.0, std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
}

TEST_CASE("lattice vector with() extends the window") {
  const LatticeVec u = LatticeVec::spike(0, 2.0);
  const LatticeVec v = u.with(3, -1.0);
  CHECK(v.lo() == 0);
  CHECK(v.hi() == 3);
  CHECK(v[0] == 2.0);
  CHECK(v[3] == -1.0);
  CHECK(v[1] == 0.0);
}

TEST_CASE("weight rules evaluate and validate") {
  const WeightSeq c = WeightSeq::constant(3.0);
  CHECK(c(5) == 3.0);
  CHECK(c.min_value() == 3.0);

  const WeightSeq aff = WeightSeq::affine_abs(2.0, 1.0);
  CHECK(aff(0) == 2.0);
  CHECK(aff(-4) == 6.0);
  CHECK(aff.min_value() == 2.0);

  const WeightSeq pw = WeightSeq::power(1.0, 0.5, 2.0);
  CHECK(pw(3) == Approx(1.0 + 0.5 * 9.0));
  CHECK(pw.min_value() == 1.0);

  CHECK_THROWS_AS(WeightSeq::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightSeq::constant(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightSeq::affine_abs(1.0, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(WeightSeq::power(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("table weights fall back to the default rule") {
  const WeightSeq t =
      WeightSeq::table({5.0, 0.5, 7.0}, -1, WeightSeq::affine_abs(2.0, 1.0));
  CHECK(t(-1) == 5.0);
  CHECK(t(0) == 0.5);
  CHECK(t(1) == 7.0);
  CHECK(t(2) == 4.0);   // fallback 2 + |2|
  CHECK(t(-2) == 4.0);
  CHECK(t.min_value() == 0.5);
  CHECK_THROWS_AS(
      WeightSeq::table({1.0, -1.0}, 0, WeightSeq::constant(1.0)),
      std::invalid_argument);
}

TEST_CASE("coercivity surrogate is testable") {
  WeightSeq b = WeightSeq::affine_abs(2.0, 1.0);
  b.declare_coercive(0);
  CHECK(b.coercive());
  CHECK(b.nondecreasing_beyond(0, 200));

  const WeightSeq t =
      WeightSeq::table({10.0, 1.0, 10.0}, -1, WeightSeq::affine_abs(2.0, 1.0));
  CHECK_FALSE(t.nondecreasing_beyond(0, 5));  // dips to b(0)=1 then fallback
  CHECK(t.nondecreasing_beyond(2, 50));
}
