#include "doctest.h"

#include <numbers>

#include "spinet/entropy.hpp"
#include "support.hpp"

using namespace spinet;
using namespace spinet::testing;

namespace {

constexpr double pi = std::numbers::pi;

struct Field {
  double n0, T;
  Vec3 nv;
};

Field smooth_field(double x) {
  const double n0 = 1.0 + 0.3 * std::cos(pi * x);
  const double T = 1.0 + 0.2 * std::sin(pi * x);
  const double r = 0.4 * n0 * (0.7 + 0.3 * x);
  const double phi = 1.3 * x;
  return {n0, T, r * Vec3(std::cos(phi), std::sin(phi), 0.0)};
}

double continuum_density(double x) {
  constexpr double h = 1e-5;
  auto parts = [](double y) {
    const Field f = smooth_field(y);
    const double r = f.nv.norm();
    struct {
      double sp, sm, st;
      Vec3 s;
    } out{std::sqrt((f.n0 + r) * f.T), std::sqrt((f.n0 - r) * f.T), std::sqrt(f.T), f.nv / r};
    return out;
  };
  const auto a = parts(x + h), b = parts(x - h);
  const double dsp = (a.sp - b.sp) / (2 * h), dsm = (a.sm - b.sm) / (2 * h), dst = (a.st - b.st) / (2 * h);
  const Vec3 ds = (a.s - b.s) / (2 * h);
  const Field f = smooth_field(x);
  const double r = f.nv.norm();
  const double xw = 2.0 * r * std::log((f.n0 + r) / (f.n0 - r));
  return 4.0 * (dsp * dsp + dsm * dsm) + 20.0 * f.n0 * dst * dst + 0.5 * xw * f.T * ds.squaredNorm();
}

double continuum_production() {
  constexpr int n = 20000;
  double s = continuum_density(0.0) + continuum_density(1.0);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * continuum_density(static_cast<double>(i) / n);
  return s / (3.0 * n);
}

double discrete_production(int m) {
  std::vector<double> n0(m), T(m);
  std::vector<Vec3> nv(m);
  for (int k = 0; k < m; ++k) {
    const Field f = smooth_field((k + 0.5) / m);
    n0[k] = f.n0;
    T[k] = f.T;
    nv[k] = f.nv;
  }
  return entropy_production_1(n0, nv, T, 1.0 / m);
}

}  // namespace

TEST_CASE("H1 closed values") {
  const int m = 8;
  const double dx = 1.0 / m;
  const std::vector<Vec3> zero(m, Vec3::Zero());
  CHECK(entropy_H1(std::vector<double>(m, 1.0), zero, std::vector<double>(m, 1.0), dx) == 0.0);
  CHECK(entropy_H1(std::vector<double>(m, std::exp(1.0)), zero, std::vector<double>(m, 1.0), dx) ==
        doctest::Approx(2.0 * std::exp(1.0)));
  CHECK(entropy_H1(std::vector<double>(m, 1.0), zero, std::vector<double>(m, std::exp(2.0 / 3.0)), dx) ==
        doctest::Approx(-2.0));
  CHECK_THROWS_AS(entropy_H1({1.0}, {Vec3(1.0, 0.0, 0.0)}, {1.0}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(entropy_H1({1.0}, {Vec3::Zero()}, {0.0}, 1.0), std::invalid_argument);
}

TEST_CASE("H1 depends on nv only through its length") {
  std::mt19937_64 rng(41);
  const int m = 20;
  std::vector<double> n0(m), T(m);
  std::vector<Vec3> nv(m), rot(m);
  const Mat3 R = Eigen::AngleAxisd(0.77, random_unit(rng)).toRotationMatrix();
  for (int k = 0; k < m; ++k) {
    n0[k] = uniform(rng, 0.5, 2.0);
    T[k] = uniform(rng, 0.5, 2.0);
    nv[k] = random_unit(rng) * uniform(rng, 0.0, 0.9) * n0[k];
    rot[k] = R * nv[k];
  }
  CHECK(entropy_H1(n0, rot, T, 0.05) == doctest::Approx(entropy_H1(n0, nv, T, 0.05)).epsilon(1e-14));
}

TEST_CASE("H2 closed values") {
  const int m = 5;
  const double dx = 0.2;
  const std::vector<double> n0(m, 1.0), W0(m, 1.5);
  const std::vector<Vec3> Wv(m, Vec3::Zero());
  CHECK(entropy_H2(n0, W0, Wv, dx) == doctest::Approx(2.5 * std::log(1.0 / (2.0 * std::pow(1.5, 0.6)))));

  std::mt19937_64 rng(42);
  std::vector<double> a(m), w(m), ws(m);
  std::vector<Vec3> v(m), vs(m);
  const double lam = 1.7;
  double mass = 0.0;
  for (int k = 0; k < m; ++k) {
    a[k] = uniform(rng, 0.5, 2.0);
    w[k] = uniform(rng, 0.5, 2.0);
    v[k] = random_unit(rng) * uniform(rng, 0.0, 0.9) * w[k];
    ws[k] = lam * w[k];
    vs[k] = lam * v[k];
    mass += a[k] * dx;
  }
  CHECK(entropy_H2(a, ws, vs, dx) - entropy_H2(a, w, v, dx) == doctest::Approx(-1.5 * mass * std::log(lam)));
  CHECK_THROWS_AS(entropy_H2({1.0}, {1.0}, {Vec3(1.0, 0.0, 0.0)}, 1.0), std::invalid_argument);
}

TEST_CASE("H3 values") {
  CHECK(entropy_H3({1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}, {1.0, 1.0}, 0.5) == 0.0);
  const std::vector<double> n0{1.0, 2.0, 0.7}, T{1.2, 0.8, 2.0};
  const std::vector<Vec3> nv{Vec3(0.3, 0.0, 0.0), Vec3(0.0, -1.0, 0.5), Vec3::Zero()};
  std::vector<double> np(3), nm(3);
  for (int k = 0; k < 3; ++k) {
    np[k] = n0[k] + nv[k].norm();
    nm[k] = n0[k] - nv[k].norm();
  }
  CHECK(entropy_H3(np, nm, T, T, 0.1) == doctest::Approx(entropy_H1(n0, nv, T, 0.1)).epsilon(1e-14));
  CHECK_THROWS_AS(entropy_H3({1.0}, {0.0}, {1.0}, {1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("entropy differences match the kinetic entropy") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    const double n0 = uniform(rng, 0.3, 3.0);

    // first model at equal mass
    const double Ta = uniform(rng, 0.4, 3.0), Tb = uniform(rng, 0.4, 3.0);
    const Vec3 va = random_unit(rng) * uniform(rng, 0.0, 0.9) * n0;
    const Vec3 vb = random_unit(rng) * uniform(rng, 0.0, 0.9) * n0;
    const double dK1 = kinetic_entropy_by_quadrature(model1_params(n0, va, Ta)) -
                       kinetic_entropy_by_quadrature(model1_params(n0, vb, Tb));
    const double dH1 = entropy_H1({n0}, {va}, {Ta}, 1.0) - entropy_H1({n0}, {vb}, {Tb}, 1.0);
    CHECK(std::abs(dK1 - dH1) < 1e-6);

    // second model: the kinetic entropy changes by twice H2
    const double Wa = uniform(rng, 0.4, 3.0), Wb = uniform(rng, 0.4, 3.0);
    const Vec3 wa = random_unit(rng) * uniform(rng, 0.0, 0.9) * Wa;
    const Vec3 wb = random_unit(rng) * uniform(rng, 0.0, 0.9) * Wb;
    const double dK2 = kinetic_entropy_by_quadrature(model2_params(n0, Wa, wa)) -
                       kinetic_entropy_by_quadrature(model2_params(n0, Wb, wb));
    const double dH2 = entropy_H2({n0}, {Wa}, {wa}, 1.0) - entropy_H2({n0}, {Wb}, {wb}, 1.0);
    CHECK(std::abs(dK2 - 2.0 * dH2) < 1e-6);

    // third model with n0 = (n+ + n-)/2 held fixed
    const double za = uniform(rng, -0.8, 0.8), zb = uniform(rng, -0.8, 0.8);
    const double Tma = uniform(rng, 0.4, 2.0), Tpa = Tma * uniform(rng, 1.05, 2.0);
    const double Tmb = uniform(rng, 0.4, 2.0), Tpb = Tmb * uniform(rng, 1.05, 2.0);
    const Vec3 s = random_unit(rng);
    const double npa = n0 * (1 + za), nma = n0 * (1 - za), npb = n0 * (1 + zb), nmb = n0 * (1 - zb);
    const double dK3 = kinetic_entropy_by_quadrature(model3_params(npa, nma, Tpa, Tma, s)) -
                       kinetic_entropy_by_quadrature(model3_params(npb, nmb, Tpb, Tmb, s));
    const double dH3 = entropy_H3({npa}, {nma}, {Tpa}, {Tma}, 1.0) - entropy_H3({npb}, {nmb}, {Tpb}, {Tmb}, 1.0);
    CHECK(std::abs(dK3 - dH3) < 1e-6);
  }
}

TEST_CASE("discrete production") {
  const int m = 30;
  const double dx = 1.0 / m;
  std::vector<double> one(m, 1.0);
  std::vector<Vec3> zero(m, Vec3::Zero());
  CHECK(entropy_production_1(one, zero, one, dx, 1.0, 1.0) == 0.0);

  std::mt19937_64 rng(44);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> n0(m), T(m);
    std::vector<Vec3> nv(m);
    for (int k = 0; k < m; ++k) {
      n0[k] = uniform(rng, 0.2, 3.0);
      T[k] = uniform(rng, 0.2, 3.0);
      nv[k] = random_unit(rng) * uniform(rng, 0.0, 0.99) * n0[k];
    }
    if (t % 4 == 0) nv[t % m] = Vec3::Zero();
    const ProductionTerms p = entropy_production_1_terms(n0, nv, T, dx, 0.3, 2.0);
    CHECK(p.branch_gradient >= 0.0);
    CHECK(p.temperature >= 0.0);
    CHECK(p.spin_exchange >= 0.0);
    CHECK(p.relaxation >= 0.0);
    CHECK(p.total() == doctest::Approx(entropy_production_1(n0, nv, T, dx, 0.3, 2.0)));
  }

  // relaxation term alone on a uniform polarized state
  const std::vector<Vec3> pol(m, Vec3(0.0, 0.0, 0.5));
  const ProductionTerms r = entropy_production_1_terms(one, pol, one, dx, 1.0, 4.0);
  CHECK(r.branch_gradient == doctest::Approx(0.0));
  CHECK(r.spin_exchange == 0.0);
  CHECK(r.relaxation == doctest::Approx(0.5 * 1.0 * std::log(3.0) / 4.0));
}

TEST_CASE("discrete production converges to the continuum integral") {
  const double want = continuum_production();
  const double e1 = std::abs(discrete_production(100) - want);
  const double e2 = std::abs(discrete_production(200) - want);
  const double e3 = std::abs(discrete_production(400) - want);
  CHECK(e2 < e1);
  CHECK(e3 < e2);
  CHECK(e3 / want < 5e-3);
}

TEST_CASE("monotonicity verdicts") {
  const EntropyReport dec = monotonicity_verdict(std::vector<double>{3.0, 2.0, 1.5, 1.0}, 1e-10);
  CHECK(dec.monotone_nonincreasing);
  CHECK(dec.max_violation == 0.0);
  CHECK(monotonicity_verdict(std::vector<double>{1.0, 1.0, 1.0}, 1e-10).monotone_nonincreasing);
  const EntropyReport up = monotonicity_verdict(std::vector<double>{1.0, 0.9, 0.901, 0.8}, 1e-10);
  CHECK_FALSE(up.monotone_nonincreasing);
  CHECK(up.max_violation == doctest::Approx(1e-3));
  CHECK(up.tolerance == 1e-10);
  CHECK_THROWS_AS(monotonicity_verdict(std::vector<double>{1.0}, 1e-10), std::invalid_argument);
}
