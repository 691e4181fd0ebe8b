#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "geolab/jet.hpp"

using namespace geolab;
using Catch::Approx;

namespace {

Jet xi_at(double u, double v, int order = 4) { return Jet::coordinate(Coord::Xi, u, v, order); }
Jet xibar_at(double u, double v, int order = 4) { return Jet::coordinate(Coord::XiBar, u, v, order); }

// Central finite differences on a plain lambda, Richardson-extrapolated once.
template <class F>
cplx fd1(F f, double u, double v, bool along_u, double h = 1e-5) {
  auto d = [&](double hh) {
    if (along_u) return (f(u + hh, v) - f(u - hh, v)) / (2.0 * hh);
    return (f(u, v + hh) - f(u, v - hh)) / (2.0 * hh);
  };
  return (4.0 * d(h) - d(2.0 * h)) / 3.0;
}

template <class F>
cplx fd_wirt(F f, double u, double v, bool bar, double h = 1e-5) {
  cplx fu = fd1(f, u, v, true, h);
  cplx fv = fd1(f, u, v, false, h);
  return bar ? 0.5 * (fu + cplx(0, 1) * fv) : 0.5 * (fu - cplx(0, 1) * fv);
}

}  // namespace

TEST_CASE("coordinate jets") {
  Jet xi = xi_at(1.0, 0.0, 2);
  CHECK(xi.value() == cplx(1.0, 0.0));
  CHECK(xi.wirtinger(1, 0) == cplx(1.0, 0.0));
  CHECK(xi.wirtinger(0, 1) == cplx(0.0, 0.0));

  Jet xb = xibar_at(0.0, 1.0, 2);
  CHECK(xb.value() == cplx(0.0, -1.0));
  CHECK(xb.wirtinger(1, 0) == cplx(0.0, 0.0));
  CHECK(xb.wirtinger(0, 1) == cplx(1.0, 0.0));

  // u = (xi + xibar)/2
  Jet u = Jet::coordinate(Coord::U, 2.0, 3.0, 2);
  CHECK(u.value() == cplx(2.0, 0.0));
  CHECK(u.wirtinger(1, 0) == cplx(0.5, 0.0));
  CHECK(u.wirtinger(0, 1) == cplx(0.5, 0.0));
}

TEST_CASE("product and chain rules") {
  // f = xi*xibar at xi = 2: value 4, df = xibar = 2, dbar f = xi = 2
  Jet f = xi_at(2, 0) * xibar_at(2, 0);
  CHECK(f.value().real() == Approx(4.0));
  CHECK(f.wirtinger(1, 0).real() == Approx(2.0));
  CHECK(f.wirtinger(0, 1).real() == Approx(2.0));
  CHECK(f.wirtinger(1, 1).real() == Approx(1.0));

  // f = xi^2 at 1+i: holomorphic
  Jet g = pow_int(xi_at(1, 1), 2);
  CHECK(g.wirtinger(1, 0) == cplx(2.0, 2.0));
  CHECK(std::abs(g.wirtinger(0, 1)) == 0.0);

  // conj: d(conj f) = conj(dbar f); for f = xi^2, conj f = xibar^2 has df = 0
  CHECK(std::abs(conj(g).wirtinger(1, 0)) == 0.0);

  // f = exp(xi xibar) at xi = 1: df = xibar e^{xi xibar} = e
  Jet e = exp(xi_at(1, 0) * xibar_at(1, 0));
  CHECK(e.wirtinger(1, 0).real() == Approx(std::exp(1.0)).epsilon(1e-12));

  // f = (1+xi xibar)^2 at xi=1: df = 2(1+xi xibar) xibar = 4
  Jet h = pow_int(Jet::constant(1.0, 1, 0, 4) + xi_at(1, 0) * xibar_at(1, 0), 2);
  CHECK(h.wirtinger(1, 0).real() == Approx(4.0));

  // f = exp(xi + xibar) at 0: d^2 dbar^2 f = 1
  Jet ee = exp(xi_at(0, 0) + xibar_at(0, 0));
  CHECK(ee.wirtinger(2, 2).real() == Approx(1.0));
}

TEST_CASE("commutation is exact") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    double u = d(rng), v = d(rng);
    Jet f = sin(xi_at(u, v) * xibar_at(u, v)) + pow_int(xi_at(u, v), 3);
    Jet a = f.wirt_d().wirt_dbar();
    Jet b = f.wirt_dbar().wirt_d();
    CHECK(a.value() == b.value());  // bitwise equal
  }
}

TEST_CASE("Leibniz rule over random polynomial jets") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  auto rand_poly = [&](double u, double v) {
    Jet xi = xi_at(u, v), xb = xibar_at(u, v);
    Jet acc = Jet::constant(cplx(d(rng), d(rng)), u, v, 4);
    for (int p = 1; p <= 3; ++p)
      acc = acc + cplx(d(rng), d(rng)) * pow_int(xi, p) + cplx(d(rng), d(rng)) * pow_int(xb, p);
    acc = acc + cplx(d(rng), d(rng)) * xi * xb;
    return acc;
  };
  for (int i = 0; i < 100; ++i) {
    double u = d(rng), v = d(rng);
    Jet f = rand_poly(u, v), g = rand_poly(u, v);
    cplx lhs = (f * g).wirtinger(1, 0);
    cplx rhs = f.value() * g.wirtinger(1, 0) + g.value() * f.wirtinger(1, 0);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("conjugation swap is exact") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(-0.8, 0.8);
  for (int i = 0; i < 20; ++i) {
    double u = d(rng), v = d(rng);
    Jet f = exp(xi_at(u, v)) * xibar_at(u, v) + pow_int(xi_at(u, v), 2);
    for (int p = 0; p <= 2; ++p)
      for (int q = 0; p + q <= 2; ++q)
        CHECK(conj(f).wirtinger(p, q) == std::conj(f.wirtinger(q, p)));
  }
}

TEST_CASE("finite-difference agreement for transcendental compositions") {
  auto f = [](double u, double v) {
    cplx xi(u, v), xb(u, -v);
    return std::exp(std::sin(xi * xb)) + std::log(cplx(2.0, 0) + xi) * std::cosh(0.3 * xb);
  };
  auto jet_of = [](double u, double v) {
    Jet xi = xi_at(u, v), xb = xibar_at(u, v);
    return exp(sin(xi * xb)) + log(cplx(2.0, 0) + xi) * cosh(cplx(0.3, 0) * xb);
  };
  for (auto [u, v] : {std::pair{0.3, 0.2}, {0.7, -0.4}, {-0.5, 0.1}}) {
    Jet J = jet_of(u, v);
    for (bool bar : {false, true}) {
      cplx fdv = fd_wirt(f, u, v, bar);
      cplx jv = bar ? J.wirtinger(0, 1) : J.wirtinger(1, 0);
      CHECK(std::abs(jv - fdv) <= 1e-6 * (1.0 + std::abs(jv)));
    }
    // one second derivative
    auto df = [&](double uu, double vv) { return fd_wirt(f, uu, vv, false); };
    cplx fd2 = fd_wirt(df, u, v, true, 1e-4);
    CHECK(std::abs(J.wirtinger(1, 1) - fd2) <= 1e-6 * (1.0 + std::abs(fd2)));
  }
}

TEST_CASE("real-valued expressions give coefficientwise-real jets") {
  Jet xi = xi_at(0.4, -0.3), xb = xibar_at(0.4, -0.3);
  Jet r = exp(xi * xb) + cplx(0.5, 0) * pow_int(xi + xb, 2);
  Jet c = conj(r);
  for (int p = 0; p <= 4; ++p)
    for (int q = 0; p + q <= 4; ++q)
      CHECK(std::abs(r.coeff(p, q) - c.coeff(p, q)) < 1e-15);
}

TEST_CASE("division, sqrt, atan, abs") {
  Jet xi = xi_at(1.0, 0.5);
  Jet w = (cplx(1, 0) + xi) / (cplx(2, 0) + xi * conj(xi));
  auto fw = [](double u, double v) {
    cplx z(u, v);
    return (cplx(1, 0) + z) / (cplx(2, 0) + z * std::conj(z));
  };
  CHECK(std::abs(w.wirtinger(1, 0) - fd_wirt(fw, 1.0, 0.5, false)) < 1e-8);

  Jet s = sqrt(cplx(1, 0) + xi * conj(xi));
  CHECK(s.value().real() == Approx(std::sqrt(2.25)));

  // atan on a real jet: d/dx atan(x^2) = 2x/(1+x^4) at x = u+v... use t = u
  Jet t = Jet::coordinate(Coord::U, 0.7, 0.0, 4);
  Jet a = atan(t * t);
  CHECK(a.value().real() == Approx(std::atan(0.49)));
  CHECK(a.d_u().value().real() == Approx(2 * 0.7 / (1 + std::pow(0.7, 4))).epsilon(1e-12));

  Jet m = abs_jet(xi);  // |xi| = sqrt(u^2+v^2)
  CHECK(m.value().real() == Approx(std::hypot(1.0, 0.5)));
  CHECK(m.d_u().value().real() == Approx(1.0 / std::hypot(1.0, 0.5)).epsilon(1e-12));
}

TEST_CASE("error paths") {
  Jet a = xi_at(0, 0, 3), b = xi_at(0.5, 0, 3), c = xi_at(0, 0, 2);
  CHECK_THROWS_AS(a + b, OrderMismatch);
  CHECK_THROWS_AS(a + c, OrderMismatch);
  CHECK_THROWS_AS(recip(Jet::constant(0.0, 0, 0, 2)), DivisionByZeroJet);
  CHECK_THROWS_AS(log(Jet::constant(cplx(-1.0, 0.0), 0, 0, 2)), BranchPointError);
  CHECK_THROWS_AS(sqrt(Jet::constant(cplx(-2.0, 0.0), 0, 0, 2)), BranchPointError);
  CHECK_THROWS_AS(log(Jet::constant(0.0, 0, 0, 2)), BranchPointError);
  CHECK_THROWS_AS(a.wirtinger(2, 2), InsufficientOrder);
  CHECK_THROWS_AS(atan(xi_at(0.3, 0.2)), BranchPointError);
  CHECK_THROWS_AS(Jet(0, 0, 7), JetError);
  CHECK_THROWS_AS(Jet(0, 0, -1), JetError);
}

TEST_CASE("arg_jet gives a smooth local branch") {
  // sigma = -(1+|xi|^2) xibar^2 at xi=1 has value -2, arg pi
  Jet xi = xi_at(1, 0), xb = xibar_at(1, 0);
  Jet sigma = -(cplx(1, 0) + xi * xb) * pow_int(xb, 2);
  Jet phi = arg_jet(sigma);
  CHECK(phi.value().real() == Approx(M_PI));
  // phi = pi - 2 theta along the unit circle; d theta/du at (1,0) is 0, dv = 1
  CHECK(phi.d_v().value().real() == Approx(-2.0).epsilon(1e-12));
}
