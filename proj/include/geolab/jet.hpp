#pragma once

// Truncated bivariate jets over complex scalars with Wirtinger derivative
// extraction; the single differentiation mechanism of the library.
//
// A jet represents a function f(u,v) near a base point through its mixed
// Wirtinger derivatives d_{pq} = d^p dbar^q f evaluated at the base, for all
// p+q <= order, where d = (d_u - i d_v)/2 and dbar = (d_u + i d_v)/2. Storing
// the Wirtinger table rather than the (u,v) Taylor table makes d and dbar pure
// index shifts, so derivative commutation and the conjugation swap hold to the
// last bit. The (u,v)-Taylor coefficients c_{pq} = (1/p!q!) d_u^p d_v^q f are
// exposed through coeff().

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace geolab {

using cplx = std::complex<double>;

struct JetError : std::runtime_error {
  explicit JetError(const std::string& what) : std::runtime_error(what) {}
};
struct OrderMismatch : JetError {
  explicit OrderMismatch(const std::string& what) : JetError(what) {}
};
struct DivisionByZeroJet : JetError {
  explicit DivisionByZeroJet(const std::string& what) : JetError(what) {}
};
struct BranchPointError : JetError {
  explicit BranchPointError(const std::string& what) : JetError(what) {}
};
struct InsufficientOrder : JetError {
  explicit InsufficientOrder(const std::string& what) : JetError(what) {}
};

enum class Coord { U, V, Xi, XiBar };

namespace detail {
inline double binom(int n, int k) {
  static const auto table = [] {
    std::array<std::array<double, 8>, 8> t{};
    for (int i = 0; i < 8; ++i) {
      t[i][0] = 1.0;
      for (int j = 1; j <= i; ++j)
        t[i][j] = t[i - 1][j - 1] + (j <= i - 1 ? t[i - 1][j] : 0.0);
    }
    return t;
  }();
  return table[n][k];
}
inline double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}
}  // namespace detail

class Jet {
 public:
  static constexpr int kMaxOrder = 6;

  Jet(double u0, double v0, int order) : order_(order), u0_(u0), v0_(v0) {
    if (order < 0 || order > kMaxOrder)
      throw JetError("jet order must be in [0," + std::to_string(kMaxOrder) + "]");
    d_.assign(ncoeffs(order), cplx(0.0, 0.0));
  }

  static Jet constant(cplx value, double u0, double v0, int order) {
    Jet j(u0, v0, order);
    j.d_[0] = value;
    return j;
  }

  static Jet coordinate(Coord which, double u0, double v0, int order) {
    Jet j(u0, v0, order);
    switch (which) {
      case Coord::U:  // u = (xi + xibar)/2
        j.d_[0] = u0;
        if (order >= 1) { j.at(1, 0) = 0.5; j.at(0, 1) = 0.5; }
        break;
      case Coord::V:  // v = (xi - xibar)/(2i)
        j.d_[0] = v0;
        if (order >= 1) { j.at(1, 0) = cplx(0.0, -0.5); j.at(0, 1) = cplx(0.0, 0.5); }
        break;
      case Coord::Xi:
        j.d_[0] = cplx(u0, v0);
        if (order >= 1) j.at(1, 0) = 1.0;
        break;
      case Coord::XiBar:
        j.d_[0] = cplx(u0, -v0);
        if (order >= 1) j.at(0, 1) = 1.0;
        break;
    }
    return j;
  }

  int order() const { return order_; }
  double u0() const { return u0_; }
  double v0() const { return v0_; }
  cplx value() const { return d_[0]; }

  // d^p dbar^q f at the base point.
  cplx wirtinger(int p, int q) const {
    if (p < 0 || q < 0) throw JetError("negative wirtinger order");
    if (p + q > order_)
      throw InsufficientOrder("wirtinger(" + std::to_string(p) + "," + std::to_string(q) +
                              ") exceeds jet order " + std::to_string(order_));
    return d_[index(p, q)];
  }

  // (u,v)-Taylor coefficient c_{pq} = (1/p!q!) d_u^p d_v^q f at the base,
  // from d_u = d + dbar and d_v = i (d - dbar).
  cplx coeff(int p, int q) const {
    if (p < 0 || q < 0 || p + q > order_) return 0.0;
    cplx acc = 0.0;
    for (int j = 0; j <= p; ++j)
      for (int k = 0; k <= q; ++k) {
        const double w = detail::binom(p, j) * detail::binom(q, k) *
                         ((q - k) % 2 == 0 ? 1.0 : -1.0);
        acc += w * d_[index(j + k, (p - j) + (q - k))];
      }
    return acc * ipow(q) / (detail::factorial(p) * detail::factorial(q));
  }

  // d = (d_u - i d_v)/2: a pure index shift, order drops by one.
  Jet wirt_d() const {
    require_order(1, "wirt_d");
    Jet out(u0_, v0_, order_ - 1);
    for (int p = 0; p <= order_ - 1; ++p)
      for (int q = 0; p + q <= order_ - 1; ++q)
        out.at(p, q) = d_[index(p + 1, q)];
    return out;
  }

  Jet wirt_dbar() const {
    require_order(1, "wirt_dbar");
    Jet out(u0_, v0_, order_ - 1);
    for (int p = 0; p <= order_ - 1; ++p)
      for (int q = 0; p + q <= order_ - 1; ++q)
        out.at(p, q) = d_[index(p, q + 1)];
    return out;
  }

  Jet d_u() const {
    require_order(1, "d_u");
    Jet out(u0_, v0_, order_ - 1);
    for (int p = 0; p <= order_ - 1; ++p)
      for (int q = 0; p + q <= order_ - 1; ++q)
        out.at(p, q) = d_[index(p + 1, q)] + d_[index(p, q + 1)];
    return out;
  }

  Jet d_v() const {
    require_order(1, "d_v");
    Jet out(u0_, v0_, order_ - 1);
    for (int p = 0; p <= order_ - 1; ++p)
      for (int q = 0; p + q <= order_ - 1; ++q)
        out.at(p, q) = cplx(0.0, 1.0) * (d_[index(p + 1, q)] - d_[index(p, q + 1)]);
    return out;
  }

  Jet truncated(int new_order) const {
    if (new_order > order_) throw OrderMismatch("cannot truncate upward");
    Jet out(u0_, v0_, new_order);
    for (int p = 0; p <= new_order; ++p)
      for (int q = 0; p + q <= new_order; ++q)
        out.at(p, q) = d_[index(p, q)];
    return out;
  }

  friend Jet operator-(const Jet& a) {
    Jet out = a;
    for (auto& c : out.d_) c = -c;
    return out;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    a.require_compatible(b);
    Jet out = a;
    for (size_t i = 0; i < out.d_.size(); ++i) out.d_[i] += b.d_[i];
    return out;
  }

  friend Jet operator-(const Jet& a, const Jet& b) {
    a.require_compatible(b);
    Jet out = a;
    for (size_t i = 0; i < out.d_.size(); ++i) out.d_[i] -= b.d_[i];
    return out;
  }

  // Leibniz in the Wirtinger table: (fg)_{pq} = sum binom(p,j) binom(q,k) f_{jk} g_{p-j,q-k}
  friend Jet operator*(const Jet& a, const Jet& b) {
    a.require_compatible(b);
    Jet out(a.u0_, a.v0_, a.order_);
    for (int p = 0; p <= a.order_; ++p)
      for (int q = 0; p + q <= a.order_; ++q) {
        cplx acc = 0.0;
        for (int j = 0; j <= p; ++j)
          for (int k = 0; k <= q; ++k)
            acc += detail::binom(p, j) * detail::binom(q, k) *
                   a.d_[index(j, k)] * b.d_[index(p - j, q - k)];
        out.at(p, q) = acc;
      }
    return out;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }

  friend Jet operator+(const Jet& a, cplx s) { Jet o = a; o.d_[0] += s; return o; }
  friend Jet operator+(cplx s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, cplx s) { Jet o = a; o.d_[0] -= s; return o; }
  friend Jet operator-(cplx s, const Jet& a) { return (-a) + s; }
  friend Jet operator*(const Jet& a, cplx s) {
    Jet o = a;
    for (auto& c : o.d_) c *= s;
    return o;
  }
  friend Jet operator*(cplx s, const Jet& a) { return a * s; }
  friend Jet operator/(const Jet& a, cplx s) {
    if (s == cplx(0.0, 0.0)) throw DivisionByZeroJet("division by zero scalar");
    return a * (cplx(1.0, 0.0) / s);
  }

  friend Jet recip(const Jet& b) {
    const cplx b0 = b.value();
    if (std::abs(b0) == 0.0) throw DivisionByZeroJet("jet reciprocal at zero value");
    std::vector<cplx> series(b.order_ + 1);
    cplx pw = 1.0 / b0;
    for (int k = 0; k <= b.order_; ++k) {
      series[k] = (k % 2 == 0 ? pw : -pw);
      pw /= b0;
    }
    return compose(series, b);
  }

  // conj f has d^p dbar^q (conj f) = conj(d^q dbar^p f): transpose + conjugate.
  friend Jet conj(const Jet& a) {
    Jet out(a.u0_, a.v0_, a.order_);
    for (int p = 0; p <= a.order_; ++p)
      for (int q = 0; p + q <= a.order_; ++q)
        out.at(p, q) = std::conj(a.d_[index(q, p)]);
    return out;
  }

  friend Jet real(const Jet& a) { return (a + conj(a)) * cplx(0.5, 0.0); }
  friend Jet imag(const Jet& a) { return (a - conj(a)) * cplx(0.0, -0.5); }

  friend Jet pow_int(const Jet& a, int n) {
    if (n < 0) return recip(pow_int(a, -n));
    Jet acc = Jet::constant(1.0, a.u0_, a.v0_, a.order_);
    Jet base = a;
    int e = n;
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  friend Jet exp(const Jet& a) {
    std::vector<cplx> s(a.order_ + 1);
    const cplx e0 = std::exp(a.value());
    double fact = 1.0;
    for (int k = 0; k <= a.order_; ++k) {
      if (k > 0) fact *= k;
      s[k] = e0 / fact;
    }
    return compose(s, a);
  }

  friend Jet log(const Jet& a) {
    const cplx a0 = a.value();
    check_branch(a0, "log");
    std::vector<cplx> s(a.order_ + 1);
    s[0] = std::log(a0);
    cplx pw = 1.0;
    for (int k = 1; k <= a.order_; ++k) {
      pw /= a0;
      s[k] = (k % 2 == 1 ? pw : -pw) / double(k);
    }
    return compose(s, a);
  }

  friend Jet sqrt(const Jet& a) {
    const cplx a0 = a.value();
    check_branch(a0, "sqrt");
    std::vector<cplx> s(a.order_ + 1);
    cplx c = std::sqrt(a0);
    for (int k = 0; k <= a.order_; ++k) {
      s[k] = c;
      c *= (0.5 - double(k)) / (double(k) + 1.0) / a0;
    }
    return compose(s, a);
  }

  friend Jet sin(const Jet& a) { return trig(a, std::sin(a.value()), std::cos(a.value()), true); }
  friend Jet cos(const Jet& a) { return trig(a, std::cos(a.value()), -std::sin(a.value()), true); }
  friend Jet sinh(const Jet& a) { return trig(a, std::sinh(a.value()), std::cosh(a.value()), false); }
  friend Jet cosh(const Jet& a) { return trig(a, std::cosh(a.value()), std::sinh(a.value()), false); }
  friend Jet tan(const Jet& a) { return sin(a) / cos(a); }

  // atan for real-valued jets only (complex atan has branch points at +-i).
  friend Jet atan(const Jet& a) {
    const cplx a0 = a.value();
    if (std::abs(a0.imag()) > 1e-12 * (1.0 + std::abs(a0)))
      throw BranchPointError("atan requires a real-valued jet");
    const double x0 = a0.real();
    const double q0 = 1.0 + x0 * x0, q1 = 2.0 * x0, q2 = 1.0;
    std::vector<cplx> s(a.order_ + 1);
    s[0] = std::atan(x0);
    if (a.order_ >= 1) {
      std::vector<double> b(a.order_, 0.0);  // Taylor series of 1/(1+x^2) at x0
      b[0] = 1.0 / q0;
      for (int k = 1; k < a.order_; ++k)
        b[k] = -(q1 * b[k - 1] + (k >= 2 ? q2 * b[k - 2] : 0.0)) / q0;
      for (int k = 1; k <= a.order_; ++k) s[k] = b[k - 1] / double(k);
    }
    return compose(s, a);
  }

  // |f| = sqrt(f conj f); requires value != 0.
  friend Jet abs_jet(const Jet& a) {
    if (std::abs(a.value()) == 0.0)
      throw BranchPointError("abs of jet with zero value");
    return sqrt(a * conj(a));
  }

  // Local smooth branch of arg(f) through the principal value at the base
  // point: arg f = arg f0 + Im log(f/f0); the log is evaluated at value 1,
  // far from its cut.
  friend Jet arg_jet(const Jet& a) {
    const cplx a0 = a.value();
    if (std::abs(a0) == 0.0) throw BranchPointError("arg of jet with zero value");
    Jet w = log(a / a0);
    return imag(w) + cplx(std::arg(a0), 0.0);
  }

  bool same_base(const Jet& b) const { return u0_ == b.u0_ && v0_ == b.v0_ && order_ == b.order_; }

 private:
  static int ncoeffs(int order) { return (order + 1) * (order + 2) / 2; }
  static int index(int p, int q) {
    const int n = p + q;
    return n * (n + 1) / 2 + q;
  }
  cplx& at(int p, int q) { return d_[index(p, q)]; }
  static cplx ipow(int q) {
    switch (q & 3) {
      case 0: return {1, 0};
      case 1: return {0, 1};
      case 2: return {-1, 0};
      default: return {0, -1};
    }
  }

  void require_order(int k, const char* who) const {
    if (order_ < k)
      throw InsufficientOrder(std::string(who) + " needs order >= " + std::to_string(k));
  }

  void require_compatible(const Jet& b) const {
    if (!same_base(b))
      throw OrderMismatch("jet base/order mismatch: (" + std::to_string(u0_) + "," +
                          std::to_string(v0_) + ";N=" + std::to_string(order_) + ") vs (" +
                          std::to_string(b.u0_) + "," + std::to_string(b.v0_) +
                          ";N=" + std::to_string(b.order_) + ")");
  }

  static void check_branch(cplx a0, const char* who) {
    if (std::abs(a0) == 0.0)
      throw BranchPointError(std::string(who) + " of jet with zero value");
    if (a0.real() <= 0.0 && std::abs(a0.imag()) <= 1e-14 * std::abs(a0.real()))
      throw BranchPointError(std::string(who) + " of jet on the branch cut (nonpositive reals)");
  }

  // g(a) = sum_k s[k] (a - a0)^k; exact at the truncation order because a - a0
  // has zero constant term.
  static Jet compose(const std::vector<cplx>& s, const Jet& a) {
    Jet w = a;
    w.d_[0] = 0.0;
    Jet acc = Jet::constant(s[0], a.u0_, a.v0_, a.order_);
    Jet pw = Jet::constant(1.0, a.u0_, a.v0_, a.order_);
    for (int k = 1; k < int(s.size()); ++k) {
      pw = pw * w;
      acc = acc + pw * s[k];
    }
    return acc;
  }

  static Jet trig(const Jet& a, cplx f0, cplx f1, bool circular) {
    // derivative cycle: circular f'' = -f, hyperbolic f'' = +f
    std::vector<cplx> s(a.order_ + 1);
    cplx cur = f0, nxt = f1;
    double fact = 1.0;
    for (int k = 0; k <= a.order_; ++k) {
      if (k > 0) fact *= k;
      s[k] = cur / fact;
      const cplx after = circular ? -cur : cur;
      cur = nxt;
      nxt = after;
    }
    return compose(s, a);
  }

  int order_;
  double u0_, v0_;
  std::vector<cplx> d_;  // Wirtinger table, triangular, graded (p,q) order
};

}  // namespace geolab
