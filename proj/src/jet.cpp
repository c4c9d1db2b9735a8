#include "confgeo/jet.hpp"

#include <cmath>
#include <numeric>

namespace confgeo {

namespace {

constexpr int kOrder = Jet::kOrder;

struct Tables {
  int nvars = 0;
  int count = 0;
  std::vector<std::array<int, 4>> alpha;   // exponent tuples, graded order
  std::vector<int> degree;                 // total degree per position
  std::vector<double> alpha_fact;          // alpha!
  std::vector<int> posmap;                 // base-5 code -> position (-1 if degree > 4)
  std::vector<std::array<int, 3>> prod;    // (i, j, k) with alpha_k = alpha_i + alpha_j

  int pos(const std::array<int, 4>& a) const {
    int code = 0, p = 1;
    for (int i = 0; i < nvars; ++i) {
      code += a[i] * p;
      p *= 5;
    }
    return posmap[code];
  }
};

Tables build_tables(int nvars) {
  Tables t;
  t.nvars = nvars;
  int codes = 1;
  for (int i = 0; i < nvars; ++i) codes *= 5;
  t.posmap.assign(codes, -1);
  // Enumerate by (degree, code) ascending so m = 1 lays out (f, f', f''/2, ...).
  for (int d = 0; d <= kOrder; ++d) {
    for (int code = 0; code < codes; ++code) {
      std::array<int, 4> a{0, 0, 0, 0};
      int c = code, deg = 0;
      for (int i = 0; i < nvars; ++i) {
        a[i] = c % 5;
        c /= 5;
        deg += a[i];
      }
      if (deg != d) continue;
      t.posmap[code] = static_cast<int>(t.alpha.size());
      t.alpha.push_back(a);
      t.degree.push_back(deg);
      double f = 1.0;
      for (int i = 0; i < nvars; ++i)
        for (int k = 2; k <= a[i]; ++k) f *= k;
      t.alpha_fact.push_back(f);
    }
  }
  t.count = static_cast<int>(t.alpha.size());
  for (int i = 0; i < t.count; ++i)
    for (int j = 0; j < t.count; ++j) {
      if (t.degree[i] + t.degree[j] > kOrder) continue;
      std::array<int, 4> s{};
      for (int v = 0; v < nvars; ++v) s[v] = t.alpha[i][v] + t.alpha[j][v];
      t.prod.push_back({i, j, t.pos(s)});
    }
  return t;
}

const Tables& tables(int nvars) {
  if (nvars < 1 || nvars > Jet::kMaxVars)
    throw DomainError("jet: nvars must be between 1 and 4");
  static const Tables t1 = build_tables(1);
  static const Tables t2 = build_tables(2);
  static const Tables t3 = build_tables(3);
  static const Tables t4 = build_tables(4);
  switch (nvars) {
    case 1: return t1;
    case 2: return t2;
    case 3: return t3;
    default: return t4;
  }
}

void check_match(const Jet& a, const Jet& b) {
  if (a.empty() || b.empty()) throw DomainError("jet: arithmetic on empty jet");
  if (a.nvars() != b.nvars()) throw DimensionMismatch("jet: nvars mismatch");
}

}  // namespace

Jet::Jet(int nvars) : nv_(nvars), c_(tables(nvars).count, 0.0) {}

Jet Jet::constant(double value, int nvars) {
  Jet j(nvars);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(int index, double value, int nvars) {
  if (index < 0 || index >= nvars) throw DomainError("jet: variable index out of range");
  Jet j(nvars);
  j.c_[0] = value;
  std::array<int, 4> e{0, 0, 0, 0};
  e[index] = 1;
  j.c_[tables(nvars).pos(e)] = 1.0;
  return j;
}

double Jet::extract(const std::array<int, 4>& alpha) const {
  if (empty()) throw DomainError("jet: extract on empty jet");
  const Tables& t = tables(nv_);
  int deg = 0;
  for (int i = 0; i < 4; ++i) {
    if (alpha[i] < 0) throw DomainError("jet: negative multi-index");
    if (i >= nv_ && alpha[i] != 0) throw DimensionMismatch("jet: multi-index touches absent variable");
    deg += alpha[i];
  }
  if (deg > kOrder) throw DomainError("jet: extraction order overflow");
  const int p = t.pos(alpha);
  return c_[p] * t.alpha_fact[p];
}

double Jet::extract(std::initializer_list<int> alpha) const {
  std::array<int, 4> a{0, 0, 0, 0};
  int i = 0;
  for (int v : alpha) {
    if (i >= 4) throw DomainError("jet: multi-index too long");
    a[i++] = v;
  }
  return extract(a);
}

Jet Jet::derivative(int axis) const {
  if (empty()) throw DomainError("jet: derivative on empty jet");
  if (axis < 0 || axis >= nv_) throw DomainError("jet: derivative axis out of range");
  const Tables& t = tables(nv_);
  Jet out(nv_);
  for (int p = 0; p < t.count; ++p) {
    if (t.degree[p] >= kOrder) continue;  // top order of the result is unknown, left zero
    std::array<int, 4> a = t.alpha[p];
    a[axis] += 1;
    out.c_[p] = c_[t.pos(a)] * a[axis];
  }
  return out;
}

Jet Jet::operator-() const {
  Jet out = *this;
  for (double& x : out.c_) x = -x;
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  check_match(*this, o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  check_match(*this, o);
  for (size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet out = a;
  out += b;
  return out;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet out = a;
  out -= b;
  return out;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_match(a, b);
  const Tables& t = tables(a.nv_);
  Jet out(a.nv_);
  for (const auto& [i, j, k] : t.prod) out.c_[k] += a.c_[i] * b.c_[j];
  return out;
}

Jet operator/(const Jet& a, const Jet& b) {
  check_match(a, b);
  if (b.value() == 0.0 || !std::isfinite(b.value()))
    throw DivisionByZeroJet("jet: division by jet with zero constant term");
  return a * recip(b);
}

Jet operator+(const Jet& a, double s) { Jet o = a; o.c_[0] += s; return o; }
Jet operator+(double s, const Jet& a) { return a + s; }
Jet operator-(const Jet& a, double s) { Jet o = a; o.c_[0] -= s; return o; }
Jet operator-(double s, const Jet& a) { Jet o = -a; o.c_[0] += s; return o; }
Jet operator*(const Jet& a, double s) {
  Jet o = a;
  for (double& x : o.c_) x *= s;
  return o;
}
Jet operator*(double s, const Jet& a) { return a * s; }
Jet operator/(const Jet& a, double s) { return a * (1.0 / s); }
Jet operator/(double s, const Jet& a) { return recip(a) * s; }

Jet Jet::compose(const Jet& a, const std::array<double, 5>& d) {
  if (a.empty()) throw DomainError("jet: compose on empty jet");
  Jet x = a;
  x.c_[0] = 0.0;
  // Horner over the truncated ring: sum_k d[k]/k! x^k.
  Jet res = Jet::constant(d[4] / 24.0, a.nv_);
  res = res * x + d[3] / 6.0;
  res = res * x + d[2] / 2.0;
  res = res * x + d[1];
  res = res * x + d[0];
  return res;
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return Jet::compose(a, {s, c, -s, -c, s});
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  return Jet::compose(a, {c, -s, -c, s, c});
}

Jet sinh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return Jet::compose(a, {s, c, s, c, s});
}

Jet cosh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  return Jet::compose(a, {c, s, c, s, c});
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  return Jet::compose(a, {e, e, e, e, e});
}

Jet log(const Jet& a) {
  const double v = a.value();
  if (!(v > 0.0)) throw DomainError("jet: log of non-positive constant term");
  return Jet::compose(a, {std::log(v), 1 / v, -1 / (v * v), 2 / (v * v * v), -6 / (v * v * v * v)});
}

Jet sqrt(const Jet& a) {
  const double v = a.value();
  if (!(v > 0.0)) throw DomainError("jet: sqrt of non-positive constant term");
  const double s = std::sqrt(v);
  return Jet::compose(a, {s, 0.5 / s, -0.25 / (s * v), 0.375 / (s * v * v), -0.9375 / (s * v * v * v)});
}

Jet recip(const Jet& a) {
  const double v = a.value();
  if (v == 0.0 || !std::isfinite(v))
    throw DivisionByZeroJet("jet: reciprocal of zero constant term");
  const double v2 = v * v;
  return Jet::compose(a, {1 / v, -1 / v2, 2 / (v2 * v), -6 / (v2 * v2), 24 / (v2 * v2 * v)});
}

Jet pow(const Jet& a, double p) {
  const double r = std::round(p);
  if (std::abs(p - r) < 1e-12 && std::abs(r) <= 16) {
    int n = static_cast<int>(r);
    if (n == 0) return Jet::constant(1.0, a.nvars());
    Jet base = n > 0 ? a : recip(a);
    n = std::abs(n);
    Jet acc = base;
    for (int k = 1; k < n; ++k) acc = acc * base;
    return acc;
  }
  const double v = a.value();
  if (!(v > 0.0)) throw DomainError("jet: non-integer power of non-positive constant term");
  std::array<double, 5> d{};
  double coef = 1.0;
  for (int k = 0; k <= 4; ++k) {
    d[k] = coef * std::pow(v, p - k);
    coef *= (p - k);
  }
  return Jet::compose(a, d);
}

}  // namespace confgeo
