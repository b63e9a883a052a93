#include "quatlike/jet.hpp"

#include <stdexcept>

namespace quatlike {

int Jet::slot_count(int dim, int order) {
  int n = 0;
  if (order >= 1) n += dim;
  if (order >= 2) n += sym2_count(dim);
  if (order >= 3) n += sym3_count(dim);
  return n;
}

Jet::Jet(double value, int dim, int order) : v_(value), dim_(dim), order_(order) {
  assert(order >= 0 && order <= kMaxJetOrder);
  d_.assign(slot_count(dim, order), 0.0);
}

Jet Jet::variable(double value, int dim, int order, int index) {
  Jet j(value, dim, order);
  if (order >= 1) j.d_[index] = 1.0;
  return j;
}

Jet Jet::partial(int i) const {
  assert(order_ >= 1);
  Jet r(d1(i), dim_, order_ - 1);
  if (order_ >= 2)
    for (int a = 0; a < dim_; ++a) r.d1ref(a) = d2(i, a);
  if (order_ >= 3)
    for (int a = 0; a < dim_; ++a)
      for (int b = a; b < dim_; ++b) r.d2ref(a, b) = d3(i, a, b);
  return r;
}

Jet Jet::truncated(int order) const {
  assert(order <= order_);
  if (order == order_) return *this;
  Jet r(v_, dim_, order);
  int n = slot_count(dim_, order);
  for (int s = 0; s < n; ++s) r.d_[s] = d_[s];
  return r;
}

Jet Jet::operator-() const {
  Jet r = *this;
  r.v_ = -r.v_;
  for (double& x : r.d_) x = -x;
  return r;
}

Jet& Jet::operator*=(double c) {
  v_ *= c;
  for (double& x : d_) x *= c;
  return *this;
}

Jet& Jet::operator+=(const Jet& o) {
  if (dim_ == 0) {  // default-constructed: behaves as the scalar 0 + v
    *this = o;
    return *this;
  }
  if (o.dim_ == 0) {
    v_ += o.v_;
    return *this;
  }
  assert(dim_ == o.dim_);
  if (o.order_ < order_) {
    Jet t = truncated(o.order_);
    *this = t;
  }
  v_ += o.v_;
  size_t n = std::min(d_.size(), o.d_.size());
  for (size_t s = 0; s < n; ++s) d_[s] += o.d_[s];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  *this += -o;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  if (a.dim_ == 0) return b * a.v_;
  if (b.dim_ == 0) return a * b.v_;
  assert(a.dim_ == b.dim_);
  const int dim = a.dim_;
  const int order = std::min(a.order_, b.order_);
  Jet r(a.v_ * b.v_, dim, order);
  if (order >= 1)
    for (int i = 0; i < dim; ++i) r.d1ref(i) = a.v_ * b.d1(i) + a.d1(i) * b.v_;
  if (order >= 2)
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j)
        r.d2ref(i, j) = a.v_ * b.d2(i, j) + a.d1(i) * b.d1(j) +
                        a.d1(j) * b.d1(i) + a.d2(i, j) * b.v_;
  if (order >= 3)
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j)
        for (int k = j; k < dim; ++k)
          r.d3ref(i, j, k) = a.v_ * b.d3(i, j, k) + a.d3(i, j, k) * b.v_ +
                             a.d1(i) * b.d2(j, k) + a.d1(j) * b.d2(i, k) +
                             a.d1(k) * b.d2(i, j) + a.d2(j, k) * b.d1(i) +
                             a.d2(i, k) * b.d1(j) + a.d2(i, j) * b.d1(k);
  return r;
}

Jet jet_compose(std::span<const double> g, const Jet& u) {
  const int dim = u.dim_;
  const int order = std::min<int>(u.order_, static_cast<int>(g.size()) - 1);
  Jet r(g[0], dim, order);
  if (order >= 1)
    for (int i = 0; i < dim; ++i) r.d1ref(i) = g[1] * u.d1(i);
  if (order >= 2)
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j)
        r.d2ref(i, j) = g[1] * u.d2(i, j) + g[2] * u.d1(i) * u.d1(j);
  if (order >= 3)
    for (int i = 0; i < dim; ++i)
      for (int j = i; j < dim; ++j)
        for (int k = j; k < dim; ++k)
          r.d3ref(i, j, k) =
              g[1] * u.d3(i, j, k) +
              g[2] * (u.d1(i) * u.d2(j, k) + u.d1(j) * u.d2(i, k) +
                      u.d1(k) * u.d2(i, j)) +
              g[3] * u.d1(i) * u.d1(j) * u.d1(k);
  return r;
}

Jet jet_substitute(const Jet& outer, std::span<const Jet> inner) {
  const int m = outer.dim();
  const int d = inner[0].dim();
  const int order = std::min(outer.order(), inner[0].order());
  Jet r(outer.value(), d, order);
  if (order >= 1)
    for (int s = 0; s < d; ++s) {
      double acc = 0.0;
      for (int i = 0; i < m; ++i) acc += outer.d1(i) * inner[i].d1(s);
      r.d1ref(s) = acc;
    }
  if (order >= 2)
    for (int s = 0; s < d; ++s)
      for (int t = s; t < d; ++t) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) {
          acc += outer.d1(i) * inner[i].d2(s, t);
          for (int j = 0; j < m; ++j)
            acc += outer.d2(i, j) * inner[i].d1(s) * inner[j].d1(t);
        }
        r.d2ref(s, t) = acc;
      }
  if (order >= 3)
    for (int s = 0; s < d; ++s)
      for (int t = s; t < d; ++t)
        for (int u = t; u < d; ++u) {
          double acc = 0.0;
          for (int i = 0; i < m; ++i) {
            acc += outer.d1(i) * inner[i].d3(s, t, u);
            for (int j = 0; j < m; ++j) {
              acc += outer.d2(i, j) * (inner[i].d2(s, t) * inner[j].d1(u) +
                                       inner[i].d2(s, u) * inner[j].d1(t) +
                                       inner[i].d2(t, u) * inner[j].d1(s));
              for (int k = 0; k < m; ++k)
                acc += outer.d3(i, j, k) * inner[i].d1(s) * inner[j].d1(t) *
                       inner[k].d1(u);
            }
          }
          r.d3ref(s, t, u) = acc;
        }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * (1.0 / b); }

Jet operator/(double c, const Jet& b) {
  const double u = b.v_;
  if (u == 0.0) throw std::domain_error("jet: division by zero value");
  const double iu = 1.0 / u;
  const double g[4] = {c * iu, -c * iu * iu, 2.0 * c * iu * iu * iu,
                       -6.0 * c * iu * iu * iu * iu};
  return jet_compose({g, 4}, b);
}

Jet sqrt(const Jet& u) {
  const double x = u.v_;
  if (x <= 0.0) throw std::domain_error("jet: sqrt of non-positive value");
  const double r = std::sqrt(x);
  const double g[4] = {r, 0.5 / r, -0.25 / (r * x), 0.375 / (r * x * x)};
  return jet_compose({g, 4}, u);
}

Jet exp(const Jet& u) {
  const double e = std::exp(u.v_);
  const double g[4] = {e, e, e, e};
  return jet_compose({g, 4}, u);
}

Jet log(const Jet& u) {
  const double x = u.v_;
  if (x <= 0.0) throw std::domain_error("jet: log of non-positive value");
  const double ix = 1.0 / x;
  const double g[4] = {std::log(x), ix, -ix * ix, 2.0 * ix * ix * ix};
  return jet_compose({g, 4}, u);
}

Jet sin(const Jet& u) {
  const double s = std::sin(u.v_), c = std::cos(u.v_);
  const double g[4] = {s, c, -s, -c};
  return jet_compose({g, 4}, u);
}

Jet cos(const Jet& u) {
  const double s = std::sin(u.v_), c = std::cos(u.v_);
  const double g[4] = {c, -s, -c, s};
  return jet_compose({g, 4}, u);
}

Jet pow(const Jet& u, double p) {
  const double x = u.v_;
  if (x <= 0.0) throw std::domain_error("jet: pow of non-positive base");
  const double g[4] = {std::pow(x, p), p * std::pow(x, p - 1),
                       p * (p - 1) * std::pow(x, p - 2),
                       p * (p - 1) * (p - 2) * std::pow(x, p - 3)};
  return jet_compose({g, 4}, u);
}

JetVec seed_point(std::span<const double> p, int order) {
  const int dim = static_cast<int>(p.size());
  JetVec x;
  x.reserve(dim);
  for (int i = 0; i < dim; ++i) x.push_back(Jet::variable(p[i], dim, order, i));
  return x;
}

}  // namespace quatlike
