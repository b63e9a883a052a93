// Truncated multivariate Taylor (jet) arithmetic up to order 3.
//
// A Jet carries a value together with exact partial derivatives with respect
// to the chart coordinates, up to a fixed order.  Mixed partials are stored
// once in symmetric-packed layout, so symmetry of d2/d3 is exact by
// construction.  All arithmetic propagates derivatives exactly (to machine
// rounding); there is no truncation error beyond the declared order.

#pragma once

#include <cassert>
#include <cmath>
#include <span>
#include <vector>

namespace quatlike {

constexpr int kMaxJetOrder = 3;

inline int sym2_count(int dim) { return dim * (dim + 1) / 2; }
inline int sym3_count(int dim) { return dim * (dim + 1) * (dim + 2) / 6; }

// packed index of (i,j), i <= j < dim
inline int sym2_index(int dim, int i, int j) {
  return i * dim - i * (i + 1) / 2 + j;
}

// packed index of sorted (i,j,k), i <= j <= k < dim
inline int sym3_index(int dim, int i, int j, int k) {
  int off = 0;
  for (int m = 0; m < i; ++m) off += sym2_count(dim - m);
  return off + sym2_index(dim - i, j - i, k - i);
}

inline void sort2(int& a, int& b) {
  if (a > b) std::swap(a, b);
}
inline void sort3(int& a, int& b, int& c) {
  sort2(a, b);
  sort2(b, c);
  sort2(a, b);
}

class Jet {
 public:
  Jet() = default;
  // constant jet (all derivative slots zero)
  Jet(double value, int dim, int order);
  // coordinate seed: value with d(index) = 1
  static Jet variable(double value, int dim, int order, int index);

  int dim() const { return dim_; }
  int order() const { return order_; }
  double value() const { return v_; }

  double d1(int i) const { return order_ >= 1 ? d_[i] : 0.0; }
  double d2(int i, int j) const {
    if (order_ < 2) return 0.0;
    sort2(i, j);
    return d_[dim_ + sym2_index(dim_, i, j)];
  }
  double d3(int i, int j, int k) const {
    if (order_ < 3) return 0.0;
    sort3(i, j, k);
    return d_[dim_ + sym2_count(dim_) + sym3_index(dim_, i, j, k)];
  }

  double& d1ref(int i) { return d_[i]; }
  double& d2ref(int i, int j) {
    sort2(i, j);
    return d_[dim_ + sym2_index(dim_, i, j)];
  }
  double& d3ref(int i, int j, int k) {
    sort3(i, j, k);
    return d_[dim_ + sym2_count(dim_) + sym3_index(dim_, i, j, k)];
  }

  std::span<const double> d1_packed() const {
    return {d_.data(), order_ >= 1 ? static_cast<size_t>(dim_) : 0};
  }
  std::span<const double> d2_packed() const {
    return {d_.data() + dim_,
            order_ >= 2 ? static_cast<size_t>(sym2_count(dim_)) : 0};
  }

  // jet of the partial derivative ∂_i f, one order lower
  Jet partial(int i) const;

  // truncate (or reinterpret) to a lower order
  Jet truncated(int order) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(double c) {
    v_ += c;
    return *this;
  }
  Jet& operator-=(double c) {
    v_ -= c;
    return *this;
  }
  Jet& operator*=(double c);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator+(Jet a, double c) { return a += c; }
  friend Jet operator+(double c, Jet a) { return a += c; }
  friend Jet operator-(Jet a, double c) { return a -= c; }
  friend Jet operator-(double c, const Jet& a) { return (-a) += c; }
  friend Jet operator*(Jet a, double c) { return a *= c; }
  friend Jet operator*(double c, Jet a) { return a *= c; }
  friend Jet operator/(Jet a, double c) { return a *= (1.0 / c); }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator/(double c, const Jet& b);

  // Faà-di-Bruno composition: outer has derivatives g[0..order] at value()
  friend Jet jet_compose(std::span<const double> g, const Jet& u);

  // multivariate chain rule: outer is a jet in m variables, inner supplies m
  // jets (in some other set of variables) whose values match outer's
  // expansion point; the result is the composite's jet in the inner variables
  friend Jet jet_substitute(const Jet& outer, std::span<const Jet> inner);

  friend Jet sqrt(const Jet& u);
  friend Jet exp(const Jet& u);
  friend Jet log(const Jet& u);
  friend Jet sin(const Jet& u);
  friend Jet cos(const Jet& u);
  friend Jet pow(const Jet& u, double p);

 private:
  static int slot_count(int dim, int order);

  double v_ = 0.0;
  int dim_ = 0;
  int order_ = 0;
  std::vector<double> d_;  // [d1 | d2 packed | d3 packed], sized by order
};

using JetVec = std::vector<Jet>;

// seeded coordinate jets at a point
JetVec seed_point(std::span<const double> p, int order);

}  // namespace quatlike
