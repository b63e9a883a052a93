// Chart-local manifold representation.
//
// All geometry is chart-local: a Chart is a coordinate box (plus an optional
// extra domain predicate), and a TensorField maps seeded coordinate jets to
// flattened component jets. Component arrays are ordered
// [triplet slot][lower indices...][upper indices...], row-major, with indices
// running 0..dim-1 and triplet slots 0..2.

#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "quatlike/jet.hpp"
#include "quatlike/linalg.hpp"

namespace quatlike {

// PCG32: deterministic across platforms, used for all sampling.
class Pcg32 {
 public:
  explicit Pcg32(uint64_t seed, uint64_t seq = 0x14057b7ef767814fULL) {
    state_ = 0;
    inc_ = (seq << 1) | 1;
    next();
    state_ += seed;
    next();
  }
  uint32_t next() {
    uint64_t old = state_;
    state_ = old * 6364136223846793005ULL + inc_;
    uint32_t xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
    uint32_t rot = static_cast<uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32 - rot) & 31));
  }
  double uniform() { return next() * (1.0 / 4294967296.0); }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  uint64_t state_, inc_;
};

struct Box {
  std::vector<double> lo, hi;
};

struct Chart {
  int dim = 0;
  std::vector<std::string> names;
  Box box;
  std::function<bool(std::span<const double>)> extra_domain;  // optional

  bool contains(std::span<const double> p) const;
  std::vector<double> sample(Pcg32& rng) const;  // rejection inside domain
};

using FieldFn = std::function<JetVec(const JetVec&)>;

struct TensorField {
  int dim = 0;
  int nup = 0, ndown = 0;
  int extra = 1;  // leading multiplicity, 3 for triplet-valued fields
  // Evaluating through a chart map consumes jet orders (the Jacobian is one
  // order below the seeds). order_cost records how many orders this field's
  // evaluation loses, so at(p, k) can seed high enough to return order-k jets.
  int order_cost = 0;
  FieldFn eval;

  int ncomp() const {
    int n = extra;
    for (int i = 0; i < nup + ndown; ++i) n *= dim;
    return n;
  }
  JetVec at(std::span<const double> p, int order) const {
    return eval(seed_point(p, std::min(order + order_cost, kMaxJetOrder)));
  }
};

TensorField constant_field(int dim, int nup, int ndown, int extra,
                           std::vector<double> values);

// ---- triplet algebra --------------------------------------------------------

template <class T>
struct Triplet {
  std::array<T, 3> a{};
  T& operator[](int i) { return a[i]; }
  const T& operator[](int i) const { return a[i]; }
};

template <class T>
Triplet<T> cross(const Triplet<T>& x, const Triplet<T>& y) {
  Triplet<T> r;
  r[0] = x[1] * y[2] - x[2] * y[1];
  r[1] = x[2] * y[0] - x[0] * y[2];
  r[2] = x[0] * y[1] - x[1] * y[0];
  return r;
}

template <class T>
T dot(const Triplet<T>& x, const Triplet<T>& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
}

inline constexpr double kEps3[3][3][3] = {
    {{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
    {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
    {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};

// ---- differential operators -------------------------------------------------

// components and all first partials of a field at p
struct PartialResult {
  std::vector<double> comp;  // ncomp
  Mat d;                     // rows = ncomp, cols = dim (d(c,X) = ∂_X comp_c)
};
PartialResult partial(const TensorField& f, std::span<const double> p);

enum class TensorKind { Vector, OneForm, T11, T02 };

// Lie derivative of T along k at p, values
std::vector<double> lie_derivative(const TensorField& k, const TensorField& T,
                                   TensorKind kind, std::span<const double> p);

// (dA)_{XY} = ∂_X A_Y - ∂_Y A_X, applied per triplet slot when extra == 3
std::vector<double> exterior_derivative(const TensorField& A,
                                        std::span<const double> p);

// ---- chart maps and pullbacks -----------------------------------------------

struct ChartMap {
  int dim_from = 0, dim_to = 0;
  FieldFn apply;
};

// Jacobian entries as jets one order lower: result[M * dim_from + X] = ∂φ^M/∂x^X
JetVec chart_map_jacobian(const JetVec& phi, int dim_from);

// pull a tensor field on the target chart back through the map (square maps).
// The resulting field differentiates its input slots directly, so it must be
// evaluated on its own chart's seeds (compose_field makes it safe elsewhere).
TensorField pullback_tensor(const ChartMap& map, const TensorField& src);

// Componentwise composition src ∘ point_map. The inner map sends this field's
// chart into src's chart; evaluation re-seeds src at the mapped point and
// substitutes the inner jets through the chain rule, so the result is safe to
// evaluate on arbitrary jets (slices, section embeddings, other charts).
TensorField compose_field(const TensorField& src, FieldFn point_map,
                          int dim_from);

}  // namespace quatlike
