#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quatlike/fields.hpp"
#include "test_util.hpp"

using namespace quatlike;
using namespace quatlike::testutil;

namespace {

TensorField poly_scalar_field(int dim, Poly p) {
  TensorField f;
  f.dim = dim;
  f.eval = [p](const JetVec& x) { return JetVec{p.eval(x)}; };
  return f;
}

TensorField gradient_field(int dim, Poly p) {
  TensorField f;
  f.dim = dim;
  f.ndown = 1;
  f.eval = [p, dim](const JetVec& x) {
    Jet v = p.eval(x);
    JetVec out;
    for (int i = 0; i < dim; ++i) out.push_back(v.partial(i));
    return out;
  };
  return f;
}

}  // namespace

TEST_CASE("partial: constant field has zero derivatives") {
  TensorField c = constant_field(4, 0, 2, 1, std::vector<double>(16, 2.5));
  auto r = partial(c, std::vector<double>{0.1, 0.2, 0.3, 0.4});
  for (int i = 0; i < 16; ++i) {
    CHECK(r.comp[i] == 2.5);
    for (int X = 0; X < 4; ++X) CHECK(r.d(i, X) == 0.0);
  }
}

TEST_CASE("partial: q1*q2 on dim-4 chart") {
  TensorField f;
  f.dim = 4;
  f.eval = [](const JetVec& x) { return JetVec{x[0] * x[1]}; };
  auto r = partial(f, std::vector<double>{1, 2, 0, 0});
  CHECK(r.comp[0] == doctest::Approx(2.0));
  CHECK(r.d(0, 0) == doctest::Approx(2.0));
  CHECK(r.d(0, 1) == doctest::Approx(1.0));
  CHECK(r.d(0, 2) == doctest::Approx(0.0));
}

TEST_CASE("partial of random polynomial fields matches finite differences") {
  Pcg32 rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    int dim = 4;
    Poly p = random_poly(dim, rng);
    TensorField f = poly_scalar_field(dim, p);
    std::vector<double> pt(dim);
    for (double& c : pt) c = rng.uniform(-1.0, 1.0);
    auto r = partial(f, pt);
    auto fn = [&](std::span<const double> q) { return p.value(q); };
    for (int X = 0; X < dim; ++X) CHECK(close_rel(r.d(0, X), fd1(fn, pt, X), 1e-6));
  }
}

TEST_CASE("d(df) = 0 for random scalar fields") {
  Pcg32 rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    int dim = 4 + 2 * (rep % 3);
    Poly p = random_poly(dim, rng);
    TensorField A = gradient_field(dim, p);
    std::vector<double> pt(dim);
    for (double& c : pt) c = rng.uniform(-1.0, 1.0);
    auto dA = exterior_derivative(A, pt);
    for (double v : dA) CHECK(std::abs(v) < 1e-12);
  }
}

TEST_CASE("dA of A = q2 dq1 and antisymmetry of dA") {
  TensorField A;
  A.dim = 4;
  A.ndown = 1;
  A.eval = [](const JetVec& x) {
    JetVec out(4, Jet(0.0, x[0].dim(), x[0].order()));
    out[0] = x[1];  // A_0 = q^1  (so dA(∂_1, ∂_0) = 1)
    return out;
  };
  auto dA = exterior_derivative(A, std::vector<double>{0.3, 0.4, 0.0, 0.0});
  CHECK(dA[1 * 4 + 0] == doctest::Approx(1.0));
  CHECK(dA[0 * 4 + 1] == doctest::Approx(-1.0));
  for (int X = 0; X < 4; ++X)
    for (int Y = 0; Y < 4; ++Y)
      CHECK(dA[X * 4 + Y] == doctest::Approx(-dA[Y * 4 + X]));
}

TEST_CASE("Lie derivative basics: zero field, constant field") {
  int dim = 4;
  TensorField zero_k = constant_field(dim, 1, 0, 1, std::vector<double>(4, 0.0));
  TensorField T = constant_field(dim, 1, 1, 1, [] {
    std::vector<double> v(16, 0.0);
    for (int i = 0; i < 4; ++i) v[i * 4 + i] = 1.0;
    return v;
  }());
  std::vector<double> p{0.1, -0.2, 0.3, 0.4};
  for (double v : lie_derivative(zero_k, T, TensorKind::T11, p))
    CHECK(v == 0.0);
  TensorField const_k = constant_field(dim, 1, 0, 1, {1, 2, 3, 4});
  for (double v : lie_derivative(const_k, T, TensorKind::T11, p))
    CHECK(v == 0.0);
}

TEST_CASE("rotation field is a flat-metric isometry; flow oracle agrees") {
  const int dim = 4;
  // k = rotation in the (0,1) plane: k = (-q1, q0, 0, 0)
  TensorField k;
  k.dim = dim;
  k.nup = 1;
  k.eval = [](const JetVec& x) {
    JetVec out;
    out.push_back(-x[1]);
    out.push_back(x[0]);
    out.push_back(Jet(0.0, x[0].dim(), x[0].order()));
    out.push_back(Jet(0.0, x[0].dim(), x[0].order()));
    return out;
  };
  std::vector<double> eye(16, 0.0);
  for (int i = 0; i < 4; ++i) eye[i * 4 + i] = 1.0;
  TensorField g = constant_field(dim, 0, 2, 1, eye);
  std::vector<double> p{0.5, -0.3, 0.2, 0.7};
  auto L = lie_derivative(k, g, TensorKind::T02, p);
  for (double v : L) CHECK(std::abs(v) < 1e-14);

  // flow-pushforward oracle on a NON-invariant tensor: T = dq0 ⊗ dq0
  std::vector<double> tv(16, 0.0);
  tv[0] = 1.0;
  TensorField T = constant_field(dim, 0, 2, 1, tv);
  auto LT = lie_derivative(k, T, TensorKind::T02, p);

  auto flow = [&](std::vector<double> q, double t) {
    int steps = 16;
    double h = t / steps;
    auto vel = [&](const std::vector<double>& s) {
      return std::vector<double>{-s[1], s[0], 0.0, 0.0};
    };
    for (int s = 0; s < steps; ++s) {
      auto k1 = vel(q);
      std::vector<double> q2(4), q3(4), q4(4);
      for (int i = 0; i < 4; ++i) q2[i] = q[i] + 0.5 * h * k1[i];
      auto k2 = vel(q2);
      for (int i = 0; i < 4; ++i) q3[i] = q[i] + 0.5 * h * k2[i];
      auto k3 = vel(q3);
      for (int i = 0; i < 4; ++i) q4[i] = q[i] + h * k3[i];
      auto k4 = vel(q4);
      for (int i = 0; i < 4; ++i)
        q[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
    }
    return q;
  };
  auto pullback_at = [&](double t) {
    // (φ_t^* T)_{XY}(p) = ∂_X φ^M ∂_Y φ^N T_{MN}(φ(p)); numeric jacobian
    double h = 1e-6;
    Mat D(4, 4);
    for (int X = 0; X < 4; ++X) {
      auto pp = p, pm = p;
      pp[X] += h;
      pm[X] -= h;
      auto fp = flow(pp, t), fm = flow(pm, t);
      for (int M = 0; M < 4; ++M) D(M, X) = (fp[M] - fm[M]) / (2 * h);
    }
    std::vector<double> out(16, 0.0);
    for (int X = 0; X < 4; ++X)
      for (int Y = 0; Y < 4; ++Y)
        out[X * 4 + Y] = D(0, X) * D(0, Y);  // T = dq0⊗dq0 constant
    return out;
  };
  double t = 1e-4;
  auto Tp = pullback_at(t), Tm = pullback_at(-t);
  for (int c = 0; c < 16; ++c) {
    double oracle = (Tp[c] - Tm[c]) / (2 * t);
    CHECK(std::abs(LT[c] - oracle) < 1e-6);
  }
}

TEST_CASE("Lie derivative satisfies Leibniz over contraction") {
  Pcg32 rng(21);
  const int dim = 4;
  for (int rep = 0; rep < 10; ++rep) {
    Poly pk0 = random_poly(dim, rng, 2, 4), pk1 = random_poly(dim, rng, 2, 4);
    Poly pxi = random_poly(dim, rng, 2, 4), pv = random_poly(dim, rng, 2, 4);
    TensorField k;
    k.dim = dim;
    k.nup = 1;
    k.eval = [=](const JetVec& x) {
      JetVec out;
      out.push_back(pk0.eval(x));
      out.push_back(pk1.eval(x));
      out.push_back(x[2] * x[0]);
      out.push_back(x[3]);
      return out;
    };
    TensorField xi;
    xi.dim = dim;
    xi.ndown = 1;
    xi.eval = [=](const JetVec& x) {
      JetVec out;
      out.push_back(pxi.eval(x));
      out.push_back(x[0]);
      out.push_back(x[1] * x[1]);
      out.push_back(pxi.eval(x) * x[0]);
      return out;
    };
    TensorField v;
    v.dim = dim;
    v.nup = 1;
    v.eval = [=](const JetVec& x) {
      JetVec out;
      out.push_back(pv.eval(x));
      out.push_back(x[2]);
      out.push_back(x[0] * x[3]);
      out.push_back(pv.eval(x) + x[1]);
      return out;
    };
    // scalar s = ξ(v); L_k s = k(s)
    TensorField s;
    s.dim = dim;
    s.eval = [=](const JetVec& x) {
      JetVec xs = xi.eval(x), vs = v.eval(x);
      Jet sum(0.0, x[0].dim(), x[0].order());
      for (int i = 0; i < dim; ++i) sum += xs[i] * vs[i];
      return JetVec{sum};
    };
    std::vector<double> p(dim);
    for (double& c : p) c = rng.uniform(-0.7, 0.7);
    auto ks = partial(k, p);
    auto ss = partial(s, p);
    double lhs = 0;
    for (int W = 0; W < dim; ++W) lhs += ks.comp[W] * ss.d(0, W);
    auto Lxi = lie_derivative(k, xi, TensorKind::OneForm, p);
    auto Lv = lie_derivative(k, v, TensorKind::Vector, p);
    auto xv = partial(xi, p);
    auto vv = partial(v, p);
    double rhs = 0;
    for (int i = 0; i < dim; ++i)
      rhs += Lxi[i] * vv.comp[i] + xv.comp[i] * Lv[i];
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("triplet algebra: antisymmetry, orthogonality, Jacobi") {
  Pcg32 rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    Triplet<double> a, b, c;
    for (int i = 0; i < 3; ++i) {
      a[i] = rng.uniform(-2, 2);
      b[i] = rng.uniform(-2, 2);
      c[i] = rng.uniform(-2, 2);
    }
    auto ab = cross(a, b), ba = cross(b, a);
    for (int i = 0; i < 3; ++i) CHECK(ab[i] == doctest::Approx(-ba[i]));
    CHECK(dot(a, ab) == doctest::Approx(0.0));
    auto jac1 = cross(cross(a, b), c);
    auto jac2 = cross(cross(b, c), a);
    auto jac3 = cross(cross(c, a), b);
    for (int i = 0; i < 3; ++i)
      CHECK(jac1[i] + jac2[i] + jac3[i] == doctest::Approx(0.0));
  }
}

TEST_CASE("pullback through a linear map conjugates a constant (1,1) tensor") {
  const int n = 2;
  // map: y = M x with M = [[2,1],[0,1]]
  ChartMap map;
  map.dim_from = map.dim_to = n;
  map.apply = [](const JetVec& x) {
    JetVec y;
    y.push_back(2.0 * x[0] + x[1]);
    y.push_back(x[1]);
    return y;
  };
  TensorField J = constant_field(n, 1, 1, 1, {0.0, 1.0, -1.0, 0.0});
  TensorField Jp = pullback_tensor(map, J);
  auto v = Jp.at(std::vector<double>{0.4, 0.6}, 1);
  // J'_X^Y = M_X^M J_M^N (M^{-1})_N^Y  with storage [X][Y]
  // M^{-1} = [[0.5,-0.5],[0,1]]
  double M[2][2] = {{2, 1}, {0, 1}};
  double Mi[2][2] = {{0.5, -0.5}, {0, 1}};
  double Jm[2][2] = {{0, 1}, {-1, 0}};
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y) {
      double expect = 0;
      for (int Mm = 0; Mm < n; ++Mm)
        for (int N = 0; N < n; ++N)
          expect += M[Mm][X] * Jm[Mm][N] * Mi[Y][N];
      CHECK(v[X * n + Y].value() == doctest::Approx(expect));
    }
}

TEST_CASE("chart sampling is deterministic and respects the domain") {
  Chart ch;
  ch.dim = 3;
  ch.box = {{-1, -1, -1}, {1, 1, 1}};
  ch.extra_domain = [](std::span<const double> p) {
    return p[0] * p[0] + p[1] * p[1] + p[2] * p[2] < 0.81;
  };
  Pcg32 a(17), b(17);
  for (int i = 0; i < 100; ++i) {
    auto pa = ch.sample(a);
    auto pb = ch.sample(b);
    CHECK(pa == pb);
    CHECK(ch.contains(pa));
  }
}
