#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "quatlike/connections.hpp"
#include "test_util.hpp"

using namespace quatlike;
using namespace quatlike::testutil;

namespace {

// mildly nonlinear diffeomorphism y = x + amp * quadratic(x); pulling the
// standard structure/metric through it gives a curved-chart presentation of
// the flat hyper-Kähler space
ChartMap curly_map(int n, double amp, uint64_t seed) {
  Pcg32 rng(seed);
  auto coef = std::make_shared<std::vector<double>>(n * n * n);
  for (double& c : *coef) c = rng.uniform(-1.0, 1.0);
  ChartMap map;
  map.dim_from = map.dim_to = n;
  map.apply = [n, amp, coef](const JetVec& x) {
    JetVec y;
    y.reserve(n);
    for (int M = 0; M < n; ++M) {
      Jet s = x[M];
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          s += amp * (*coef)[(M * n + i) * n + j] * (x[i] * x[j]);
      y.push_back(s);
    }
    return y;
  };
  return map;
}

struct CurvedFlat {
  int n;
  HypercomplexTriple H;
  TensorField g;
};

CurvedFlat curved_flat(int n, uint64_t seed = 11) {
  ChartMap map = curly_map(n, 0.08, seed);
  CurvedFlat c{n, {}, {}};
  TensorField J = constant_field(n, 1, 1, 3, standard_structure_values(n));
  std::vector<double> eye(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) eye[i * n + i] = 1.0;
  TensorField g = constant_field(n, 0, 2, 1, eye);
  c.H.J = pullback_tensor(map, J);
  c.g = pullback_tensor(map, g);
  return c;
}

}  // namespace

TEST_CASE("covariant derivative: zero connection on constant tensors") {
  const int n = 4;
  JetVec gamma(static_cast<size_t>(n) * n * n, Jet(0.0, n, 1));
  JetVec T(static_cast<size_t>(n) * n, Jet(0.0, n, 1));
  for (int i = 0; i < n; ++i) T[i * n + i] = Jet(1.0, n, 1);
  JetVec nt = covariant_derivative(gamma, T, n, 1, 1);
  for (const Jet& j : nt) CHECK(j.value() == 0.0);
}

TEST_CASE("obata on the constant structure gives zero connection, full rank") {
  const int n = 8;
  HypercomplexTriple H = standard_structure(n);
  auto Jjets = eval_structure_jets(H.J, seed_point(std::vector<double>(n, 0.2), 2));
  ConnectionJets c = obata(Jjets, n);
  CHECK(c.solve_residual < 1e-13);
  CHECK(c.pivot_ratio > 1e-6);
  for (const Jet& j : c.gamma) CHECK(std::abs(j.value()) < 1e-12);
}

TEST_CASE("curved flat chart: Obata equals Levi-Civita (hyper-Kähler case)") {
  const int n = 8;
  CurvedFlat cf = curved_flat(n);
  Pcg32 rng(5);
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<double> p(n);
    for (double& c : p) c = rng.uniform(-0.4, 0.4);
    auto Jjets = structure_jets_at(cf.H.J, p, 2);
    CHECK(quaternion_algebra_residual(structure_values(Jjets, n)) < 1e-11);

    ConnectionJets ob = obata(Jjets, n);
    CHECK(ob.solve_residual < 1e-9);
    CHECK(ob.pivot_ratio > 1e-8);
    CHECK(nabla_j_residual(ob.gamma, Jjets, nullptr, n) < 1e-9);

    JetVec gj = cf.g.eval(seed_point(p, 3));
    JetVec lc = levi_civita(gj, n);
    // metricity of Levi-Civita
    JetVec gj2 = cf.g.eval(seed_point(p, 2));
    JetVec ng = covariant_derivative(lc, gj2, n, 0, 2);
    for (const Jet& j : ng) CHECK(std::abs(j.value()) < 1e-10);
    // Obata = Levi-Civita, including first derivatives
    for (size_t i = 0; i < lc.size(); ++i) {
      CHECK(std::abs(lc[i].value() - ob.gamma[i].value()) < 1e-8);
      for (int s = 0; s < n; ++s)
        CHECK(std::abs(lc[i].d1(s) - ob.gamma[i].d1(s)) < 1e-6);
    }
  }
}

TEST_CASE("xi transform: identity at ξ = 0 and closed-form S pattern") {
  const int n = 8;
  HypercomplexTriple H = standard_structure(n);
  std::vector<double> p(n, 0.1);
  auto Jjets = eval_structure_jets(H.J, seed_point(p, 2));
  ConnectionJets c = obata(Jjets, n);
  c.omega = std::array<JetVec, 3>{};
  for (int a = 0; a < 3; ++a)
    (*c.omega).at(a).assign(n, Jet(0.0, n, c.gamma[0].order()));

  JetVec zero_xi(n, Jet(0.0, n, 2));
  ConnectionJets same = xi_transform(c, zero_xi, Jjets);
  for (size_t i = 0; i < c.gamma.size(); ++i)
    CHECK(same.gamma[i].value() == doctest::Approx(c.gamma[i].value()));

  Pcg32 rng(2);
  JetVec xi(n, Jet(0.0, n, 2));
  std::vector<double> xv(n);
  for (int i = 0; i < n; ++i) {
    xv[i] = rng.uniform(-1, 1);
    xi[i] = Jet(xv[i], n, 2);
  }
  ConnectionJets t = xi_transform(c, xi, Jjets);
  // S^ξ closed form against independent assembly
  auto s = eval_structure(H.J, p);
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      for (int Z = 0; Z < n; ++Z) {
        double expect = (Y == Z ? xv[X] : 0.0) + (X == Z ? xv[Y] : 0.0);
        for (int a = 0; a < 3; ++a) {
          double jxiX = 0, jxiY = 0;
          for (int W = 0; W < n; ++W) {
            jxiX += s.J[a][X * n + W] * xv[W];
            jxiY += s.J[a][Y * n + W] * xv[W];
          }
          expect -= jxiX * s.J[a][Y * n + Z] + jxiY * s.J[a][X * n + Z];
        }
        CHECK(t.gamma[(X * n + Y) * n + Z].value() == doctest::Approx(expect));
      }
  // output still solves the quaternionic condition with ω' = ω + J*ξ
  CHECK(nabla_j_residual(t.gamma, Jjets, &*t.omega, n) < 1e-12);
}

TEST_CASE("xi family closure: ξ1 then ξ2 equals ξ1 + ξ2") {
  const int n = 8;
  CurvedFlat cf = curved_flat(n, 23);
  std::vector<double> p(n, 0.15);
  auto Jjets = structure_jets_at(cf.H.J, p, 2);
  ConnectionJets c = obata(Jjets, n);
  c.omega = std::array<JetVec, 3>{};
  for (int a = 0; a < 3; ++a)
    (*c.omega).at(a).assign(n, Jet(0.0, n, c.gamma[0].order()));
  Pcg32 rng(31);
  JetVec xi1(n), xi2(n), xi12(n);
  for (int i = 0; i < n; ++i) {
    double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
    xi1[i] = Jet(a, n, 2);
    xi2[i] = Jet(b, n, 2);
    xi12[i] = Jet(a + b, n, 2);
  }
  ConnectionJets two_step = xi_transform(xi_transform(c, xi1, Jjets), xi2, Jjets);
  ConnectionJets one_step = xi_transform(c, xi12, Jjets);
  for (size_t i = 0; i < two_step.gamma.size(); ++i)
    CHECK(std::abs(two_step.gamma[i].value() - one_step.gamma[i].value()) <
          1e-10);
  for (int a = 0; a < 3; ++a)
    for (int X = 0; X < n; ++X)
      CHECK(std::abs((*two_step.omega)[a][X].value() -
                     (*one_step.omega)[a][X].value()) < 1e-10);
}

TEST_CASE("gl connection: flat frame gives zero, curved chart certifies") {
  const int n = 8;
  {
    VielbeinJets vb = flat_vielbein(n, n, 1);
    ConnectionJets c;
    c.n = n;
    c.gamma.assign(static_cast<size_t>(n) * n * n, Jet(0.0, n, 1));
    GlConnection gl = gl_connection(vb, c);
    CHECK(gl.residual < 1e-14);
    for (const CJet& w : gl.omega) CHECK(std::abs(w.value()) < 1e-14);
  }
  {
    CurvedFlat cf = curved_flat(n, 77);
    std::vector<double> p(n, -0.2);
    auto Jjets = structure_jets_at(cf.H.J, p, 2);
    ConnectionJets c = obata(Jjets, n);
    VielbeinJets vb = frame_from_structure(Jjets, n);
    GlConnection gl = gl_connection(vb, c);
    CHECK(gl.residual < 1e-8);
    // Gl(r,H) reality: conj(ω_X) = ρ ω_X ρ^{-1} with ρ^{-1} = -ρ
    const int two_r = n / 2;
    auto rho = rho_matrix(two_r);
    for (int X = 0; X < n; ++X)
      for (int A = 0; A < two_r; ++A)
        for (int B = 0; B < two_r; ++B) {
          std::complex<double> lhs =
              std::conj(gl.omega[(static_cast<size_t>(X) * two_r + A) * two_r + B]
                            .value());
          std::complex<double> rhs = 0.0;
          for (int C = 0; C < two_r; ++C)
            for (int D = 0; D < two_r; ++D)
              rhs += rho[A * two_r + C] *
                     gl.omega[(static_cast<size_t>(X) * two_r + C) * two_r + D]
                         .value() *
                     (-rho[D * two_r + B]);
          CHECK(std::abs(lhs - rhs) < 1e-8);
        }
  }
}
