#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "quatlike/curvature.hpp"
#include "test_util.hpp"

using namespace quatlike;
using namespace quatlike::testutil;

namespace {

ChartMap curly_map(int n, double amp, uint64_t seed) {
  Pcg32 rng(seed);
  auto coef = std::make_shared<std::vector<double>>(n * n * n);
  for (double& c : *coef) c = rng.uniform(-1.0, 1.0);
  ChartMap map;
  map.dim_from = map.dim_to = n;
  map.apply = [n, amp, coef](const JetVec& x) {
    JetVec y;
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

}  // namespace

TEST_CASE("zero connection gives zero curvature") {
  const int n = 4;
  JetVec gamma(static_cast<size_t>(n) * n * n, Jet(0.0, n, 1));
  for (double v : riemann(gamma, n)) CHECK(v == 0.0);
}

TEST_CASE("flat metric in a curvilinear chart stays flat") {
  const int n = 8;
  ChartMap map = curly_map(n, 0.07, 3);
  std::vector<double> eye(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) eye[i * n + i] = 1.0;
  TensorField g = pullback_tensor(map, constant_field(n, 0, 2, 1, eye));
  Pcg32 rng(8);
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<double> p(n);
    for (double& c : p) c = rng.uniform(-0.4, 0.4);
    JetVec gj = g.at(p, 2);
    JetVec lc = levi_civita(gj, n);
    auto R = riemann(lc, n);
    double worst = 0;
    for (double v : R) worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-8);
  }
}

TEST_CASE("conformally flat metric: Bianchi holds, Ricci symmetric") {
  const int n = 4;
  // g = exp(2φ) δ with polynomial φ
  TensorField g;
  g.dim = n;
  g.ndown = 2;
  g.eval = [n](const JetVec& x) {
    Jet phi = 0.1 * (x[0] * x[1]) + 0.05 * (x[2] * x[2] * x[3]) + 0.07 * x[3];
    Jet w = exp(2.0 * phi);
    JetVec out(static_cast<size_t>(n) * n, Jet(0.0, x[0].dim(), x[0].order()));
    for (int i = 0; i < n; ++i) out[i * n + i] = w;
    return out;
  };
  std::vector<double> p{0.3, -0.2, 0.4, 0.1};
  JetVec gj = g.at(p, 2);
  JetVec lc = levi_civita(gj, n);
  auto R = riemann(lc, n);
  double mx = 0;
  for (double v : R) mx = std::max(mx, std::abs(v));
  CHECK(mx > 1e-3);  // genuinely curved
  CHECK(first_bianchi_residual(R, n) < 1e-10);
  auto ric = ricci_from_riemann(R, n);
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      CHECK(std::abs(ric[X * n + Y] - ric[Y * n + X]) < 1e-10);
  // metricity
  JetVec ng = covariant_derivative(lc, g.at(p, 2), n, 0, 2);
  for (const Jet& j : ng) CHECK(std::abs(j.value()) < 1e-10);
}

TEST_CASE("constant zero SU(2) connection has zero curvature; quadratic case") {
  const int n = 4;
  std::array<JetVec, 3> omega;
  for (int a = 0; a < 3; ++a) omega[a].assign(n, Jet(0.0, n, 1));
  auto R = su2_curvature(omega, n);
  for (int a = 0; a < 3; ++a)
    for (double v : R[a]) CHECK(v == 0.0);
  // constant nonzero ω: R⃗ = c_ω ω⃗×ω⃗ exactly
  Triplet<std::vector<double>> w;
  Pcg32 rng(5);
  for (int a = 0; a < 3; ++a) {
    w[a].resize(n);
    for (double& v : w[a]) v = rng.uniform(-1, 1);
    for (int X = 0; X < n; ++X) omega[a][X] = Jet(w[a][X], n, 1);
  }
  R = su2_curvature(omega, n);
  for (int a = 0; a < 3; ++a)
    for (int X = 0; X < n; ++X)
      for (int Y = 0; Y < n; ++Y) {
        Triplet<double> wx{w[0][X], w[1][X], w[2][X]};
        Triplet<double> wy{w[0][Y], w[1][Y], w[2][Y]};
        double expect = kSu2FieldStrength * cross(wx, wy)[a];
        CHECK(R[a][X * n + Y] == doctest::Approx(expect));
      }
}

TEST_CASE("curvature relation on a hypercomplex chart (no SU(2) term)") {
  const int n = 8;
  ChartMap map = curly_map(n, 0.06, 17);
  TensorField J3 =
      pullback_tensor(map, constant_field(n, 1, 1, 3, standard_structure_values(n)));
  Pcg32 rng(2);
  for (int rep = 0; rep < 2; ++rep) {
    std::vector<double> p(n);
    for (double& c : p) c = rng.uniform(-0.35, 0.35);
    auto Jjets = structure_jets_at(J3, p, 2);
    ConnectionJets ob = obata(Jjets, n);
    CHECK(ob.solve_residual < 1e-9);
    auto R = riemann(ob.gamma, n);
    CHECK(first_bianchi_residual(R, n) < 1e-9);
    VielbeinJets vb = frame_from_structure(Jjets, n);
    GlConnection gl = gl_connection(vb, ob);
    CHECK(gl.residual < 1e-9);
    auto Rgl = gl_curvature(gl.omega, n, n / 2);
    double rel = curvature_relation_residual(R, nullptr, Rgl, vb,
                                             structure_values(Jjets, n));
    CHECK(rel < 1e-8);
    // flat space: R vanishes, so the Gl curvature trace does too
    double imag = 0;
    auto rr = r_curvature(Rgl, n, n / 2, &imag);
    CHECK(imag < 1e-9);
    for (double v : rr) CHECK(std::abs(v) < 1e-8);
    // W extraction on a flat chart gives W = 0
    WTensor wt = extract_w(R, vb);
    CHECK(wt.pattern_residual < 1e-8);
    for (auto c : wt.w) CHECK(std::abs(c) < 1e-8);
  }
}

TEST_CASE("einstein check flags the wrong constant") {
  const int n = 4;
  // flat hyper-Kähler: ν = 0 passes, ν = 0.5 fails at the ν(r+2)g scale
  std::vector<double> eye(n * n, 0.0);
  for (int i = 0; i < n; ++i) eye[i * n + i] = 1.0;
  std::vector<double> R(static_cast<size_t>(n) * n * n * n, 0.0);
  StructureVals s = eval_structure(standard_structure(n).J, std::vector<double>(n, 0.0));
  auto ok = einstein_check(eye, R, nullptr, s, 0.0, 1);
  CHECK(ok.ric < 1e-15);
  auto bad = einstein_check(eye, R, nullptr, s, 0.5, 1);
  CHECK(bad.ric == doctest::Approx(0.5 * 3.0));
}
