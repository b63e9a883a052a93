#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "quatlike/catalog.hpp"
#include "quatlike/curvature.hpp"
#include "test_util.hpp"

using namespace quatlike;
using namespace quatlike::testutil;

TEST_CASE("flat cone dimensions and chart domains") {
  CatalogEntry e = flat_cone(1);
  CHECK(e.big_linear.dim == 8);
  CHECK(e.small_chart.dim == 4);
  CatalogEntry e2 = flat_cone(2);
  CHECK(e2.big_linear.dim == 12);
  Pcg32 rng(3);
  for (int i = 0; i < 20; ++i) {
    auto p = e.big_adapted.sample(rng);
    CHECK(p[0] >= 0.5);
    CHECK(p[0] <= 4.0);
    double q2 = 0;
    for (int j = 4; j < 8; ++j) q2 += p[j] * p[j];
    CHECK(q2 < 0.81);
  }
}

TEST_CASE("linear chart: flat metric, constant structure, homothety") {
  CatalogEntry e = flat_cone(1);
  Pcg32 rng(4);
  auto p = e.big_linear.sample(rng);
  CHECK(quaternion_algebra_residual(e.J_linear, p) < 1e-14);
  JetVec gj = e.g_linear.at(p, 2);
  JetVec lc = levi_civita(gj, 8);
  for (const Jet& j : lc) CHECK(std::abs(j.value()) < 1e-14);
  // k = (3/2) x with zero connection
  ConnectionJets c;
  c.n = 8;
  c.gamma.assign(8 * 8 * 8, Jet(0.0, 8, 1));
  JetVec kj = e.k_linear.at(p, 2);
  CHECK(check_closed_homothetic(c, kj, 8) < 1e-14);
}

TEST_CASE("adapted chart: block form, flatness, Obata = Levi-Civita") {
  CatalogEntry e = flat_cone(1);
  const int N = 8;
  Pcg32 rng(7);
  for (int rep = 0; rep < 2; ++rep) {
    auto p = e.big_adapted.sample(rng);
    auto s = eval_structure(e.J_adapted.J, p);
    CHECK(quaternion_algebra_residual(s) < 1e-12);
    double mx = 0;
    for (double v : nijenhuis_diag(e.J_adapted, p)) mx = std::max(mx, std::abs(v));
    CHECK(mx < 1e-12);
    // normalz0: the homothetic vector is 3 z0 ∂_0
    auto kp = partial(e.k_adapted, p);
    CHECK(kp.comp[0] == doctest::Approx(3 * p[0]));
    for (int i = 1; i < N; ++i) CHECK(std::abs(kp.comp[i]) < 1e-12);
    // block form with all cross-block consistency conditions
    JetVec gj0 = e.g_adapted.at(p, 0);
    std::vector<double> gv(gj0.size());
    for (size_t i = 0; i < gj0.size(); ++i) gv[i] = gj0[i].value();
    ProjectedPoint pp = project(s, &gv, p, 1, e.lift.z_ref);
    CHECK(pp.cross_residual < 1e-12);
    CHECK(pp.metric_residual < 1e-12);
    // flatness in the curvilinear chart
    JetVec gj = e.g_adapted.at(p, 2);
    JetVec lc = levi_civita(gj, N);
    auto R = riemann(lc, N);
    double rmx = 0;
    for (double v : R) rmx = std::max(rmx, std::abs(v));
    CHECK(rmx < 1e-9);
    // Obata of the adapted structure equals Levi-Civita (Table-style check)
    auto Jj = structure_jets_at(e.J_adapted.J, p, 2);
    ConnectionJets ob = obata(Jj, N);
    CHECK(ob.solve_residual < 1e-10);
    double d = 0;
    for (size_t i = 0; i < lc.size(); ++i)
      d = std::max(d, std::abs(lc[i].value() - ob.gamma[i].value()));
    CHECK(d < 1e-9);
    CHECK(check_closed_homothetic(ob, e.k_adapted.at(p, 2), N) < 1e-10);
  }
}

TEST_CASE("lifted structure reproduces the adapted one (round trip on Jhat)") {
  CatalogEntry e = flat_cone(1);
  HypercomplexTriple Jl = lift_structure_field(e.lift);
  Pcg32 rng(9);
  auto p = e.big_adapted.sample(rng);
  auto sl = eval_structure(Jl.J, p);
  auto sa = eval_structure(e.J_adapted.J, p);
  double d = 0;
  for (int a = 0; a < 3; ++a)
    for (size_t c = 0; c < sl.J[a].size(); ++c)
      d = std::max(d, std::abs(sl.J[a][c] - sa.J[a][c]));
  CHECK(d < 1e-11);
  // and the cone metric reproduces the flat metric
  TensorField gl = lift_metric_field(e.lift);
  JetVec g1 = gl.at(p, 0), g2 = e.g_adapted.at(p, 0);
  d = 0;
  for (size_t i = 0; i < g1.size(); ++i)
    d = std::max(d, std::abs(g1[i].value() - g2[i].value()));
  CHECK(d < 1e-11);
}

TEST_CASE("projected small space is Einstein with nu = -1/z0 on all slices") {
  CatalogEntry e = flat_cone(1);
  const int ns = 4;
  std::vector<double> q{0.2, -0.1, 0.25, 0.1};
  auto Jj = structure_jets_at(e.lift.J.J, q, 2);
  StructureVals s = structure_values(Jj, ns);
  // connection in the ω = -A/2 gauge (Levi-Civita downstream)
  auto w = extract_omega_op_jets(Jj, ns);
  ConnectionJets op = oproiu_with_omega(Jj, w.omega, ns);
  JetVec Aj = e.lift.A.at(q, 2);
  std::array<JetVec, 3> Ajets;
  for (int a = 0; a < 3; ++a)
    Ajets[a].assign(Aj.begin() + a * ns, Aj.begin() + (a + 1) * ns);
  auto gr = choose_su2_gauge(Jj, w.omega, Ajets, ns);
  CHECK(gr.residual < 1e-12);
  ConnectionJets cg = xi_transform(op, gr.xi, Jj);
  auto R = riemann(cg.gamma, ns);
  auto Rsu2 = su2_curvature(*cg.omega, ns);
  for (double z0 : {0.5, 1.0, 2.0, 4.0}) {
    TensorField gs = small_metric_field(e.lift, z0);
    JetVec gj = gs.at(q, 0);
    std::vector<double> gv(gj.size());
    for (size_t i = 0; i < gj.size(); ++i) gv[i] = gj[i].value();
    auto ec = einstein_check(gv, R, &Rsu2, s, nu_of_slice(z0), 1);
    CHECK(ec.ric < 1e-10);
    CHECK(ec.su2 < 1e-10);
    // wrong constant fails at the (r+2) scale
    auto bad = einstein_check(gv, R, nullptr, s, -nu_of_slice(z0), 1);
    CHECK(bad.ric > std::abs(2.0 * nu_of_slice(z0)) * 3.0 * 0.5);
  }
}

TEST_CASE("signature variant: nu > 0 branch with flipped metric") {
  CatalogEntry e = flat_cone(1, true);
  Pcg32 rng(11);
  auto p = e.big_adapted.sample(rng);
  CHECK(p[0] < 0.0);
  auto s = eval_structure(e.J_adapted.J, p);
  CHECK(quaternion_algebra_residual(s) < 1e-12);
  JetVec gj0 = e.g_adapted.at(p, 0);
  std::vector<double> gv(gj0.size());
  for (size_t i = 0; i < gj0.size(); ++i) gv[i] = gj0[i].value();
  ProjectedPoint pp = project(s, &gv, p, 1, e.lift.z_ref);
  CHECK(pp.cross_residual < 1e-12);
  CHECK(pp.metric_residual < 1e-11);
  CHECK(nu_of_slice(p[0]) > 0.0);
}

TEST_CASE("deformed cone stays integrable; rotated presentation is genuine") {
  CatalogEntry base = flat_cone(1);
  CatalogEntry def = deformed_cone(base, 42);
  HypercomplexTriple Jd = lift_structure_field(def.lift);
  Pcg32 rng(13);
  auto p = base.big_adapted.sample(rng);
  CHECK(quaternion_algebra_residual(Jd, p) < 1e-12);
  double mx = 0;
  for (double v : nijenhuis_diag(Jd, p)) mx = std::max(mx, std::abs(v));
  CHECK(mx < 1e-10);
  // the deformation genuinely moves A
  std::vector<double> q(p.begin() + 4, p.end());
  JetVec A0 = base.lift.A.at(q, 0), A1 = def.lift.A.at(q, 0);
  double da = 0;
  for (size_t i = 0; i < A0.size(); ++i)
    da = std::max(da, std::abs(A0[i].value() - A1[i].value()));
  CHECK(da > 1e-3);

  HypercomplexTriple Jr = rotated_small_structure(base, 5);
  CHECK(quaternion_algebra_residual(Jr, q) < 1e-12);
  double nmx = 0;
  for (double v : nijenhuis_diag(Jr, q)) nmx = std::max(nmx, std::abs(v));
  CHECK(nmx > 1e-3);  // non-integrable selection
  auto ex = extract_omega_op(Jr, q);
  CHECK(ex.residual < 1e-10);  // but exactly quaternionic
}

TEST_CASE("rigid flat entry: everything vanishes identically") {
  CatalogEntry e = rigid_flat(2);
  CHECK(e.small_chart.dim == 8);
  std::vector<double> p(8, 0.3);
  CHECK(quaternion_algebra_residual(e.J_linear, p) < 1e-14);
  auto Jj = structure_jets_at(e.J_linear.J, p, 2);
  ConnectionJets ob = obata(Jj, 8);
  CHECK(ob.solve_residual < 1e-13);
  for (const Jet& g : ob.gamma) CHECK(std::abs(g.value()) < 1e-12);
  auto R = riemann(ob.gamma, 8);
  for (double v : R) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("catalog manifest is valid JSON with the expected entries") {
  std::string m = catalog_manifest_json();
  CHECK(m.find("flat-cone") != std::string::npos);
  CHECK(m.find("rigid-flat") != std::string::npos);
  CHECK(m.find("deformed-cone") != std::string::npos);
  CHECK(m.find("nu_per_z0") != std::string::npos);
  CHECK(catalog_entry("flat-cone", 1, 0).name == "flat-cone");
  CHECK_THROWS(catalog_entry("no-such-manifold", 1, 0));
}

TEST_CASE("Oproiu connection equals the least-squares solve shifted by the "
          "SU(2) contraction") {
  CatalogEntry e = flat_cone(1);
  const int ns = 4;
  std::vector<double> q{0.2, -0.15, 0.25, -0.1};
  HypercomplexTriple Jr = rotated_small_structure(e, 0x5150);
  auto Jj = structure_jets_at(Jr.J, q, 2);
  auto w = extract_omega_op_jets(Jj, ns);
  ConnectionJets op = oproiu_with_omega(Jj, w.omega, ns);
  CHECK(op.solve_residual < 1e-12);
  ConnectionJets obs = obata(Jj, ns);  // least-squares part (inconsistent)
  double gap = 0;
  for (int X = 0; X < ns; ++X)
    for (int Y = 0; Y < ns; ++Y)
      for (int Z = 0; Z < ns; ++Z) {
        double expect = obs.gamma[(X * ns + Y) * ns + Z].value();
        for (int a = 0; a < 3; ++a)
          expect -= 0.5 * (Jj[a][X * ns + Z].value() * w.omega[a][Y].value() +
                           Jj[a][Y * ns + Z].value() * w.omega[a][X].value());
        gap = std::max(gap,
                       std::abs(op.gamma[(X * ns + Y) * ns + Z].value() - expect));
      }
  CHECK(gap < 1e-10);
}

TEST_CASE("frame built with the metric is g-orthonormal on the projected space") {
  CatalogEntry e = flat_cone(1);
  const int ns = 4;
  std::vector<double> q{0.15, -0.2, 0.1, 0.2};
  auto Jj = structure_jets_at(e.lift.J.J, q, 2);
  TensorField gs = small_metric_field(e.lift, e.z0_ref);
  JetVec gj = gs.at(q, 1);
  VielbeinJets vb = frame_from_structure(Jj, ns, &gj);
  CHECK(vielbein_invariants_residual(vb) < 1e-10);
  double imag = 0;
  auto J = j_from_vielbein(vb, &imag);
  CHECK(imag < 1e-10);
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < ns * ns; ++c)
      CHECK(std::abs(J[a][c].value() - Jj[a][c].value()) < 1e-9);
  // recover the frame vectors through the flat pattern and test the Gram
  // matrix of g (hermitian positive metric: exactly the identity)
  std::vector<double> B(static_cast<size_t>(ns) * ns, 0.0);
  for (int Y = 0; Y < ns; ++Y)
    for (int m = 0; m < ns / 4; ++m)
      for (int nu2 = 0; nu2 < 4; ++nu2) {
        std::complex<double> s = 0.0;
        for (int i = 0; i < 2; ++i)
          for (int al = 0; al < 2; ++al)
            s += flat_frame_entry(nu2, i, al) *
                 vb.finvYiA(Y, i, 2 * m + al).value();
        B[Y * ns + (4 * m + nu2)] = s.real();
      }
  for (int mu = 0; mu < ns; ++mu)
    for (int nu2 = 0; nu2 < ns; ++nu2) {
      double gram = 0.0;
      for (int X = 0; X < ns; ++X)
        for (int Y = 0; Y < ns; ++Y)
          gram += B[X * ns + mu] * gj[X * ns + Y].value() * B[Y * ns + nu2];
      CHECK(std::abs(gram - (mu == nu2 ? 1.0 : 0.0)) < 1e-9);
    }
}
