#include "quatlike/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "quatlike/catalog.hpp"
#include "quatlike/symmetry.hpp"

namespace quatlike {

namespace {

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const JetVec& v) {
  double m = 0.0;
  for (const Jet& x : v) m = std::max(m, std::abs(x.value()));
  return m;
}

struct CheckDecl {
  std::string name, label;
  double gate = 0.0;
  bool detection = false;
};

struct SuiteDef {
  std::vector<CheckDecl> checks;
  Chart chart;
  std::function<std::vector<double>(std::span<const double>)> eval;
};

class Checks {
 public:
  int add(std::string name, std::string label, double gate,
          bool detection = false) {
    decls.push_back({std::move(name), std::move(label), gate, detection});
    return static_cast<int>(decls.size()) - 1;
  }
  std::vector<CheckDecl> decls;
};

// shared, lazily-assembled context for one catalog entry
struct EntryCtx {
  RunConfig cfg;
  CatalogEntry e;
  int N = 0, ns = 0;
  int twist_dim = 8;  // the quaternionic Nijenhuis pattern is vacuous in dim 4
  HypercomplexTriple J_lift;            // lift of e.lift
  TensorField g_lift;                   // cone metric (metric entries)
  HypercomplexTriple J_rot;             // rotated small presentation
  std::vector<LiftData> deformations;   // ten seeded ξ̂-deformations
  HypercomplexTriple J_flip;            // J1 sign flip (broken algebra)
  HypercomplexTriple J_twist;           // conjugated small structure (broken)
  LiftData lift_broken_h;               // non-hermitian h control
  std::vector<TensorField> gens_big;    // adapted-chart generator fields
  std::vector<SmallGenerator> gens_small;
  TensorField dilatation_big;
};

HypercomplexTriple conjugated_structure(int n, double amp, uint64_t seed) {
  auto base = standard_structure_values(n);
  Pcg32 rng(seed);
  auto lin = std::make_shared<std::vector<double>>(
      static_cast<size_t>(n) * n * n);
  for (double& v : *lin) v = rng.uniform(-1.0, 1.0);
  HypercomplexTriple H;
  H.J.dim = n;
  H.J.nup = H.J.ndown = 1;
  H.J.extra = 3;
  H.J.eval = [n, base, lin, amp](const JetVec& x) {
    const Jet zero(0.0, x[0].dim(), x[0].order());
    JetVec G(static_cast<size_t>(n) * n, zero);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Jet s = zero;
        for (int k = 0; k < n; ++k) s += (*lin)[(i * n + j) * n + k] * x[k];
        G[i * n + j] = amp * s;
        if (i == j) G[i * n + j] += 1.0;
      }
    JetVec Gi = jet_invert(G, n);
    JetVec out;
    out.reserve(static_cast<size_t>(3) * n * n);
    for (int a = 0; a < 3; ++a) {
      JetVec tmp(static_cast<size_t>(n) * n, zero);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Jet s = zero;
          for (int k = 0; k < n; ++k)
            s += G[i * n + k] * base[a * n * n + k * n + j];
          tmp[i * n + j] = s;
        }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Jet s = zero;
          for (int k = 0; k < n; ++k) s += tmp[i * n + k] * Gi[k * n + j];
          out.push_back(s);
        }
    }
    return out;
  };
  return H;
}

std::shared_ptr<EntryCtx> make_ctx(const RunConfig& cfg) {
  auto ctx = std::make_shared<EntryCtx>();
  ctx->cfg = cfg;
  ctx->e = catalog_entry(cfg.manifold, cfg.n_h, cfg.seed);
  CatalogEntry& e = ctx->e;
  if (e.kind == EntryKind::RigidFlat) {
    ctx->ns = ctx->N = e.small_chart.dim;
    ctx->J_flip = [&] {
      auto vals = standard_structure_values(ctx->ns);
      for (int c = 0; c < ctx->ns * ctx->ns; ++c) vals[c] = -vals[c];
      return HypercomplexTriple{constant_field(ctx->ns, 1, 1, 3, vals)};
    }();
    ctx->twist_dim = std::max(8, ctx->ns);
    ctx->J_twist = conjugated_structure(ctx->twist_dim, 0.4, cfg.seed ^ 0xabcdef);
    return ctx;
  }
  ctx->N = e.big_linear.dim;
  ctx->ns = 4 * e.n_h;
  ctx->J_lift = lift_structure_field(e.lift);
  if (e.lift.has_h) ctx->g_lift = lift_metric_field(e.lift);
  if (e.has_adapted) {
    ctx->J_rot = rotated_small_structure(e, cfg.seed ^ 0x5151);
    for (const auto& P : e.gen_mats) {
      ctx->gens_big.push_back(adapted_generator(e, P));
      ctx->gens_small.push_back(project_generator(e, P));
    }
    std::vector<double> kmat(static_cast<size_t>(ctx->N) * ctx->N, 0.0);
    for (int i = 0; i < ctx->N; ++i) kmat[i * ctx->N + i] = 1.5;
    ctx->dilatation_big =
        pullback_tensor(e.adapted_to_linear, linear_vector_field(ctx->N, kmat));
    for (int k = 0; k < 10; ++k)
      ctx->deformations.push_back(
          deformed_cone(e, cfg.seed * 131 + k + 1).lift);
    // broken-h control: add a symmetric but non-hermitian piece
    ctx->lift_broken_h = e.lift;
    TensorField hbase = e.lift.h;
    const int ns = ctx->ns;
    ctx->lift_broken_h.h.eval = [hbase, ns](const JetVec& q) {
      JetVec h = hbase.eval(q);
      h[0] += 0.5;  // dq0 ⊗ dq0 breaks hermiticity
      return h;
    };
  }
  ctx->J_flip = [&] {
    auto vals = standard_structure_values(ctx->ns);
    for (int c = 0; c < ctx->ns * ctx->ns; ++c) vals[c] = -vals[c];
    return HypercomplexTriple{constant_field(ctx->ns, 1, 1, 3, vals)};
  }();
  ctx->twist_dim = std::max(8, ctx->ns);
  ctx->J_twist = conjugated_structure(ctx->twist_dim, 0.4, cfg.seed ^ 0xabcdef);
  return ctx;
}

std::vector<double> small_point(const EntryCtx& ctx, std::span<const double> p) {
  if (ctx.e.kind == EntryKind::RigidFlat)
    return std::vector<double>(p.begin(), p.end());
  return std::vector<double>(p.begin() + 4, p.end());
}

// small-space LC-gauge connection of the (possibly deformed) lift data
struct SmallGauge {
  std::array<JetVec, 3> Jjets;
  ConnectionJets conn;  // ξ-gauged so that ω⃗ = -A⃗/2
  double gauge_residual = 0.0;
};

SmallGauge small_gauge_connection(const LiftData& L, std::span<const double> q,
                                  int order = 2) {
  SmallGauge out;
  const int ns = L.small_dim();
  out.Jjets = structure_jets_at(L.J.J, q, order);
  OmegaOpResult w = extract_omega_op_jets(out.Jjets, ns);
  ConnectionJets op = oproiu_with_omega(out.Jjets, w.omega, ns);
  JetVec Aj = L.A.at(q, std::max(1, order - 1));
  std::array<JetVec, 3> Ajets;
  for (int a = 0; a < 3; ++a)
    Ajets[a].assign(Aj.begin() + a * ns, Aj.begin() + (a + 1) * ns);
  GaugeResult gr = choose_su2_gauge(out.Jjets, w.omega, Ajets, ns);
  out.gauge_residual = gr.residual;
  out.conn = xi_transform(op, gr.xi, out.Jjets);
  return out;
}

// ---- suite builders -----------------------------------------------------------

SuiteDef structure_suite(std::shared_ptr<EntryCtx> ctx) {
  SuiteDef def;
  Checks cs;
  const RunConfig& cfg = ctx->cfg;
  const double talg = cfg.tol * 1e-2;
  if (ctx->e.kind == EntryKind::RigidFlat) {
    int c_alg = cs.add("quaternion-algebra", "JaJb=-dab+eps*Jc", talg);
    int c_nij = cs.add("nijenhuis", "N(J)=0", cfg.tol);
    int c_om = cs.add("omega-op-zero", "N-pattern gives w=0", cfg.tol);
    int d_alg = cs.add("detect-broken-algebra", "J1 flip breaks algebra", 1e-3, true);
    int d_nij = cs.add("detect-broken-nijenhuis", "conjugated J has N>0", 1e-3, true);
    def.chart = ctx->e.small_chart;
    def.checks = cs.decls;
    def.eval = [ctx, c_alg, c_nij, c_om, d_alg, d_nij](
                   std::span<const double> p) {
      std::vector<double> r(5, 0.0);
      r[c_alg] = quaternion_algebra_residual(ctx->e.J_linear, p);
      r[c_nij] = max_abs(nijenhuis_diag(ctx->e.J_linear, p));
      auto om = extract_omega_op(ctx->e.J_linear, p);
      double wmax = om.residual;
      for (int a = 0; a < 3; ++a) wmax = std::max(wmax, max_abs(om.omega[a]));
      r[c_om] = wmax;
      r[d_alg] = quaternion_algebra_residual(ctx->J_flip, p);
      std::vector<double> qt(ctx->twist_dim);
      for (int i = 0; i < ctx->twist_dim; ++i)
        qt[i] = 0.3 * p[i % static_cast<int>(p.size())];
      r[d_nij] = max_abs(nijenhuis_diag(ctx->J_twist, qt));
      return r;
    };
    return def;
  }
  const bool full = ctx->e.kind == EntryKind::FlatCone;
  int c_alg_l = cs.add("quaternion-algebra-lifted", "JaJb=-dab+eps*Jc", talg);
  int c_nij_l = cs.add("nijenhuis-lifted", "N(Jhat)=0", cfg.tol);
  int c_alg_a =
      full ? cs.add("quaternion-algebra-adapted", "JaJb=-dab+eps*Jc", talg) : -1;
  int c_nij_a = full ? cs.add("nijenhuis-adapted", "N(Jhat)=0", cfg.tol) : -1;
  int c_def0 = static_cast<int>(cs.decls.size());
  if (full)
    for (int k = 0; k < 10; ++k)
      cs.add("nijenhuis-deformed-" + std::to_string(k + 1), "N(Jhat')=0",
             cfg.tol);
  int c_omx = full ? cs.add("omega-op-extract-rotated",
                            "N = -1/2 J.w_[Y] pattern", cfg.tol)
                   : -1;
  int c_omn = full ? cs.add("omega-op-quatnabla-rotated",
                            "nabla J + 2 w x J = 0 solvable", cfg.tol)
                   : -1;
  int c_omf = cs.add("omega-op-closed-form", "w = -(1/6)(2A + A x J)", cfg.tol);
  int d_alg = cs.add("detect-broken-algebra", "J1 flip breaks algebra", 1e-3, true);
  int d_nij = cs.add("detect-broken-nijenhuis", "conjugated J has N>0", 1e-3, true);
  int d_quat =
      cs.add("detect-non-quaternionic", "N-pattern residual large", 1e-3, true);
  def.chart = ctx->e.big_adapted;
  def.checks = cs.decls;
  const size_t nchecks_s = cs.decls.size();
  def.eval = [ctx, c_alg_l, c_nij_l, c_alg_a, c_nij_a, c_def0, c_omx, c_omn,
              c_omf, d_alg, d_nij, d_quat, nchecks_s,
              full](std::span<const double> p) {
    std::vector<double> r(nchecks_s, 0.0);
    const int ns = ctx->ns;
    std::vector<double> q = small_point(*ctx, p);
    r[c_alg_l] = quaternion_algebra_residual(ctx->J_lift, p);
    r[c_nij_l] = max_abs(nijenhuis_diag(ctx->J_lift, p));
    if (full) {
      r[c_alg_a] = quaternion_algebra_residual(ctx->e.J_adapted, p);
      r[c_nij_a] = max_abs(nijenhuis_diag(ctx->e.J_adapted, p));
      for (int k = 0; k < 10; ++k) {
        HypercomplexTriple Jd = lift_structure_field(ctx->deformations[k]);
        r[c_def0 + k] = max_abs(nijenhuis_diag(Jd, p));
      }
      auto Jr = structure_jets_at(ctx->J_rot.J, q, 2);
      auto ex = extract_omega_op_jets(Jr, ns);
      r[c_omx] = ex.residual;
      ConnectionJets op = oproiu_with_omega(Jr, ex.omega, ns);
      r[c_omn] = op.solve_residual;
    }
    {
      auto Jj = structure_jets_at(ctx->e.lift.J.J, q, 1);
      auto ex = extract_omega_op_jets(Jj, ns);
      JetVec Aj = ctx->e.lift.A.at(q, 0);
      std::array<JetVec, 3> Ajets, Jv;
      for (int a = 0; a < 3; ++a) {
        Ajets[a].assign(Aj.begin() + a * ns, Aj.begin() + (a + 1) * ns);
        Jv[a].clear();
        for (const Jet& j : Jj[a]) Jv[a].push_back(j.truncated(0));
      }
      auto formula = omega_op_from_a(Jv, Ajets, ns);
      double worst = ex.residual;
      for (int a = 0; a < 3; ++a)
        for (int X = 0; X < ns; ++X)
          worst = std::max(worst, std::abs(formula[a][X].value() -
                                           ex.omega[a][X].value()));
      r[c_omf] = worst;
    }
    r[d_alg] = quaternion_algebra_residual(ctx->J_flip, q);
    std::vector<double> qt(ctx->twist_dim);
    for (int i = 0; i < ctx->twist_dim; ++i)
      qt[i] = 0.3 * p[i % static_cast<int>(p.size())];
    r[d_nij] = max_abs(nijenhuis_diag(ctx->J_twist, qt));
    r[d_quat] = extract_omega_op(ctx->J_twist, qt).residual;
    return r;
  };
  return def;
}

SuiteDef connections_suite(std::shared_ptr<EntryCtx> ctx) {
  SuiteDef def;
  Checks cs;
  const RunConfig& cfg = ctx->cfg;
  if (ctx->e.kind == EntryKind::RigidFlat) {
    int c_ob = cs.add("obata-residual", "nabla J = 0", cfg.tol);
    int c_rk = cs.add("obata-unique", "normal equations full rank", cfg.tol);
    int c_lc = cs.add("levi-civita-metricity", "nabla g = 0", cfg.tol);
    int c_eq = cs.add("obata-equals-levi-civita", "Obata = LC", cfg.tol);
    def.chart = ctx->e.small_chart;
    def.checks = cs.decls;
    def.eval = [ctx, c_ob, c_rk, c_lc, c_eq](std::span<const double> p) {
      std::vector<double> r(4, 0.0);
      const int n = ctx->ns;
      auto Jj = structure_jets_at(ctx->e.J_linear.J, p, 2);
      ConnectionJets ob = obata(Jj, n);
      r[c_ob] = ob.solve_residual;
      r[c_rk] = ob.pivot_ratio > 1e-10 ? 0.0 : 1.0;
      JetVec gj = ctx->e.g_linear.at(p, 2);
      JetVec lc = levi_civita(gj, n);
      r[c_lc] = max_abs(covariant_derivative(lc, ctx->e.g_linear.at(p, 2), n, 0, 2));
      double d = 0.0;
      for (size_t i = 0; i < lc.size(); ++i)
        d = std::max(d, std::abs(lc[i].value() - ob.gamma[i].value()));
      r[c_eq] = d;
      return r;
    };
    return def;
  }
  const bool full = ctx->e.kind == EntryKind::FlatCone;
  int c_ob = cs.add("obata-residual-big", "nabla Jhat = 0", cfg.tol);
  int c_rk = cs.add("obata-unique-big", "normal equations full rank", cfg.tol);
  int c_hom = cs.add("closed-homothetic", "nabla k = (3/2) id", cfg.tol);
  int c_gl = cs.add("covconst-vielbein-big", "D f = 0 with gl connection", cfg.tol);
  int c_op = cs.add("oproiu-small", "nabla J + 2 w x J = 0", cfg.tol);
  int c_xc = cs.add("xi-closure", "S^xi additive in xi", cfg.tol * 1e-2);
  int c_xl = full ? cs.add("xi-gauge-levi-civita",
                           "gauged Gamma = LC of g", cfg.tol)
                  : -1;
  int c_gls = cs.add("covconst-vielbein-small", "D f = 0 with gl connection",
                     cfg.tol);
  def.chart = ctx->e.big_adapted;
  def.checks = cs.decls;
  const size_t nchecks_c = cs.decls.size();
  def.eval = [ctx, c_ob, c_rk, c_hom, c_gl, c_op, c_xc, c_xl, c_gls, nchecks_c,
              full](std::span<const double> p) {
    std::vector<double> r(nchecks_c, 0.0);
    const int N = ctx->N, ns = ctx->ns;
    std::vector<double> q = small_point(*ctx, p);
    // big space
    {
      auto Jj = structure_jets_at(ctx->J_lift.J, p, 2);
      ConnectionJets ob = obata(Jj, N);
      r[c_ob] = ob.solve_residual;
      r[c_rk] = ob.pivot_ratio > 1e-10 ? 0.0 : 1.0;
      JetVec kj(N, Jet(0.0, N, 2));
      kj[0] = 3.0 * Jet::variable(p[0], N, 2, 0);
      r[c_hom] = check_closed_homothetic(ob, kj, N);
      VielbeinJets vb = frame_from_structure(Jj, N);
      r[c_gl] = gl_connection(vb, ob).residual;
    }
    // small space
    {
      const LiftData& L = ctx->e.lift;
      SmallGauge sg = small_gauge_connection(L, q);
      r[c_op] = std::max(sg.conn.solve_residual, sg.gauge_residual);
      // xi closure on the gauged connection
      Pcg32 rng(ctx->cfg.seed ^ 0x77aa);
      JetVec xi1(ns), xi2(ns), xi12(ns);
      for (int i = 0; i < ns; ++i) {
        double a = rng.uniform(-1, 1), b = rng.uniform(-1, 1);
        const Jet& probe = sg.conn.gamma[0];
        xi1[i] = Jet(a, probe.dim(), probe.order());
        xi2[i] = Jet(b, probe.dim(), probe.order());
        xi12[i] = Jet(a + b, probe.dim(), probe.order());
      }
      ConnectionJets two = xi_transform(xi_transform(sg.conn, xi1, sg.Jjets),
                                        xi2, sg.Jjets);
      ConnectionJets one = xi_transform(sg.conn, xi12, sg.Jjets);
      double d = 0.0;
      for (size_t i = 0; i < two.gamma.size(); ++i)
        d = std::max(d, std::abs(two.gamma[i].value() - one.gamma[i].value()));
      for (int a = 0; a < 3; ++a)
        for (int X = 0; X < ns; ++X)
          d = std::max(d, std::abs((*two.omega)[a][X].value() -
                                   (*one.omega)[a][X].value()));
      r[c_xc] = d;
      if (full) {
        TensorField gs = small_metric_field(L, ctx->e.z0_ref);
        JetVec gj = gs.at(q, 2);
        JetVec lc = levi_civita(gj, ns);
        double dd = 0.0;
        for (size_t i = 0; i < lc.size(); ++i)
          dd = std::max(dd,
                        std::abs(lc[i].value() - sg.conn.gamma[i].value()));
        r[c_xl] = dd;
      }
      VielbeinJets vbs = frame_from_structure(sg.Jjets, ns);
      r[c_gls] = gl_connection(vbs, sg.conn).residual;
    }
    if (full) {
      // rotated presentation solves too (folded into oproiu-small)
      auto Jr = structure_jets_at(ctx->J_rot.J, q, 2);
      auto ex = extract_omega_op_jets(Jr, ns);
      ConnectionJets op = oproiu_with_omega(Jr, ex.omega, ns);
      r[c_op] = std::max(r[c_op], op.solve_residual);
    }
    return r;
  };
  return def;
}

SuiteDef curvature_suite(std::shared_ptr<EntryCtx> ctx) {
  SuiteDef def;
  Checks cs;
  const RunConfig& cfg = ctx->cfg;
  if (ctx->e.kind == EntryKind::RigidFlat) {
    int c_r = cs.add("riemann-flat", "R = 0", cfg.tol * 1e-4);
    int c_b = cs.add("first-bianchi", "R_[XYZ] = 0", cfg.tol * 1e-4);
    int c_rel = cs.add("curvature-relation", "R = -J.Rsu2 + L.Rgl", cfg.tol);
    def.chart = ctx->e.small_chart;
    def.checks = cs.decls;
    def.eval = [ctx, c_r, c_b, c_rel](std::span<const double> p) {
      std::vector<double> r(3, 0.0);
      const int n = ctx->ns;
      auto Jj = structure_jets_at(ctx->e.J_linear.J, p, 2);
      ConnectionJets ob = obata(Jj, n);
      auto R = riemann(ob.gamma, n);
      r[c_r] = max_abs(R);
      r[c_b] = first_bianchi_residual(R, n);
      VielbeinJets vb = frame_from_structure(Jj, n);
      GlConnection gl = gl_connection(vb, ob);
      auto Rgl = gl_curvature(gl.omega, n, n / 2);
      r[c_rel] = curvature_relation_residual(R, nullptr, Rgl, vb,
                                             structure_values(Jj, n));
      return r;
    };
    return def;
  }
  const bool full = ctx->e.kind == EntryKind::FlatCone;
  int c_flat = full ? cs.add("flatness-adapted-chart", "R(LC of ghat) = 0", cfg.tol) : -1;
  int c_bb = cs.add("first-bianchi-big", "R_[XYZ] = 0", cfg.tol);
  int c_relb = cs.add("curvature-relation-big", "R = L.Rgl (no SU(2))", cfg.tol);
  int c_rrh = cs.add("rr-hermitian-big", "RR(JX,JY) = RR(X,Y)", cfg.tol);
  int c_rrbs = cs.add("rr-big-small-gauge", "small RR = big RR restriction",
                      cfg.tol);
  std::vector<int> c_ric, c_su2;
  const double slices[4] = {0.5, 1.0, 2.0, 4.0};
  if (full)
    for (double z0 : slices) {
      double zz = ctx->e.sig > 0 ? z0 : -z0;
      std::ostringstream nm;
      nm << "einstein-ric-z0-" << zz;
      c_ric.push_back(cs.add(nm.str(), "Ric = nu (r+2) g", cfg.tol));
      std::ostringstream nm2;
      nm2 << "einstein-su2-z0-" << zz;
      c_su2.push_back(cs.add(nm2.str(), "Rsu2 = nu/2 J", cfg.tol));
    }
  int d_nu = full ? cs.add("detect-wrong-nu", "wrong nu fails at (r+2) scale",
                           0.5 * 2.0 * (1.0) * (ctx->cfg.n_h + 2), true)
                  : -1;
  int c_rel3 = full ? cs.add("curvature-relation-small-lc",
                             "R = -J.Rsu2 + L.Rgl", cfg.tol)
                    : -1;
  int c_relr = full ? cs.add("curvature-relation-small-oproiu",
                             "R = -J.Rsu2 + L.Rgl", cfg.tol)
                    : -1;
  int c_relx = full ? cs.add("curvature-relation-small-xi",
                             "R = -J.Rsu2 + L.Rgl", cfg.tol)
                    : -1;
  int c_wrf = full ? cs.add("weyl-part-ricci-flat", "Ric(R^W) = 0", cfg.tol) : -1;
  int c_wb1 = full ? cs.add("bianchi-ricci-part", "R^Ric Bianchi-clean", cfg.tol) : -1;
  int c_wb2 = full ? cs.add("bianchi-weyl-part", "R^W Bianchi-clean", cfg.tol) : -1;
  int c_wsym = full ? cs.add("w-tensor-symmetric", "W sym in ABC", cfg.tol) : -1;
  int c_ras = cs.add("ric-antisym-rr", "Ric_[XY] = -RR_XY", cfg.tol);
  int c_arrow = full ? cs.add("w-trace-ric-arrow",
                              "trace part carries Ric antisym", cfg.tol)
                     : -1;
  def.chart = ctx->e.big_adapted;
  def.checks = cs.decls;
  const size_t nchecks = cs.decls.size();
  def.eval = [=](std::span<const double> p) {
    std::vector<double> r(nchecks, 0.0);
    const int N = ctx->N, ns = ctx->ns;
    std::vector<double> q = small_point(*ctx, p);
    // big space: LC of the cone metric (metric entries) or Obata (deformed)
    {
      auto Jj = structure_jets_at(ctx->J_lift.J, p, 2);
      ConnectionJets conn;
      if (full) {
        JetVec gj = ctx->e.g_adapted.at(p, 2);
        conn.n = N;
        conn.gamma = levi_civita(gj, N);
      } else {
        conn = obata(Jj, N);
      }
      auto R = riemann(conn.gamma, N);
      if (full) r[c_flat] = max_abs(R);
      r[c_bb] = first_bianchi_residual(R, N);
      VielbeinJets vb = frame_from_structure(Jj, N);
      GlConnection gl = gl_connection(vb, conn);
      auto Rgl = gl_curvature(gl.omega, N, N / 2);
      r[c_relb] = std::max(gl.residual,
                           curvature_relation_residual(
                               R, nullptr, Rgl, vb, structure_values(Jj, N)));
      double imag = 0.0;
      auto rrb = r_curvature(Rgl, N, N / 2, &imag);
      r[c_rrh] = std::max(imag,
                          hermiticity_residual(rrb, structure_values(Jj, N)));
      // small RR in the -A/2 gauge vs the big restriction
      SmallGauge sg = small_gauge_connection(ctx->e.lift, q);
      VielbeinJets vbs = frame_from_structure(sg.Jjets, ns);
      GlConnection gls = gl_connection(vbs, sg.conn);
      auto Rgls = gl_curvature(gls.omega, ns, ns / 2);
      auto rrs = r_curvature(Rgls, ns, ns / 2, nullptr);
      double d = 0.0;
      for (int X = 0; X < ns; ++X)
        for (int Y = 0; Y < ns; ++Y)
          d = std::max(d, std::abs(rrb[(4 + X) * N + (4 + Y)] -
                                   rrs[X * ns + Y]));
      r[c_rrbs] = d;
      if (!full) {
        // deformed entry: antisymmetric Ricci against RR on the gauge conn
        auto Rs = riemann(sg.conn.gamma, ns);
        auto ric = ricci_from_riemann(Rs, ns);
        double da = 0.0;
        for (int X = 0; X < ns; ++X)
          for (int Y = 0; Y < ns; ++Y)
            da = std::max(da, std::abs(0.5 * (ric[X * ns + Y] -
                                              ric[Y * ns + X]) +
                                       rrs[X * ns + Y]));
        r[c_ras] = da;
      }
    }
    if (!full) return r;
    // small QK space in the LC gauge
    {
      SmallGauge sg = small_gauge_connection(ctx->e.lift, q);
      auto R = riemann(sg.conn.gamma, ns);
      auto Rsu2 = su2_curvature(*sg.conn.omega, ns);
      StructureVals s = structure_values(sg.Jjets, ns);
      VielbeinJets vb = frame_from_structure(sg.Jjets, ns);
      GlConnection gl = gl_connection(vb, sg.conn);
      auto Rgl = gl_curvature(gl.omega, ns, ns / 2);
      r[c_rel3] = curvature_relation_residual(R, &Rsu2, Rgl, vb, s);
      for (int i = 0; i < 4; ++i) {
        double z0 = ctx->e.sig > 0 ? slices[i] : -slices[i];
        TensorField gs = small_metric_field(ctx->e.lift, z0);
        JetVec gj = gs.at(q, 0);
        std::vector<double> gv(gj.size());
        for (size_t c = 0; c < gj.size(); ++c) gv[c] = gj[c].value();
        // the SU(2) curvature scales out of z0; J lowered with g does not
        auto ec = einstein_check(gv, R, &Rsu2, s, nu_of_slice(z0), ctx->cfg.n_h);
        r[c_ric[i]] = ec.ric;
        r[c_su2[i]] = ec.su2;
        if (i == 1) {
          auto bad = einstein_check(gv, R, nullptr, s, -nu_of_slice(z0),
                                    ctx->cfg.n_h);
          r[d_nu] = bad.ric;
        }
      }
      auto split = ricci_weyl_split(R, vb);
      r[c_wrf] = split.weyl_ricci_residual;
      r[c_wb1] = first_bianchi_residual(split.r_ric, ns);
      r[c_wb2] = first_bianchi_residual(split.r_weyl, ns);
      r[c_wsym] = split.w.sym_residual;
    }
    // rotated presentation: Oproiu gauge and one further ξ shift
    {
      auto Jr = structure_jets_at(ctx->J_rot.J, q, 2);
      auto ex = extract_omega_op_jets(Jr, ns);
      ConnectionJets op = oproiu_with_omega(Jr, ex.omega, ns);
      StructureVals s = structure_values(Jr, ns);
      VielbeinJets vb = frame_from_structure(Jr, ns);
      auto run_gauge = [&](const ConnectionJets& c) {
        auto R = riemann(c.gamma, ns);
        auto Rsu2 = su2_curvature(*c.omega, ns);
        GlConnection gl = gl_connection(vb, c);
        auto Rgl = gl_curvature(gl.omega, ns, ns / 2);
        return std::tuple{curvature_relation_residual(R, &Rsu2, Rgl, vb, s), R,
                          Rgl};
      };
      auto [rel, R, Rgl] = run_gauge(op);
      r[c_relr] = rel;
      Pcg32 rng(ctx->cfg.seed ^ 0x99d1);
      JetVec xi(ns);
      for (int i = 0; i < ns; ++i)
        xi[i] = Jet(rng.uniform(-0.5, 0.5), op.gamma[0].dim(),
                    op.gamma[0].order());
      auto [relx, Rx, Rglx] = run_gauge(xi_transform(op, xi, Jr));
      r[c_relx] = relx;
      auto rr = r_curvature(Rgl, ns, ns / 2, nullptr);
      auto ric = ricci_from_riemann(R, ns);
      double da = 0.0;
      for (int X = 0; X < ns; ++X)
        for (int Y = 0; Y < ns; ++Y)
          da = std::max(da, std::abs(0.5 * (ric[X * ns + Y] - ric[Y * ns + X]) +
                                     rr[X * ns + Y]));
      r[c_ras] = da;
      // trace-part arrow: R^Ric carries the whole antisymmetric Ricci
      auto split = ricci_weyl_split(R, vb);
      auto ric_rp = ricci_from_riemann(split.r_ric, ns);
      double arrow = 0.0;
      for (int X = 0; X < ns; ++X)
        for (int Y = 0; Y < ns; ++Y)
          arrow = std::max(
              arrow, std::abs(0.5 * (ric_rp[X * ns + Y] - ric_rp[Y * ns + X]) -
                              0.5 * (ric[X * ns + Y] - ric[Y * ns + X])));
      r[c_arrow] = arrow;
      (void)Rx;
      (void)Rglx;
    }
    return r;
  };
  return def;
}

SuiteDef lift_suite(std::shared_ptr<EntryCtx> ctx) {
  if (ctx->e.kind == EntryKind::RigidFlat)
    throw std::invalid_argument(
        "lift suite: rigid-flat carries no cone structure");
  SuiteDef def;
  Checks cs;
  const RunConfig& cfg = ctx->cfg;
  const bool full = ctx->e.kind == EntryKind::FlatCone;
  const double trt = cfg.tol * 1e-2;  // round trips at the tighter gate
  int c_alg = cs.add("lifted-algebra", "JaJb=-dab+eps*Jc", cfg.tol * 1e-2);
  int c_nij = cs.add("lifted-nijenhuis", "N(Jhat)=0", cfg.tol);
  int c_pl = full ? cs.add("roundtrip-lift-of-project", "blocks re-assemble",
                           trt)
                  : -1;
  int c_lp = cs.add("roundtrip-project-of-lift", "reads return the data", trt);
  int c_ia = cs.add("integrability-A-curvature", "2dA - AxA = h(J.,.) antisym",
                    cfg.tol);
  int c_iq = cs.add("integrability-quaternionic", "w = -(1/6)(2A + AxJ)",
                    cfg.tol);
  int c_ih = full ? cs.add("integrability-h-match", "h equals metric reads",
                           cfg.tol)
                  : -1;
  int c_hom = cs.add("homothetic-lifted", "nabla k = 3/2 id", cfg.tol);
  int c_s2a = full ? cs.add("su2-vectors-adapted", "k-vec along z only", cfg.tol) : -1;
  int c_s2n = full ? cs.add("su2-vectors-norm", "g(ka,kb) = dab g(k,k)/9",
                            cfg.tol)
                   : -1;
  int c_s2b = full ? cs.add("su2-vectors-bracket", "su(2) closure", cfg.tol) : -1;
  int c_im = full ? cs.add("iff-metricity-upstairs", "nabla ghat = 0", cfg.tol) : -1;
  int c_ihm = full ? cs.add("iff-hermitian-upstairs", "ghat(J.,J.) = ghat", cfg.tol) : -1;
  int c_ie = full ? cs.add("iff-einstein-downstairs", "Ric = nu(r+2) g", cfg.tol) : -1;
  int d_bh = full ? cs.add("iff-broken-h-detected",
                           "broken h fails both directions", 1e-3, true)
                  : -1;
  def.chart = ctx->e.big_adapted;
  def.checks = cs.decls;
  const size_t nchecks = cs.decls.size();
  def.eval = [=](std::span<const double> p) {
    std::vector<double> r(nchecks, 0.0);
    const int N = ctx->N, ns = ctx->ns;
    std::vector<double> q = small_point(*ctx, p);
    const LiftData& L = ctx->e.lift;
    StructureVals sl = eval_structure(ctx->J_lift.J, p);
    r[c_alg] = quaternion_algebra_residual(sl);
    r[c_nij] = max_abs(nijenhuis_diag(ctx->J_lift, p));
    // project の lift: reads must return the LiftData fields
    {
      ProjectedPoint pp = project(sl, nullptr, p, ctx->cfg.n_h, L.z_ref);
      double d = pp.cross_residual;
      JetVec Aj = L.A.at(q, 0);
      JetVec Jq = L.J.J.at(q, 0);
      for (int a = 0; a < 3; ++a) {
        for (int X = 0; X < ns; ++X)
          d = std::max(d, std::abs(pp.A[a][X] - Aj[a * ns + X].value()));
        for (int c = 0; c < ns * ns; ++c)
          d = std::max(d, std::abs(pp.J[a][c] - Jq[a * ns * ns + c].value()));
      }
      std::vector<double> z3 = {p[1], p[2], p[3]};
      JetVec kt = L.k_alpha.at(z3, 0);
      for (int a = 0; a < 3; ++a)
        for (int al = 0; al < 3; ++al)
          d = std::max(d, std::abs(pp.k[a][al] - kt[a * 3 + al].value()));
      r[c_lp] = d;
    }
    if (full) {
      // lift of project: the adapted structure re-assembles from its reads
      StructureVals sa = eval_structure(ctx->e.J_adapted.J, p);
      JetVec gj = ctx->e.g_adapted.at(p, 0);
      std::vector<double> gv(gj.size());
      for (size_t c = 0; c < gj.size(); ++c) gv[c] = gj[c].value();
      ProjectedPoint pp = project(sa, &gv, p, ctx->cfg.n_h, L.z_ref);
      r[c_pl] = std::max(pp.cross_residual, pp.metric_residual);
      // h from the metric reads matches the LiftData h field
      JetVec hj = L.h.at(q, 0);
      double d = 0.0;
      for (int c = 0; c < ns * ns; ++c)
        d = std::max(d, std::abs(pp.h[c] - hj[c].value()));
      r[c_ih] = d;
    }
    {
      auto li = check_lift_integrability(L, q);
      r[c_ia] = li.residual_A;
      r[c_iq] = li.residual_quat;
      if (full) {
        JetVec hj = L.h.at(q, 0);
        double d = 0.0;
        for (int c = 0; c < ns * ns; ++c)
          d = std::max(d, std::abs(li.h[c] - hj[c].value()));
        r[c_ih] = std::max(r[c_ih], d);
      }
    }
    {
      auto Jj = structure_jets_at(ctx->J_lift.J, p, 2);
      ConnectionJets ob = obata(Jj, N);
      JetVec kj(N, Jet(0.0, N, 2));
      kj[0] = 3.0 * Jet::variable(p[0], N, 2, 0);
      r[c_hom] = check_closed_homothetic(ob, kj, N);
      if (full) {
        JetVec gh = ctx->g_lift.at(p, 2);
        r[c_im] = max_abs(covariant_derivative(ob.gamma, gh, N, 0, 2));
        std::vector<double> ghv(gh.size());
        for (size_t c = 0; c < gh.size(); ++c) ghv[c] = gh[c].value();
        r[c_ihm] = hermiticity_residual(ghv, sl);
      }
    }
    if (full) {
      // su2 vectors of the adapted structure
      StructureVals sa = eval_structure(ctx->e.J_adapted.J, p);
      std::vector<double> khat(N, 0.0);
      khat[0] = 3.0 * p[0];
      auto sv = su2_vectors(sa, khat);
      r[c_s2a] = sv.off_residual;
      JetVec gj = ctx->e.g_adapted.at(p, 0);
      auto gat = [&](int M, int Nn) { return gj[M * N + Nn].value(); };
      double gkk = 0.0;
      for (int M = 0; M < N; ++M)
        for (int Nn = 0; Nn < N; ++Nn) gkk += khat[M] * khat[Nn] * gat(M, Nn);
      double d = 0.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          double s = 0.0;
          for (int M = 0; M < N; ++M)
            for (int Nn = 0; Nn < N; ++Nn)
              s += sv.k[a][M] * sv.k[b][Nn] * gat(M, Nn);
          double expect = (a == b) ? gkk / 9.0 : 0.0;
          d = std::max(d, std::abs(s - expect));
        }
      r[c_s2n] = d;
      // bracket closure of the k-vector fields on the z chart
      {
        std::vector<double> z3 = {p[1], p[2], p[3]};
        TensorField kal = ctx->e.lift.k_alpha;
        double worst = 0.0;
        for (int a = 0; a < 3; ++a)
          for (int b = a + 1; b < 3; ++b) {
            TensorField ka = kal, kb = kal;
            auto slice = [](TensorField f, int a2) {
              TensorField out = f;
              FieldFn ev = f.eval;
              out.extra = 1;
              out.nup = 1;
              out.eval = [ev, a2](const JetVec& z) {
                JetVec all = ev(z);
                return JetVec(all.begin() + a2 * 3, all.begin() + a2 * 3 + 3);
              };
              return out;
            };
            auto br = lie_derivative(slice(ka, a), slice(kb, b),
                                     TensorKind::Vector, z3);
            // [k_a, k_b] = -eps_abc k_c for this frame orientation
            JetVec kt = kal.at(z3, 0);
            for (int al = 0; al < 3; ++al) {
              double expect = 0.0;
              for (int c = 0; c < 3; ++c)
                expect += kEps3[a][b][c] * kt[c * 3 + al].value();
              worst = std::max(worst, std::abs(br[al] - expect));
            }
          }
        r[c_s2b] = worst;
      }
      // negative control: broken h fails hermiticity upstairs and Einstein
      // downstairs
      {
        TensorField gb = lift_metric_field(ctx->lift_broken_h);
        JetVec gh = gb.at(p, 0);
        std::vector<double> ghv(gh.size());
        for (size_t c = 0; c < gh.size(); ++c) ghv[c] = gh[c].value();
        double up = hermiticity_residual(ghv, sl);
        SmallGauge sg = small_gauge_connection(ctx->e.lift, q);
        TensorField gsb = small_metric_field(ctx->lift_broken_h, ctx->e.z0_ref);
        JetVec gsj0 = gsb.at(q, 3);
        JetVec lcb = levi_civita(gsj0, ns);
        auto Rb = riemann(lcb, ns);
        std::vector<double> gsv(gsj0.size());
        for (size_t c = 0; c < gsj0.size(); ++c) gsv[c] = gsj0[c].value();
        auto ec = einstein_check(gsv, Rb, nullptr,
                                 structure_values(sg.Jjets, ns),
                                 nu_of_slice(ctx->e.z0_ref), ctx->cfg.n_h);
        r[d_bh] = std::min(up, ec.ric);
        // positive direction: the genuine h passes Einstein downstairs
        TensorField gs = small_metric_field(ctx->e.lift, ctx->e.z0_ref);
        JetVec gsj = gs.at(q, 3);
        JetVec lcs = levi_civita(gsj, ns);
        auto Rs = riemann(lcs, ns);
        std::vector<double> gv2(gsj.size());
        for (size_t c = 0; c < gsj.size(); ++c) gv2[c] = gsj[c].value();
        auto ok = einstein_check(gv2, Rs, nullptr,
                                 structure_values(sg.Jjets, ns),
                                 nu_of_slice(ctx->e.z0_ref), ctx->cfg.n_h);
        r[c_ie] = ok.ric;
      }
    }
    return r;
  };
  return def;
}

SuiteDef symmetry_suite(std::shared_ptr<EntryCtx> ctx) {
  SuiteDef def;
  Checks cs;
  const RunConfig& cfg = ctx->cfg;
  if (ctx->e.kind == EntryKind::RigidFlat) {
    int c_k = cs.add("killing-translations", "nabla nabla k = R k", cfg.tol);
    int c_tri = cs.add("triholomorphic", "L_k J = 0", cfg.tol);
    int c_nu0 = cs.add("moment-map-nu0-undefined",
                       "P undefined on the hyper-Kähler branch", cfg.tol);
    def.chart = ctx->e.small_chart;
    def.checks = cs.decls;
    def.eval = [ctx, c_k, c_tri, c_nu0](std::span<const double> p) {
      std::vector<double> r(3, 0.0);
      const int n = ctx->ns;
      auto Jj = structure_jets_at(ctx->e.J_linear.J, p, 2);
      ConnectionJets ob = obata(Jj, n);
      TensorField kf = constant_field(n, 1, 0, 1, [&] {
        std::vector<double> v(n, 0.0);
        v[0] = 1.0;
        return v;
      }());
      JetVec kj = kf.at(p, 2);
      r[c_k] = symmetry_residual(ob, kj, n);
      auto lj = lie_derivative(kf, ctx->e.J_linear.J, TensorKind::T11, p);
      auto rot = rotation_functions(lj, structure_values(Jj, n));
      r[c_tri] = std::max(rot.residual, max_abs(std::vector<double>{
                                            rot.r[0], rot.r[1], rot.r[2]}));
      std::array<JetVec, 3> omega;
      for (int a = 0; a < 3; ++a) omega[a].assign(n, Jet(0.0, n, 0));
      std::vector<double> kv(n, 0.0);
      kv[0] = 1.0;
      auto mm = moment_map(rot.r, omega, kv, 0.0, n);
      r[c_nu0] = mm.defined ? 1.0 : 0.0;
      return r;
    };
    return def;
  }
  if (ctx->e.kind != EntryKind::FlatCone)
    throw std::invalid_argument(
        "symmetries suite: supported for flat-cone and rigid-flat entries");
  int c_kb = cs.add("killing-big", "nabla nabla k = R k", cfg.tol);
  int c_dil = cs.add("dilatation-commutes", "[khat, k] = 0", cfg.tol);
  int c_ks = cs.add("killing-small", "nabla nabla k = R k", cfg.tol);
  int c_rot = cs.add("rotation-functions", "L_k J = r x J", cfg.tol);
  int c_rm = cs.add("r-read-matches", "r from m-read = rotation solve", cfg.tol);
  int c_mm = cs.add("moment-map-agreement", "P from nu P = -r/2 - w(k) matches dk-split", cfg.tol);
  int c_dk = cs.add("dk-reconstruction", "dk = nu J.P + L.t", cfg.tol);
  int c_xs = cs.add("xi-moment-shift", "nu P' = nu P - xi(J k)", cfg.tol);
  int d_xp = cs.add("detect-xi-precondition", "L_k xi != 0 rejected", 1e-3, true);
  int c_lift = cs.add("symmetry-lift-roundtrip", "khat = (0, k.r, k(q))", cfg.tol);
  int c_up = cs.add("upstairs-triholomorphic", "L_khat Jhat = 0", cfg.tol);
  int c_homo = cs.add("homothetic-triholomorphic", "k itself is a symmetry", cfg.tol);
  int c_br = cs.add("bracket-closure", "brackets stay symmetries", cfg.tol);
  def.chart = ctx->e.big_adapted;
  def.checks = cs.decls;
  const size_t nchecks = cs.decls.size();
  def.eval = [=](std::span<const double> p) {
    std::vector<double> r(nchecks, 0.0);
    const int N = ctx->N, ns = ctx->ns;
    std::vector<double> q = small_point(*ctx, p);
    const size_t ngen = ctx->gens_big.size();
    const size_t nuse = ngen;
    // big connection: Levi-Civita of the flat cone metric (= Obata)
    JetVec gj = ctx->e.g_adapted.at(p, 2);
    ConnectionJets cb;
    cb.n = N;
    cb.gamma = levi_civita(gj, N);
    StructureVals sbig = eval_structure(ctx->e.J_adapted.J, p);
    for (size_t I = 0; I < nuse; ++I) {
      JetVec kj = ctx->gens_big[I].at(p, 2);
      r[c_kb] = std::max(r[c_kb], symmetry_residual(cb, kj, N));
      // commutator with the dilatation
      auto br = lie_derivative(ctx->dilatation_big, ctx->gens_big[I],
                               TensorKind::Vector, p);
      r[c_dil] = std::max(r[c_dil], max_abs(br));
      // upstairs triholomorphy
      auto lj = lie_derivative(ctx->gens_big[I], ctx->e.J_adapted.J,
                               TensorKind::T11, p);
      auto rot = rotation_functions(lj, sbig);
      r[c_up] = std::max({r[c_up], rot.residual, std::abs(rot.r[0]),
                          std::abs(rot.r[1]), std::abs(rot.r[2])});
    }
    // homothetic vector is itself a triholomorphic symmetry
    {
      JetVec kj = ctx->dilatation_big.at(p, 2);
      r[c_homo] = symmetry_residual(cb, kj, N);
      auto lj = lie_derivative(ctx->dilatation_big, ctx->e.J_adapted.J,
                               TensorKind::T11, p);
      auto rot = rotation_functions(lj, sbig);
      r[c_homo] = std::max({r[c_homo], rot.residual, std::abs(rot.r[0]),
                            std::abs(rot.r[1]), std::abs(rot.r[2])});
    }
    // small space: LC-gauge connection, frames, moment maps
    SmallGauge sg = small_gauge_connection(ctx->e.lift, q);
    StructureVals s = structure_values(sg.Jjets, ns);
    VielbeinJets vb = frame_from_structure(sg.Jjets, ns);
    const double nu = nu_of_slice(ctx->e.z0_ref);
    for (size_t I = 0; I < nuse; ++I) {
      const SmallGenerator& gen = ctx->gens_small[I];
      JetVec kj = gen.k.at(q, 2);
      r[c_ks] = std::max(r[c_ks], symmetry_residual(sg.conn, kj, ns));
      auto lj = lie_derivative(gen.k, ctx->e.lift.J.J, TensorKind::T11, q);
      auto rot = rotation_functions(lj, s);
      r[c_rot] = std::max(r[c_rot], rot.residual);
      JetVec rj = gen.r.at(q, 0);
      double dr = 0.0;
      for (int a = 0; a < 3; ++a)
        dr = std::max(dr, std::abs(rj[a].value() - rot.r[a]));
      r[c_rm] = std::max(r[c_rm], dr);
      std::vector<double> kv(ns);
      for (int X = 0; X < ns; ++X) kv[X] = kj[X].value();
      auto mm = moment_map(rot.r, *sg.conn.omega, kv, nu, ns);
      auto dk = decompose_dk(sg.conn, kj, vb, s, nu);
      r[c_dk] = std::max(r[c_dk], dk.residual);
      double dp = 0.0;
      for (int a = 0; a < 3; ++a) dp = std::max(dp, std::abs(mm.P[a] - dk.P[a]));
      r[c_mm] = std::max(r[c_mm], dp);
      // lift round trip
      TensorField khat = lift_symmetry_field(ctx->e.lift, gen.k, gen.r);
      JetVec kh = khat.at(p, 0);
      JetVec kade = ctx->gens_big[I].at(p, 0);
      double dl = 0.0;
      for (int M = 0; M < N; ++M)
        dl = std::max(dl, std::abs(kh[M].value() - kade[M].value()));
      r[c_lift] = std::max(r[c_lift], dl);
    }
    // xi moment shift with a rotation-invariant radial xi on a diagonal
    // generator (the first diagonal unit of the q block)
    {
      size_t I = 3;  // diag1_e1: rotates the q block, preserves |q|^2
      const SmallGenerator& gen = ctx->gens_small[I];
      TensorField xif;
      xif.dim = ns;
      xif.ndown = 1;
      xif.order_cost = 1;
      xif.eval = [ns](const JetVec& qq) {
        Jet rho(0.0, qq[0].dim(), qq[0].order());
        for (int i = 0; i < ns; ++i) rho += qq[i] * qq[i];
        Jet f = rho * rho * 0.25 + rho * 0.5;
        JetVec out;
        for (int i = 0; i < ns; ++i) out.push_back(f.partial(i));
        return out;
      };
      double pre = max_abs(lie_derivative(gen.k, xif, TensorKind::OneForm, q));
      JetVec kj = gen.k.at(q, 1);
      std::vector<double> kv(ns);
      for (int X = 0; X < ns; ++X) kv[X] = kj[X].value();
      auto lj = lie_derivative(gen.k, ctx->e.lift.J.J, TensorKind::T11, q);
      auto rot = rotation_functions(lj, s);
      auto P0 = moment_map(rot.r, *sg.conn.omega, kv, nu, ns);
      JetVec xij = xif.at(q, 1);
      auto P1 = xi_moment_shift(P0.P, xij, kv, s, nu);
      // independent derivation: Pinr with the ξ-transformed connection
      ConnectionJets ct = xi_transform(sg.conn, xij, sg.Jjets);
      auto P2 = moment_map(rot.r, *ct.omega, kv, nu, ns);
      double d = pre;
      for (int a = 0; a < 3; ++a) d = std::max(d, std::abs(P1[a] - P2.P[a]));
      r[c_xs] = std::max(r[c_xs], d);
      // precondition violation: a constant xi is not invariant under the
      // rotation generator
      JetVec xic(ns, Jet(0.0, ns, 1));
      TensorField xicf = constant_field(ns, 0, 1, 1, [&] {
        std::vector<double> v(ns);
        for (int i = 0; i < ns; ++i) v[i] = 0.3 + 0.2 * i;
        return v;
      }());
      r[d_xp] = max_abs(lie_derivative(gen.k, xicf, TensorKind::OneForm, q));
      (void)xic;
    }
    // bracket closure on the first generators (n_h = 1 exercises the full set)
    {
      double worst = 0.0;
      const int npair = ctx->cfg.n_h == 1 ? 4 : 2;
      for (int i = 0; i < npair; ++i) {
        const auto& P1 = ctx->e.gen_mats[i];
        const auto& P2 = ctx->e.gen_mats[(i + 2) % nuse];
        std::vector<double> Pc(static_cast<size_t>(N) * N, 0.0);
        for (int a = 0; a < N; ++a)
          for (int b = 0; b < N; ++b) {
            double sum = 0.0;
            for (int c = 0; c < N; ++c)
              sum += P2[a * N + c] * P1[c * N + b] -
                     P1[a * N + c] * P2[c * N + b];
            Pc[a * N + b] = sum;
          }
        TensorField kc = adapted_generator(ctx->e, Pc);
        JetVec kj = kc.at(p, 2);
        worst = std::max(worst, symmetry_residual(cb, kj, N));
      }
      r[c_br] = worst;
    }
    return r;
  };
  return def;
}

SuiteDef user_lift_suite(std::shared_ptr<EntryCtx>, const RunConfig& cfg) {
  std::ifstream in(cfg.liftdata_path);
  if (!in) throw std::runtime_error("liftdata: cannot open " + cfg.liftdata_path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto lf = std::make_shared<LiftDataFile>(liftdata_from_json(ss.str()));
  SuiteDef def;
  Checks cs;
  int c_alg = cs.add("lifted-algebra", "JaJb=-dab+eps*Jc", cfg.tol * 1e-2);
  int c_nij = cs.add("lifted-nijenhuis", "N(Jhat)=0", cfg.tol);
  int c_lp = cs.add("roundtrip-project-of-lift", "reads return the data",
                    cfg.tol * 1e-2);
  int c_ia = cs.add("integrability-A-curvature", "2dA - AxA = h(J.,.) antisym",
                    cfg.tol);
  int c_iq = cs.add("integrability-quaternionic", "w = -(1/6)(2A + AxJ)",
                    cfg.tol);
  const int ns = lf->data.small_dim();
  def.chart.dim = 4 + ns;
  def.chart.box.lo = {std::min(lf->z0_lo, lf->z0_hi), 0.2, 0.2, 0.2};
  def.chart.box.hi = {std::max(lf->z0_lo, lf->z0_hi), 1.0, 1.0, 1.0};
  const double qb = 0.9 / std::sqrt(static_cast<double>(ns));
  for (int i = 0; i < ns; ++i) {
    def.chart.box.lo.push_back(-qb);
    def.chart.box.hi.push_back(qb);
  }
  def.checks = cs.decls;
  auto Jl = std::make_shared<HypercomplexTriple>(lift_structure_field(lf->data));
  def.eval = [lf, Jl, c_alg, c_nij, c_lp, c_ia, c_iq,
              ns](std::span<const double> p) {
    std::vector<double> r(5, 0.0);
    std::vector<double> q(p.begin() + 4, p.end());
    StructureVals sl = eval_structure(Jl->J, p);
    r[c_alg] = quaternion_algebra_residual(sl);
    r[c_nij] = max_abs(nijenhuis_diag(*Jl, p));
    ProjectedPoint pp = project(sl, nullptr, p, ns / 4, lf->data.z_ref);
    double d = pp.cross_residual;
    JetVec Aj = lf->data.A.at(q, 0);
    for (int a = 0; a < 3; ++a)
      for (int X = 0; X < ns; ++X)
        d = std::max(d, std::abs(pp.A[a][X] - Aj[a * ns + X].value()));
    r[c_lp] = d;
    auto li = check_lift_integrability(lf->data, q);
    r[c_ia] = li.residual_A;
    r[c_iq] = li.residual_quat;
    return r;
  };
  return def;
}

std::vector<SuiteDef> build_suites(const std::string& suite,
                                   const RunConfig& cfg) {
  if (suite == "lift" && !cfg.liftdata_path.empty())
    return {user_lift_suite(nullptr, cfg)};
  auto ctx = make_ctx(cfg);
  if (suite == "verify-structure") return {structure_suite(ctx)};
  if (suite == "connections") return {connections_suite(ctx)};
  if (suite == "curvature") return {curvature_suite(ctx)};
  if (suite == "lift" || suite == "project" || suite == "roundtrip")
    return {lift_suite(ctx)};
  if (suite == "symmetries") return {symmetry_suite(ctx)};
  if (suite == "all") {
    std::vector<SuiteDef> all;
    all.push_back(structure_suite(ctx));
    all.push_back(connections_suite(ctx));
    all.push_back(curvature_suite(ctx));
    if (ctx->e.kind != EntryKind::RigidFlat) all.push_back(lift_suite(ctx));
    if (ctx->e.kind != EntryKind::DeformedCone)
      all.push_back(symmetry_suite(ctx));
    return all;
  }
  throw std::invalid_argument("unknown suite: " + suite);
}

}  // namespace

bool Report::all_pass() const {
  for (const CheckResult& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string Report::to_json() const {
  auto fmt = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "{\n";
  os << "  \"schema\": 1,\n";
  os << "  \"suite\": \"" << suite << "\",\n";
  os << "  \"manifold\": \"" << manifold << "\",\n";
  os << "  \"n_h\": " << n_h << ",\n";
  os << "  \"seed\": " << seed << ",\n";
  os << "  \"tolerance\": " << fmt(tolerance) << ",\n";
  os << "  \"points\": " << points << ",\n";
  os << "  \"checks\": [\n";
  for (size_t i = 0; i < checks.size(); ++i) {
    const CheckResult& c = checks[i];
    os << "    {\"name\": \"" << c.name << "\", \"paper_eq_label\": \""
       << c.eq_label << "\", \"max_residual\": " << fmt(c.max_residual)
       << ", \"threshold\": " << fmt(c.threshold) << ", \"detection\": "
       << (c.detection ? "true" : "false")
       << ", \"pass\": " << (c.pass ? "true" : "false") << "}"
       << (i + 1 < checks.size() ? "," : "") << "\n";
  }
  os << "  ],\n";
  os << "  \"all_pass\": " << (all_pass() ? "true" : "false") << ",\n";
  os << "  \"wall_time_ms\": " << wall_time_ms << "\n";
  os << "}\n";
  return os.str();
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "verify-structure", "connections", "curvature", "lift",
      "project",          "roundtrip",   "symmetries", "all"};
  return names;
}

Report run_suite(const std::string& suite, const RunConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  if (cfg.points <= 0)
    throw std::invalid_argument("points must be positive");
  if (cfg.order < 3 || cfg.order > kMaxJetOrder)
    throw std::invalid_argument("suites need jet order 3 (got " +
                                std::to_string(cfg.order) + ")");
  std::vector<SuiteDef> defs = build_suites(suite, cfg);
  Report rep;
  rep.suite = suite;
  rep.manifold = cfg.manifold;
  rep.n_h = cfg.n_h;
  rep.seed = cfg.seed;
  rep.tolerance = cfg.tol;
  rep.points = cfg.points;
  for (SuiteDef& def : defs) {
    // draw the batch sequentially, evaluate points independently
    Pcg32 rng(cfg.seed);
    std::vector<std::vector<double>> pts;
    pts.reserve(cfg.points);
    for (int i = 0; i < cfg.points; ++i) pts.push_back(def.chart.sample(rng));
    const int nchecks = static_cast<int>(def.checks.size());
    std::vector<std::vector<double>> per_point(
        cfg.points, std::vector<double>(nchecks, 0.0));
#ifdef _OPENMP
    int nthreads = cfg.parallel > 0 ? cfg.parallel : omp_get_max_threads();
    if (!cfg.serial) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
      for (int i = 0; i < cfg.points; ++i) {
        try {
          per_point[i] = def.eval(pts[i]);
        } catch (...) {
          per_point[i].assign(nchecks,
                              std::numeric_limits<double>::infinity());
        }
      }
    } else
#endif
    {
      for (int i = 0; i < cfg.points; ++i) {
        try {
          per_point[i] = def.eval(pts[i]);
        } catch (...) {
          per_point[i].assign(nchecks,
                              std::numeric_limits<double>::infinity());
        }
      }
    }
    for (int c = 0; c < nchecks; ++c) {
      const CheckDecl& d = def.checks[c];
      CheckResult out;
      out.name = d.name;
      out.eq_label = d.label;
      out.threshold = d.gate;
      out.detection = d.detection;
      if (d.detection) {
        double mn = std::numeric_limits<double>::infinity();
        for (int i = 0; i < cfg.points; ++i)
          mn = std::min(mn, per_point[i][c]);
        out.max_residual = mn;
        out.pass = mn > d.gate;
      } else {
        double mx = 0.0;
        for (int i = 0; i < cfg.points; ++i)
          mx = std::max(mx, per_point[i][c]);
        out.max_residual = mx;
        out.pass = mx <= d.gate;
      }
      rep.checks.push_back(out);
    }
  }
  auto t1 = std::chrono::steady_clock::now();
  rep.wall_time_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  return rep;
}

}  // namespace quatlike
