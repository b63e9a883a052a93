#include "quatlike/confmap.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "quatlike/linalg.hpp"

namespace quatlike {

namespace {

// quaternion product on 4-jets: (p q) with components (1, i, j, k)
std::array<Jet, 4> qmul(const std::array<Jet, 4>& p, const std::array<Jet, 4>& q) {
  return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
          p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
          p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
          p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
}

std::array<Jet, 4> unit_quat_of_angles(const JetVec& z) {
  Jet th2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
  Jet th = sqrt(th2);
  Jet c = cos(th * 0.5);
  Jet s = sin(th * 0.5) / th;
  return {c, s * z[0], s * z[1], s * z[2]};
}

// adjoint rotation of the unit quaternion w: (w e_a w^-1)^b = O[a][b]
std::array<std::array<Jet, 3>, 3> adjoint_rotation(const std::array<Jet, 4>& w) {
  std::array<Jet, 4> wbar{w[0], -w[1], -w[2], -w[3]};
  std::array<std::array<Jet, 3>, 3> O;
  for (int a = 0; a < 3; ++a) {
    std::array<Jet, 4> ea{Jet(0.0, w[0].dim(), w[0].order()),
                          Jet(0.0, w[0].dim(), w[0].order()),
                          Jet(0.0, w[0].dim(), w[0].order()),
                          Jet(0.0, w[0].dim(), w[0].order())};
    ea[a + 1] = Jet(1.0, w[0].dim(), w[0].order());
    std::array<Jet, 4> t = qmul(qmul(w, ea), wbar);
    for (int b = 0; b < 3; ++b) O[a][b] = t[b + 1];
  }
  return O;
}

}  // namespace

std::array<std::array<Jet, 3>, 3> frame_rotation_of_angles(const JetVec& z) {
  return adjoint_rotation(unit_quat_of_angles(z));
}

TensorField standard_su2_vectors_field() {
  TensorField f;
  f.dim = 3;
  f.nup = 1;
  f.extra = 3;
  f.eval = [](const JetVec& z) -> JetVec {
    const int dim = z[0].dim();
    const int order = z[0].order();
    const Jet zero(0.0, dim, order);
    std::array<Jet, 4> w = unit_quat_of_angles(z);
    // analytic jacobian D[c][alpha] = ∂w_c/∂z^alpha (chain-rule closed form,
    // so the field stays exact when evaluated on slices of other charts)
    Jet th2 = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
    Jet th = sqrt(th2);
    Jet inv_th = 1.0 / th;
    Jet c = cos(th * 0.5), s = sin(th * 0.5);
    Jet coef = c * (0.5 * inv_th * inv_th) - s * (inv_th * inv_th * inv_th);
    JetVec D(12, zero);
    for (int al = 0; al < 3; ++al) {
      D[0 * 3 + al] = -(s * 0.5) * (z[al] * inv_th);
      for (int m = 0; m < 3; ++m) {
        Jet e = (z[m] * z[al]) * coef;
        if (m == al) e += s * inv_th;
        D[(m + 1) * 3 + al] = e;
      }
    }
    // normal matrix G = D^T D and targets t_a = sign * (w e_a)/2
    JetVec G(9, zero);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        Jet acc = zero;
        for (int cc = 0; cc < 4; ++cc) acc += D[cc * 3 + a] * D[cc * 3 + b];
        G[a * 3 + b] = acc;
      }
    std::array<std::array<Jet, 4>, 3> targets;
    std::array<Jet, 4> e1{zero, Jet(1.0, dim, order), zero, zero};
    std::array<Jet, 4> e2{zero, zero, Jet(1.0, dim, order), zero};
    std::array<Jet, 4> e3{zero, zero, zero, Jet(1.0, dim, order)};
    targets[0] = qmul(w, e1);
    targets[1] = qmul(w, e2);
    targets[2] = qmul(w, e3);
    JetVec out(9, zero);
    for (int a = 0; a < 3; ++a) {
      JetVec rhs(3, zero);
      for (int al = 0; al < 3; ++al) {
        Jet acc = zero;
        for (int cc = 0; cc < 4; ++cc)
          acc += D[cc * 3 + al] * targets[a][cc] * (0.5 * kSu2FrameSign);
        rhs[al] = acc;
      }
      JetVec sol = jet_solve_dense(G, rhs, 3, 1);
      for (int al = 0; al < 3; ++al) out[a * 3 + al] = sol[al];
    }
    return out;
  };
  return f;
}

std::array<std::array<Jet, 3>, 3> invert_k_alpha(
    const std::array<std::array<Jet, 3>, 3>& k) {
  JetVec K(9);
  for (int a = 0; a < 3; ++a)
    for (int al = 0; al < 3; ++al) K[a * 3 + al] = k[a][al];
  JetVec Ki = jet_invert(K, 3);
  std::array<std::array<Jet, 3>, 3> m;
  for (int a = 0; a < 3; ++a)
    for (int be = 0; be < 3; ++be) m[a][be] = Ki[be * 3 + a];
  return m;
}

namespace {

struct LiftEvalParts {
  Jet z0, inv_z0;
  std::array<JetVec, 3> J;                 // small block (co-rotated)
  std::array<JetVec, 3> A;                 // [a][X] (co-rotated)
  std::array<std::array<Jet, 3>, 3> k, m;  // [a][alpha]
};

// The triplet data of the decomposition co-rotates with the SU(2) frame: the
// reference-section fields (J, A) are rotated by Ad(w(z)) Ad(w(z_ref))^{-1}
// before the blocks are assembled. Without this rotation the assembled
// structure would not reproduce the cone away from the section.
LiftEvalParts eval_lift_parts(const LiftData& L, const JetVec& xhat) {
  const int ns = L.small_dim();
  LiftEvalParts P;
  P.z0 = xhat[0];
  if (P.z0.value() == 0.0)
    throw std::domain_error("lift: z0 = 0 is outside the cone chart");
  P.inv_z0 = 1.0 / P.z0;
  JetVec zjets(xhat.begin() + 1, xhat.begin() + 4);
  JetVec qjets(xhat.begin() + 4, xhat.end());
  JetVec Jall = L.J.J.eval(qjets);
  JetVec Aall = L.A.eval(qjets);
  JetVec kall = L.k_alpha.eval(zjets);
  const int dim = xhat[0].dim(), order = xhat[0].order();
  auto O = adjoint_rotation(unit_quat_of_angles(zjets));
  JetVec zref;
  for (int a = 0; a < 3; ++a) zref.emplace_back(L.z_ref[a], dim, order);
  auto Oref = adjoint_rotation(unit_quat_of_angles(zref));
  // relative rotation R = O * Oref^T
  std::array<std::array<Jet, 3>, 3> Rrel;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      Jet s(0.0, dim, order);
      for (int c = 0; c < 3; ++c) s += O[a][c] * Oref[b][c];
      Rrel[a][b] = s;
    }
  for (int a = 0; a < 3; ++a) {
    P.J[a].assign(static_cast<size_t>(ns) * ns, Jet(0.0, dim, order));
    P.A[a].assign(ns, Jet(0.0, dim, order));
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < ns * ns; ++c)
        P.J[a][c] += Rrel[a][b] * Jall[b * ns * ns + c];
      for (int X = 0; X < ns; ++X)
        P.A[a][X] += Rrel[a][b] * Aall[b * ns + X];
    }
    for (int al = 0; al < 3; ++al) P.k[a][al] = kall[a * 3 + al];
  }
  P.m = invert_k_alpha(P.k);
  return P;
}

}  // namespace

HypercomplexTriple lift_structure_field(const LiftData& L) {
  const int nh = L.n_h;
  const int N = L.big_dim(), ns = L.small_dim();
  TensorField f;
  f.dim = N;
  f.nup = f.ndown = 1;
  f.extra = 3;
  f.order_cost = std::max({L.J.J.order_cost, L.A.order_cost,
                           L.k_alpha.order_cost});
  LiftData Lc = L;
  f.eval = [Lc, N, ns, nh](const JetVec& xhat) -> JetVec {
    LiftEvalParts P = eval_lift_parts(Lc, xhat);
    const int dim = xhat[0].dim();
    const int order = xhat[0].order();
    const Jet zero(0.0, dim, order);
    JetVec out(static_cast<size_t>(3) * N * N, zero);
    auto at = [&](int a, int X, int Y) -> Jet& { return out[a * N * N + X * N + Y]; };
    // u[b][be] = A⃗_Z · k⃗^be is assembled on the fly where needed
    for (int a = 0; a < 3; ++a) {
      for (int al = 0; al < 3; ++al) at(a, al + 1, 0) = -(P.z0 * P.m[a][al]);
      for (int X = 0; X < ns; ++X) at(a, 4 + X, 0) = P.z0 * P.A[a][X];
      for (int be = 0; be < 3; ++be) at(a, 0, be + 1) = P.k[a][be] * P.inv_z0;
      for (int al = 0; al < 3; ++al)
        for (int be = 0; be < 3; ++be) {
          Jet s = zero;
          for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
              double e = kEps3[a][b][c];
              if (e != 0.0) s += e * (P.k[b][be] * P.m[c][al]);
            }
          at(a, al + 1, be + 1) = s;
        }
      for (int X = 0; X < ns; ++X)
        for (int be = 0; be < 3; ++be) {
          Jet s = zero;
          for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
              double e = kEps3[a][b][c];
              if (e != 0.0) s += e * (P.A[b][X] * P.k[c][be]);
            }
          for (int Z = 0; Z < ns; ++Z) {
            Jet ak = zero;
            for (int b = 0; b < 3; ++b) ak += P.A[b][Z] * P.k[b][be];
            s += P.J[a][X * ns + Z] * ak;
          }
          at(a, 4 + X, be + 1) = s;
        }
      for (int X = 0; X < ns; ++X)
        for (int Y = 0; Y < ns; ++Y) at(a, 4 + X, 4 + Y) = P.J[a][X * ns + Y];
    }
    (void)order;
    return out;
  };
  return {f};
}

TensorField lift_metric_field(const LiftData& L) {
  if (!L.has_h)
    throw std::invalid_argument("lift_metric_field: LiftData carries no h");
  const int N = L.big_dim(), ns = L.small_dim();
  TensorField f;
  f.dim = N;
  f.ndown = 2;
  f.order_cost = std::max({L.J.J.order_cost, L.A.order_cost, L.h.order_cost,
                           L.k_alpha.order_cost});
  LiftData Lc = L;
  f.eval = [Lc, N, ns](const JetVec& xhat) -> JetVec {
    LiftEvalParts P = eval_lift_parts(Lc, xhat);
    JetVec qjets(xhat.begin() + 4, xhat.end());
    JetVec hall = Lc.h.eval(qjets);
    const Jet zero(0.0, xhat[0].dim(), xhat[0].order());
    JetVec g(static_cast<size_t>(N) * N, zero);
    // M_{al,be} = m⃗_al · m⃗_be ; u^be_X = A⃗_X · k⃗^be
    std::array<std::array<Jet, 3>, 3> M;
    for (int al = 0; al < 3; ++al)
      for (int be = 0; be < 3; ++be) {
        Jet s = zero;
        for (int a = 0; a < 3; ++a) s += P.m[a][al] * P.m[a][be];
        M[al][be] = s;
      }
    std::vector<Jet> u(static_cast<size_t>(3) * ns, zero);
    for (int be = 0; be < 3; ++be)
      for (int X = 0; X < ns; ++X) {
        Jet s = zero;
        for (int a = 0; a < 3; ++a) s += P.A[a][X] * P.k[a][be];
        u[be * ns + X] = s;
      }
    g[0] = -P.inv_z0;
    for (int al = 0; al < 3; ++al)
      for (int be = 0; be < 3; ++be)
        g[(al + 1) * N + (be + 1)] = -(P.z0 * M[al][be]);
    for (int al = 0; al < 3; ++al)
      for (int X = 0; X < ns; ++X) {
        Jet s = zero;
        for (int be = 0; be < 3; ++be) s += M[al][be] * u[be * ns + X];
        s = P.z0 * s;
        g[(al + 1) * N + (4 + X)] = s;
        g[(4 + X) * N + (al + 1)] = s;
      }
    for (int X = 0; X < ns; ++X)
      for (int Y = 0; Y < ns; ++Y) {
        Jet s = hall[X * ns + Y];
        for (int al = 0; al < 3; ++al)
          for (int be = 0; be < 3; ++be)
            s -= M[al][be] * (u[al * ns + X] * u[be * ns + Y]);
        g[(4 + X) * N + (4 + Y)] = P.z0 * s;
      }
    return g;
  };
  return f;
}

TensorField small_metric_field(const LiftData& L, double z0) {
  if (!L.has_h)
    throw std::invalid_argument("small_metric_field: LiftData carries no h");
  TensorField f = L.h;
  TensorField h = L.h;
  f.eval = [h, z0](const JetVec& q) {
    JetVec out = h.eval(q);
    for (Jet& j : out) j *= z0;
    return out;
  };
  return f;
}

double check_closed_homothetic(const ConnectionJets& c, const JetVec& kjets,
                               int n) {
  JetVec nk = covariant_derivative(c.gamma, kjets, n, 1, 0);
  double worst = 0.0;
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y) {
      double v = nk[X * n + Y].value() - (X == Y ? 1.5 : 0.0);
      worst = std::max(worst, std::abs(v));
    }
  return worst;
}

Su2VectorsResult su2_vectors(const StructureVals& Jhat,
                             std::span<const double> khat) {
  const int N = Jhat.n;
  Su2VectorsResult out;
  for (int a = 0; a < 3; ++a) {
    out.k[a].assign(N, 0.0);
    for (int Y = 0; Y < N; ++Y) {
      double s = 0.0;
      for (int X = 0; X < N; ++X) s += khat[X] * Jhat.J[a][X * N + Y];
      out.k[a][Y] = s / 3.0;
    }
    out.off_residual = std::max(out.off_residual, std::abs(out.k[a][0]));
    for (int Y = 4; Y < N; ++Y)
      out.off_residual = std::max(out.off_residual, std::abs(out.k[a][Y]));
  }
  return out;
}

std::array<JetVec, 3> omega_op_from_a(const std::array<JetVec, 3>& Jjets,
                                      const std::array<JetVec, 3>& Ajets,
                                      int n) {
  const Jet& probe = Ajets[0][0];
  const Jet zero(0.0, probe.dim(), probe.order());
  std::array<JetVec, 3> w;
  for (int a = 0; a < 3; ++a) {
    w[a].assign(n, zero);
    for (int X = 0; X < n; ++X) {
      Jet s = Ajets[a][X] * 2.0;
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
          double e = kEps3[a][b][c];
          if (e == 0.0) continue;
          for (int Y = 0; Y < n; ++Y)
            s += e * (Ajets[b][Y] * Jjets[c][X * n + Y]);
        }
      w[a][X] = s * (-1.0 / 6.0);
    }
  }
  return w;
}

LiftIntegrability check_lift_integrability(const LiftData& L,
                                           std::span<const double> q) {
  const int n = L.small_dim();
  LiftIntegrability out;
  // A and dA values
  PartialResult Ap = partial(L.A, q);
  auto Aval = [&](int a, int X) { return Ap.comp[a * n + X]; };
  auto dA = [&](int a, int X, int Y) {  // ∂_X A^a_Y - ∂_Y A^a_X
    return Ap.d(a * n + Y, X) - Ap.d(a * n + X, Y);
  };
  StructureVals s = eval_structure(L.J.J, q);
  // lhs^a_{XY} = 2 dA - (A⃗ × A⃗)(X,Y) = 2dA - 2 A⃗_X × A⃗_Y
  // rhs pattern: J^a_X{}^W h_{WY} - J^a_Y{}^W h_{WX}, h symmetric unknown
  const int ncols = sym2_count(n);
  const int nrows = 3 * n * (n - 1) / 2;
  Mat Amat(nrows, ncols);
  std::vector<double> rhs(nrows, 0.0);
  int row = 0;
  for (int a = 0; a < 3; ++a)
    for (int X = 0; X < n; ++X)
      for (int Y = X + 1; Y < n; ++Y) {
        double lhs = 2.0 * dA(a, X, Y);
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c) {
            double e = kEps3[a][b][c];
            if (e != 0.0) lhs -= 2.0 * e * Aval(b, X) * Aval(c, Y);
          }
        rhs[row] = lhs;
        for (int W = 0; W < n; ++W) {
          Amat(row, sym2_index(n, std::min(W, Y), std::max(W, Y))) +=
              s.J[a][X * n + W];
          Amat(row, sym2_index(n, std::min(W, X), std::max(W, X))) -=
              s.J[a][Y * n + W];
        }
        ++row;
      }
  std::vector<double> hpacked =
      lstsq_eigen(Amat, rhs, 1e-10, &out.null_dim, &out.residual_A);
  out.h.assign(static_cast<size_t>(n) * n, 0.0);
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      out.h[X * n + Y] = hpacked[sym2_index(n, std::min(X, Y), std::max(X, Y))];
  // quaternionicity against the closed-form SU(2) connection
  auto Jjets = structure_jets_at(L.J.J, q, 1);
  OmegaOpResult ex = extract_omega_op_jets(Jjets, n);
  JetVec Aj = L.A.at(q, 0);
  std::array<JetVec, 3> Ajets;
  for (int a = 0; a < 3; ++a)
    Ajets[a].assign(Aj.begin() + a * n, Aj.begin() + (a + 1) * n);
  std::array<JetVec, 3> Jv;
  for (int a = 0; a < 3; ++a) {
    Jv[a].clear();
    for (const Jet& j : Jjets[a]) Jv[a].push_back(j.truncated(0));
  }
  auto formula = omega_op_from_a(Jv, Ajets, n);
  double worst = ex.residual;
  for (int a = 0; a < 3; ++a) {
    out.omega_op[a].assign(n, 0.0);
    for (int X = 0; X < n; ++X) {
      out.omega_op[a][X] = formula[a][X].value();
      worst = std::max(worst, std::abs(formula[a][X].value() -
                                       ex.omega[a][X].value()));
    }
  }
  out.residual_quat = worst;
  return out;
}

LiftData xi_hat_transform(const LiftData& L, TensorField xihat) {
  LiftData out = L;
  out.has_h = false;
  out.h = TensorField{};
  TensorField Abase = L.A;
  TensorField Jf = L.J.J;
  const int n = L.small_dim();
  out.A.dim = n;
  out.A.ndown = 1;
  out.A.extra = 3;
  out.A.order_cost =
      std::max({Abase.order_cost, Jf.order_cost, xihat.order_cost});
  out.A.eval = [Abase, Jf, xihat, n](const JetVec& q) -> JetVec {
    JetVec A = Abase.eval(q);
    JetVec J = Jf.eval(q);
    JetVec xi = xihat.eval(q);
    for (int a = 0; a < 3; ++a)
      for (int X = 0; X < n; ++X) {
        Jet s = A[a * n + X];
        for (int Y = 0; Y < n; ++Y)
          s += 2.0 * (J[a * n * n + X * n + Y] * xi[Y]);
        A[a * n + X] = s;
      }
    return A;
  };
  return out;
}

ProjectedPoint project(const StructureVals& Jhat,
                       const std::vector<double>* ghat,
                       std::span<const double> phat, int n_h,
                       std::array<double, 3> z_ref) {
  const int N = Jhat.n;
  const int ns = 4 * n_h;
  ProjectedPoint out;
  out.z0 = phat[0];
  auto Jat = [&](int a, int X, int Y) { return Jhat.J[a][X * N + Y]; };
  for (int a = 0; a < 3; ++a) {
    out.J[a].assign(static_cast<size_t>(ns) * ns, 0.0);
    out.A[a].assign(ns, 0.0);
    for (int X = 0; X < ns; ++X) {
      out.A[a][X] = Jat(a, 4 + X, 0) / out.z0;
      for (int Y = 0; Y < ns; ++Y) out.J[a][X * ns + Y] = Jat(a, 4 + X, 4 + Y);
    }
    for (int be = 0; be < 3; ++be) out.k[a][be] = out.z0 * Jat(a, 0, be + 1);
    for (int al = 0; al < 3; ++al) out.m[a][al] = -Jat(a, al + 1, 0) / out.z0;
  }
  // cross-block certification: re-assemble every block from the reads
  double worst = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int be = 0; be < 3; ++be) {
      double s = 0.0;  // mkinverse
      for (int b = 0; b < 3; ++b) s += out.k[b][be] * out.m[b][be];
      (void)s;
    }
  for (int al = 0; al < 3; ++al)
    for (int be = 0; be < 3; ++be) {
      double s = 0.0;
      for (int a = 0; a < 3; ++a) s += out.k[a][al] * out.m[a][be];
      worst = std::max(worst, std::abs(s - (al == be ? 1.0 : 0.0)));
    }
  for (int a = 0; a < 3; ++a) {
    worst = std::max(worst, std::abs(Jat(a, 0, 0)));
    for (int Y = 0; Y < ns; ++Y) {
      worst = std::max(worst, std::abs(Jat(a, 0, 4 + Y)));
      for (int al = 0; al < 3; ++al)
        worst = std::max(worst, std::abs(Jat(a, al + 1, 4 + Y)));
    }
    for (int al = 0; al < 3; ++al)
      for (int be = 0; be < 3; ++be) {
        double expect = 0.0;
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c) {
            double e = kEps3[a][b][c];
            if (e != 0.0) expect += e * out.k[b][be] * out.m[c][al];
          }
        worst = std::max(worst, std::abs(Jat(a, al + 1, be + 1) - expect));
      }
    for (int X = 0; X < ns; ++X)
      for (int be = 0; be < 3; ++be) {
        double expect = 0.0;
        for (int b = 0; b < 3; ++b)
          for (int c = 0; c < 3; ++c) {
            double e = kEps3[a][b][c];
            if (e != 0.0) expect += e * out.A[b][X] * out.k[c][be];
          }
        for (int Z = 0; Z < ns; ++Z) {
          double ak = 0.0;
          for (int b = 0; b < 3; ++b) ak += out.A[b][Z] * out.k[b][be];
          expect += out.J[a][X * ns + Z] * ak;
        }
        worst = std::max(worst, std::abs(Jat(a, 4 + X, be + 1) - expect));
      }
  }
  out.cross_residual = worst;

  if (ghat) {
    const auto& g = *ghat;
    auto gat = [&](int M, int Nn) { return g[M * N + Nn]; };
    double mworst = std::abs(gat(0, 0) + 1.0 / out.z0);
    // M_{al,be} and u^be_X from the reads
    double M[3][3];
    for (int al = 0; al < 3; ++al)
      for (int be = 0; be < 3; ++be) {
        double s = 0.0;
        for (int a = 0; a < 3; ++a) s += out.m[a][al] * out.m[a][be];
        M[al][be] = s;
        mworst = std::max(mworst,
                          std::abs(gat(al + 1, be + 1) + out.z0 * s));
      }
    std::vector<double> u(static_cast<size_t>(3) * ns, 0.0);
    for (int be = 0; be < 3; ++be)
      for (int X = 0; X < ns; ++X) {
        double s = 0.0;
        for (int a = 0; a < 3; ++a) s += out.A[a][X] * out.k[a][be];
        u[be * ns + X] = s;
      }
    for (int al = 0; al < 3; ++al)
      for (int X = 0; X < ns; ++X) {
        double expect = 0.0;
        for (int be = 0; be < 3; ++be) expect += M[al][be] * u[be * ns + X];
        mworst = std::max(mworst,
                          std::abs(gat(al + 1, 4 + X) - out.z0 * expect));
      }
    out.h.assign(static_cast<size_t>(ns) * ns, 0.0);
    for (int X = 0; X < ns; ++X)
      for (int Y = 0; Y < ns; ++Y) {
        double s = gat(4 + X, 4 + Y) / out.z0;
        for (int al = 0; al < 3; ++al)
          for (int be = 0; be < 3; ++be)
            s += M[al][be] * u[al * ns + X] * u[be * ns + Y];
        out.h[X * ns + Y] = s;
      }
    // z0-components of the metric against z^alpha and q must vanish
    for (int Mi = 1; Mi < N; ++Mi)
      mworst = std::max(mworst, std::abs(gat(0, Mi)));
    out.metric_residual = mworst;
  }

  // counter-rotate the triplet reads into the reference-section frame
  {
    JetVec zp, zr;
    for (int a = 0; a < 3; ++a) {
      zp.emplace_back(phat[1 + a], 3, 0);
      zr.emplace_back(z_ref[a], 3, 0);
    }
    auto Op = frame_rotation_of_angles(zp);
    auto Or = frame_rotation_of_angles(zr);
    double Rrel[3][3];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        double s = 0.0;
        for (int c = 0; c < 3; ++c) s += Op[a][c].value() * Or[b][c].value();
        Rrel[a][b] = s;
      }
    std::array<std::vector<double>, 3> Jr = out.J, Ar = out.A;
    for (int a = 0; a < 3; ++a) {
      std::fill(out.J[a].begin(), out.J[a].end(), 0.0);
      std::fill(out.A[a].begin(), out.A[a].end(), 0.0);
      for (int b = 0; b < 3; ++b) {
        for (int c = 0; c < ns * ns; ++c) out.J[a][c] += Rrel[b][a] * Jr[b][c];
        for (int X = 0; X < ns; ++X) out.A[a][X] += Rrel[b][a] * Ar[b][X];
      }
    }
  }
  return out;
}

GaugeResult choose_su2_gauge(const std::array<JetVec, 3>& Jjets,
                             const std::array<JetVec, 3>& omega_op,
                             const std::array<JetVec, 3>& Ajets, int n) {
  const Jet& probe = omega_op[0][0];
  const int dim = probe.dim();
  const int order = probe.order();
  SparseJetLsq lsq(n, dim, order);
  for (int a = 0; a < 3; ++a)
    for (int X = 0; X < n; ++X) {
      int row = lsq.add_row();
      for (int Y = 0; Y < n; ++Y)
        lsq.add_term(row, Y, Jjets[a][X * n + Y].truncated(order));
      lsq.set_rhs(row, -(Ajets[a][X].truncated(order) * 0.5) -
                           omega_op[a][X].truncated(order));
    }
  auto sol = lsq.solve();
  return {std::move(sol.x), sol.max_residual};
}

// ---- JSON ---------------------------------------------------------------------

namespace {

struct PolyFn {
  int dim = 0;
  std::vector<std::pair<double, std::vector<int>>> terms;
  Jet eval(const JetVec& q) const {
    Jet s(0.0, q[0].dim(), q[0].order());
    for (const auto& [c, pw] : terms) {
      Jet m(c, q[0].dim(), q[0].order());
      for (int i = 0; i < dim; ++i)
        for (int k = 0; k < pw[i]; ++k) m = m * q[i];
      s += m;
    }
    return s;
  }
};

PolyFn parse_poly(const nlohmann::json& j, int dim) {
  PolyFn p;
  p.dim = dim;
  for (const auto& term : j) {
    double c = term.at("c").get<double>();
    std::vector<int> pw = term.at("p").get<std::vector<int>>();
    if ((int)pw.size() != dim)
      throw std::runtime_error("liftdata: power list length != dim");
    p.terms.emplace_back(c, std::move(pw));
  }
  return p;
}

}  // namespace

LiftDataFile liftdata_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("liftdata: invalid JSON: ") + e.what());
  }
  if (!j.contains("schema") || j["schema"].get<int>() != 1)
    throw std::runtime_error("liftdata: missing or unsupported schema");
  LiftDataFile out;
  LiftData& L = out.data;
  L.n_h = j.at("n_h").get<int>();
  if (L.n_h < 1 || L.n_h > 3)
    throw std::runtime_error("liftdata: n_h out of range [1,3]");
  const int n = L.small_dim();
  // J
  const auto& Jj = j.at("J");
  if (Jj.is_string()) {
    if (Jj.get<std::string>() != "standard-constant")
      throw std::runtime_error("liftdata: unknown J catalog-ref");
    L.J = standard_structure(n);
  } else {
    auto polys = std::make_shared<std::vector<PolyFn>>();
    const auto& comps = Jj.at("poly");
    if ((int)comps.size() != 3 * n * n)
      throw std::runtime_error("liftdata: J poly table must have 3*dim^2 entries");
    for (const auto& c : comps) polys->push_back(parse_poly(c, n));
    L.J.J.dim = n;
    L.J.J.nup = L.J.J.ndown = 1;
    L.J.J.extra = 3;
    L.J.J.eval = [polys](const JetVec& q) {
      JetVec v;
      v.reserve(polys->size());
      for (const auto& p : *polys) v.push_back(p.eval(q));
      return v;
    };
  }
  // A
  {
    auto polys = std::make_shared<std::vector<PolyFn>>();
    const auto& comps = j.at("A");
    if ((int)comps.size() != 3 * n)
      throw std::runtime_error("liftdata: A table must have 3*dim entries");
    for (const auto& c : comps) polys->push_back(parse_poly(c, n));
    L.A.dim = n;
    L.A.ndown = 1;
    L.A.extra = 3;
    L.A.eval = [polys](const JetVec& q) {
      JetVec v;
      v.reserve(polys->size());
      for (const auto& p : *polys) v.push_back(p.eval(q));
      return v;
    };
  }
  // h (optional)
  if (j.contains("h") && !j["h"].is_null()) {
    auto polys = std::make_shared<std::vector<PolyFn>>();
    const auto& comps = j.at("h");
    if ((int)comps.size() != n * n)
      throw std::runtime_error("liftdata: h table must have dim^2 entries");
    for (const auto& c : comps) polys->push_back(parse_poly(c, n));
    L.h.dim = n;
    L.h.ndown = 2;
    L.h.eval = [polys](const JetVec& q) {
      JetVec v;
      v.reserve(polys->size());
      for (const auto& p : *polys) v.push_back(p.eval(q));
      return v;
    };
    L.has_h = true;
  }
  if (j.at("k_alpha").get<std::string>() != "su2-standard")
    throw std::runtime_error("liftdata: k_alpha must be \"su2-standard\"");
  L.k_alpha = standard_su2_vectors_field();
  if (j.contains("z0_range")) {
    out.z0_lo = j["z0_range"].at(0).get<double>();
    out.z0_hi = j["z0_range"].at(1).get<double>();
    if (!(out.z0_lo <= out.z0_hi) || out.z0_lo * out.z0_hi <= 0.0)
      throw std::runtime_error("liftdata: z0_range must not straddle 0");
  }
  return out;
}

std::string liftdata_schema_hint() {
  return "{\"schema\":1,\"n_h\":1,\"J\":\"standard-constant\",\"A\":[...3*dim "
         "polys...],\"h\":null,\"k_alpha\":\"su2-standard\",\"z0_range\":[0.5,4]}";
}

}  // namespace quatlike
