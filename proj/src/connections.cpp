#include "quatlike/connections.hpp"

#include <cmath>
#include <stdexcept>

#include "quatlike/linalg.hpp"

namespace quatlike {

JetVec covariant_derivative(const JetVec& gamma, const JetVec& T, int n,
                            int nup, int ndown) {
  const Jet& probe = T[0];
  const int order = std::max(0, probe.order() - 1);
  const Jet zero(0.0, probe.dim(), order);
  auto G = [&](int X, int Y, int Z) -> const Jet& {
    return gamma[(static_cast<size_t>(X) * n + Y) * n + Z];
  };
  JetVec out(T.size() * n, zero);
  if (nup == 1 && ndown == 0) {
    for (int X = 0; X < n; ++X)
      for (int Y = 0; Y < n; ++Y) {
        Jet s = T[Y].partial(X);
        for (int W = 0; W < n; ++W) s += G(X, W, Y) * T[W];
        out[X * n + Y] = s;
      }
  } else if (nup == 0 && ndown == 1) {
    for (int X = 0; X < n; ++X)
      for (int Y = 0; Y < n; ++Y) {
        Jet s = T[Y].partial(X);
        for (int W = 0; W < n; ++W) s -= G(X, Y, W) * T[W];
        out[X * n + Y] = s;
      }
  } else if (nup == 1 && ndown == 1) {
    for (int X = 0; X < n; ++X)
      for (int Y = 0; Y < n; ++Y)
        for (int Z = 0; Z < n; ++Z) {
          Jet s = T[Y * n + Z].partial(X);
          for (int W = 0; W < n; ++W) {
            s -= G(X, Y, W) * T[W * n + Z];
            s += G(X, W, Z) * T[Y * n + W];
          }
          out[(X * n + Y) * n + Z] = s;
        }
  } else if (nup == 0 && ndown == 2) {
    for (int X = 0; X < n; ++X)
      for (int Y = 0; Y < n; ++Y)
        for (int Z = 0; Z < n; ++Z) {
          Jet s = T[Y * n + Z].partial(X);
          for (int W = 0; W < n; ++W) {
            s -= G(X, Y, W) * T[W * n + Z];
            s -= G(X, Z, W) * T[Y * n + W];
          }
          out[(X * n + Y) * n + Z] = s;
        }
  } else {
    throw std::invalid_argument("covariant_derivative: unsupported rank");
  }
  return out;
}

double nabla_j_residual(const JetVec& gamma, const std::array<JetVec, 3>& Jjets,
                        const std::array<JetVec, 3>* omega, int n) {
  double worst = 0.0;
  for (int a = 0; a < 3; ++a) {
    JetVec nj = covariant_derivative(gamma, Jjets[a], n, 1, 1);
    for (int X = 0; X < n; ++X)
      for (int Y = 0; Y < n; ++Y)
        for (int Z = 0; Z < n; ++Z) {
          double v = nj[(X * n + Y) * n + Z].value();
          if (omega) {
            for (int b = 0; b < 3; ++b)
              for (int c = 0; c < 3; ++c) {
                double e = kEps3[a][b][c];
                if (e != 0.0)
                  v += 2.0 * e * (*omega)[b][X].value() *
                       Jjets[c][Y * n + Z].value();
              }
          }
          worst = std::max(worst, std::abs(v));
        }
  }
  return worst;
}

namespace {

// shared assembly for the torsionless ∇J systems; extra_rhs (optional) is the
// known ω-dependent term moved to the right-hand side
ConnectionJets solve_nabla_j(const std::array<JetVec, 3>& Jjets,
                             const std::array<JetVec, 3>* omega, int n) {
  const Jet& probe = Jjets[0][0];
  const int dim = probe.dim();
  const int order = std::max(0, probe.order() - 1);
  const int npairs = sym2_count(n);
  SparseJetLsq lsq(npairs * n, dim, order);
  auto col = [&](int X, int Y, int Z) { return sym2_index(n, std::min(X, Y), std::max(X, Y)) * n + Z; };
  for (int a = 0; a < 3; ++a)
    for (int X = 0; X < n; ++X)
      for (int Y = 0; Y < n; ++Y)
        for (int Z = 0; Z < n; ++Z) {
          int row = lsq.add_row();
          for (int W = 0; W < n; ++W) {
            lsq.add_term(row, col(X, W, Z),
                         Jjets[a][Y * n + W].truncated(order));
            lsq.add_term(row, col(X, Y, W),
                         Jjets[a][W * n + Z].truncated(order) * -1.0);
          }
          Jet rhs = -Jjets[a][Y * n + Z].partial(X);
          if (omega)
            for (int b = 0; b < 3; ++b)
              for (int c = 0; c < 3; ++c) {
                double e = kEps3[a][b][c];
                if (e != 0.0)
                  rhs -= 2.0 * e *
                         ((*omega)[b][X].truncated(order) *
                          Jjets[c][Y * n + Z].truncated(order));
              }
          lsq.set_rhs(row, rhs);
        }
  auto sol = lsq.solve();
  ConnectionJets c;
  c.n = n;
  c.solve_residual = sol.max_residual;
  c.pivot_ratio = sol.pivot_ratio;
  c.gamma.assign(static_cast<size_t>(n) * n * n, Jet(0.0, dim, order));
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      for (int Z = 0; Z < n; ++Z)
        c.gamma[(X * n + Y) * n + Z] = sol.x[col(X, Y, Z)];
  if (omega) c.omega = *omega;
  return c;
}

}  // namespace

ConnectionJets obata(const std::array<JetVec, 3>& Jjets, int n) {
  return solve_nabla_j(Jjets, nullptr, n);
}

ConnectionJets oproiu_with_omega(const std::array<JetVec, 3>& Jjets,
                                 const std::array<JetVec, 3>& omega, int n) {
  return solve_nabla_j(Jjets, &omega, n);
}

ConnectionJets oproiu(const std::array<JetVec, 3>& Jjets, int n) {
  OmegaOpResult w = extract_omega_op_jets(Jjets, n);
  return oproiu_with_omega(Jjets, w.omega, n);
}

ConnectionJets xi_transform(const ConnectionJets& c, const JetVec& xi,
                            const std::array<JetVec, 3>& Jjets) {
  const int n = c.n;
  const Jet& probe = c.gamma[0];
  const int dim = probe.dim(), order = probe.order();
  const Jet zero(0.0, dim, order);
  // (J^a ξ)_X = J^a_X{}^Y ξ_Y
  std::array<JetVec, 3> jxi;
  for (int a = 0; a < 3; ++a) {
    jxi[a].assign(n, zero);
    for (int X = 0; X < n; ++X) {
      Jet s = zero;
      for (int Y = 0; Y < n; ++Y)
        s += Jjets[a][X * n + Y].truncated(order) * xi[Y].truncated(order);
      jxi[a][X] = s;
    }
  }
  ConnectionJets out = c;
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      for (int Z = 0; Z < n; ++Z) {
        Jet s = out.gamma[(X * n + Y) * n + Z];
        if (Y == Z) s += xi[X].truncated(order);
        if (X == Z) s += xi[Y].truncated(order);
        for (int a = 0; a < 3; ++a) {
          s -= jxi[a][X] * Jjets[a][Y * n + Z].truncated(order);
          s -= jxi[a][Y] * Jjets[a][X * n + Z].truncated(order);
        }
        out.gamma[(X * n + Y) * n + Z] = s;
      }
  std::array<JetVec, 3> omega;
  for (int a = 0; a < 3; ++a) {
    omega[a].assign(n, zero);
    for (int X = 0; X < n; ++X) {
      Jet s = jxi[a][X];
      if (c.omega) s += (*c.omega)[a][X].truncated(order);
      omega[a][X] = s;
    }
  }
  out.omega = omega;
  return out;
}

JetVec levi_civita(const JetVec& g, int n) {
  const Jet& probe = g[0];
  const int order = std::max(0, probe.order() - 1);
  JetVec ginvfull = jet_invert(g, n);
  JetVec ginv;
  ginv.reserve(ginvfull.size());
  for (const Jet& j : ginvfull) ginv.push_back(j.truncated(order));
  const Jet zero(0.0, probe.dim(), order);
  JetVec gamma(static_cast<size_t>(n) * n * n, zero);
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      for (int Z = 0; Z < n; ++Z) {
        Jet s = zero;
        for (int W = 0; W < n; ++W) {
          Jet bracket = g[Y * n + W].partial(X) + g[X * n + W].partial(Y) -
                        g[X * n + Y].partial(W);
          s += ginv[Z * n + W] * bracket;
        }
        gamma[(X * n + Y) * n + Z] = s * 0.5;
      }
  return gamma;
}

GlConnection gl_connection(const VielbeinJets& vb, const ConnectionJets& c) {
  const int n = vb.n, two_r = vb.two_r();
  const Jet& probe = vb.f[0].re;
  const int dim = probe.dim();
  const int order = std::max(0, probe.order() - 1);
  auto trunc = [&](const CJet& a) {
    return CJet(a.re.truncated(std::min(order, a.re.order())),
                a.im.truncated(std::min(order, a.im.order())));
  };
  const CJet czero = CJet::make(0.0, dim, order);
  // su(2) doublet form ω_{Xj}{}^i = i σ^a_j{}^i ω^a_X
  std::vector<CJet> wsu2(static_cast<size_t>(n) * 4, czero);
  if (c.omega)
    for (int X = 0; X < n; ++X)
      for (int jj = 0; jj < 2; ++jj)
        for (int ii = 0; ii < 2; ++ii) {
          CJet s = czero;
          for (int a = 0; a < 3; ++a) {
            std::complex<double> coef =
                std::complex<double>(0.0, 1.0) * kSigma[a][jj][ii];
            if (coef == std::complex<double>(0.0)) continue;
            s += CJet::make(coef, dim, order) * (*c.omega)[a][X].truncated(order);
          }
          wsu2[(X * 2 + jj) * 2 + ii] = s;
        }

  // D_X f_Y^{iA} without the gl term
  auto dxf = [&](int X, int Y, int i, int A) {
    CJet s = vb.fXiA(Y, i, A).partial(X);
    for (int Z = 0; Z < n; ++Z)
      s += CJet(-c.gamma[(X * n + Y) * n + Z].truncated(order), Jet(0.0, dim, order)) *
           trunc(vb.fXiA(Z, i, A));
    if (c.omega)
      for (int j = 0; j < 2; ++j)
        s += trunc(vb.fXiA(Y, j, A)) * wsu2[(X * 2 + j) * 2 + i];
    return s;
  };

  GlConnection out;
  out.omega.assign(static_cast<size_t>(n) * two_r * two_r, czero);
  // precompute the partial covariant derivative once
  std::vector<CJet> pd(static_cast<size_t>(n) * n * 2 * two_r, czero);
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      for (int i = 0; i < 2; ++i)
        for (int A = 0; A < two_r; ++A)
          pd[((static_cast<size_t>(X) * n + Y) * 2 + i) * two_r + A] =
              dxf(X, Y, i, A);
  auto pdat = [&](int X, int Y, int i, int A) -> const CJet& {
    return pd[((static_cast<size_t>(X) * n + Y) * 2 + i) * two_r + A];
  };
  // ω_{XC}{}^A = -1/2 Σ_{Y,i} f^Y_{iC} D_X f_Y^{iA}
  for (int X = 0; X < n; ++X)
    for (int C = 0; C < two_r; ++C)
      for (int A = 0; A < two_r; ++A) {
        CJet s = czero;
        for (int Y = 0; Y < n; ++Y)
          for (int i = 0; i < 2; ++i)
            s += trunc(vb.finvYiA(Y, i, C)) * pdat(X, Y, i, A);
        out.omega[(static_cast<size_t>(X) * two_r + C) * two_r + A] =
            s * (-0.5);
      }
  // certification: full covariant constancy residual at value level
  double worst = 0.0;
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      for (int i = 0; i < 2; ++i)
        for (int A = 0; A < two_r; ++A) {
          std::complex<double> s = pdat(X, Y, i, A).value();
          for (int B = 0; B < two_r; ++B)
            s += vb.fXiA(Y, i, B).value() *
                 out.omega[(static_cast<size_t>(X) * two_r + B) * two_r + A]
                     .value();
          worst = std::max(worst, std::abs(s));
        }
  out.residual = worst;
  return out;
}

}  // namespace quatlike
