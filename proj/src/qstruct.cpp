#include "quatlike/qstruct.hpp"

#include <cmath>
#include <stdexcept>

#include "quatlike/linalg.hpp"

namespace quatlike {

std::vector<double> standard_structure_values(int n) {
  // 4x4 blocks of J^a_X{}^Y; rows X, cols Y
  static const double m1[4][4] = {
      {0, 1, 0, 0}, {-1, 0, 0, 0}, {0, 0, 0, -1}, {0, 0, 1, 0}};
  static const double m2[4][4] = {
      {0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}};
  static const double m3[4][4] = {
      {0, 0, 0, 1}, {0, 0, -1, 0}, {0, 1, 0, 0}, {-1, 0, 0, 0}};
  const double (*blocks[3])[4] = {m1, m2, m3};
  std::vector<double> out(static_cast<size_t>(3) * n * n, 0.0);
  for (int a = 0; a < 3; ++a)
    for (int m = 0; m < n / 4; ++m)
      for (int mu = 0; mu < 4; ++mu)
        for (int nu = 0; nu < 4; ++nu)
          out[a * n * n + (4 * m + mu) * n + (4 * m + nu)] = blocks[a][mu][nu];
  return out;
}

HypercomplexTriple standard_structure(int n) {
  return {constant_field(n, 1, 1, 3, standard_structure_values(n))};
}

StructureVals eval_structure(const TensorField& J3, std::span<const double> p) {
  JetVec jets = J3.at(p, 0);
  const int n = J3.dim;
  StructureVals s;
  s.n = n;
  for (int a = 0; a < 3; ++a) {
    s.J[a].resize(static_cast<size_t>(n) * n);
    for (int c = 0; c < n * n; ++c) s.J[a][c] = jets[a * n * n + c].value();
  }
  return s;
}

std::array<JetVec, 3> eval_structure_jets(const TensorField& J3, const JetVec& x) {
  JetVec jets = J3.eval(x);
  const int n = J3.dim;
  std::array<JetVec, 3> out;
  for (int a = 0; a < 3; ++a)
    out[a].assign(jets.begin() + a * n * n, jets.begin() + (a + 1) * n * n);
  return out;
}

std::array<JetVec, 3> structure_jets_at(const TensorField& J3,
                                        std::span<const double> p, int order) {
  return eval_structure_jets(
      J3, seed_point(p, std::min(order + J3.order_cost, kMaxJetOrder)));
}

StructureVals structure_values(const std::array<JetVec, 3>& Jjets, int n) {
  StructureVals s;
  s.n = n;
  for (int a = 0; a < 3; ++a) {
    s.J[a].resize(static_cast<size_t>(n) * n);
    for (int c = 0; c < n * n; ++c) s.J[a][c] = Jjets[a][c].value();
  }
  return s;
}

double quaternion_algebra_residual(const StructureVals& s) {
  const int n = s.n;
  double worst = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int X = 0; X < n; ++X)
        for (int Z = 0; Z < n; ++Z) {
          double acc = 0.0;
          for (int W = 0; W < n; ++W)
            acc += s.J[a][X * n + W] * s.J[b][W * n + Z];
          if (a == b && X == Z) acc += 1.0;
          for (int c = 0; c < 3; ++c) {
            double e = kEps3[a][b][c];
            if (e != 0.0) acc -= e * s.J[c][X * n + Z];
          }
          worst = std::max(worst, std::abs(acc));
        }
  return worst;
}

double quaternion_algebra_residual(const HypercomplexTriple& H,
                                   std::span<const double> p) {
  return quaternion_algebra_residual(eval_structure(H.J, p));
}

double hermiticity_residual(std::span<const double> F, const StructureVals& s) {
  const int n = s.n;
  double worst = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int X = 0; X < n; ++X)
      for (int Y = 0; Y < n; ++Y) {
        double acc = -F[X * n + Y];
        for (int W = 0; W < n; ++W) {
          double jxw = s.J[a][X * n + W];
          if (jxw == 0.0) continue;
          for (int V = 0; V < n; ++V)
            acc += jxw * s.J[a][Y * n + V] * F[W * n + V];
        }
        worst = std::max(worst, std::abs(acc));
      }
  return worst;
}

double hermiticity_residual(const TensorField& F, const HypercomplexTriple& H,
                            std::span<const double> p) {
  JetVec fj = F.at(p, 0);
  std::vector<double> fv(fj.size());
  for (size_t i = 0; i < fj.size(); ++i) fv[i] = fj[i].value();
  return hermiticity_residual(fv, eval_structure(H.J, p));
}

std::vector<double> nijenhuis(const TensorField& J, std::span<const double> p) {
  const int n = J.dim;
  JetVec jets = J.at(p, 1);
  std::vector<double> out(static_cast<size_t>(n) * n * n, 0.0);
  auto Jv = [&](int X, int Y) { return jets[X * n + Y].value(); };
  auto dJ = [&](int W, int X, int Y) { return jets[X * n + Y].d1(W); };
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      for (int Z = 0; Z < n; ++Z) {
        double acc = 0.0;
        for (int W = 0; W < n; ++W)
          acc += Jv(X, W) * dJ(W, Y, Z) - Jv(Y, W) * dJ(W, X, Z) +
                 dJ(Y, X, W) * Jv(W, Z) - dJ(X, Y, W) * Jv(W, Z);
        out[(X * n + Y) * n + Z] = acc;
      }
  return out;
}

JetVec nijenhuis_diag_jets(const std::array<JetVec, 3>& Jjets, int n) {
  const Jet& probe = Jjets[0][0];
  int omin = probe.order();
  for (const JetVec& jv : Jjets)
    for (const Jet& j : jv) omin = std::min(omin, j.order());
  const int oout = std::max(0, omin - 1);
  JetVec out(static_cast<size_t>(n) * n * n, Jet(0.0, probe.dim(), oout));
  std::array<std::vector<Jet>, 3> dJ;
  for (int a = 0; a < 3; ++a) {
    dJ[a].reserve(static_cast<size_t>(n) * n * n);
    for (int c = 0; c < n * n; ++c)
      for (int W = 0; W < n; ++W) dJ[a].push_back(Jjets[a][c].partial(W));
  }
  auto dJat = [&](int a, int W, int X, int Y) -> const Jet& {
    return dJ[a][(static_cast<size_t>(X) * n + Y) * n + W];
  };
  for (int a = 0; a < 3; ++a)
    for (int X = 0; X < n; ++X)
      for (int Y = X + 1; Y < n; ++Y)
        for (int Z = 0; Z < n; ++Z) {
          Jet acc(0.0, probe.dim(), oout);
          for (int W = 0; W < n; ++W) {
            acc += Jjets[a][X * n + W] * dJat(a, W, Y, Z);
            acc -= Jjets[a][Y * n + W] * dJat(a, W, X, Z);
            acc += dJat(a, Y, X, W) * Jjets[a][W * n + Z];
            acc -= dJat(a, X, Y, W) * Jjets[a][W * n + Z];
          }
          acc *= kNijenhuisNormalization;
          out[(X * n + Y) * n + Z] += acc;
          out[(Y * n + X) * n + Z] -= acc;
        }
  return out;
}

std::vector<double> nijenhuis_diag(const HypercomplexTriple& H,
                                   std::span<const double> p) {
  auto Jjets = structure_jets_at(H.J, p, 1);
  JetVec nj = nijenhuis_diag_jets(Jjets, H.dim());
  std::vector<double> out(nj.size());
  for (size_t i = 0; i < nj.size(); ++i) out[i] = nj[i].value();
  return out;
}

OmegaOpResult extract_omega_op_jets(const std::array<JetVec, 3>& Jjets, int n) {
  const Jet& probe = Jjets[0][0];
  JetVec N = nijenhuis_diag_jets(Jjets, n);
  const int dim = probe.dim();
  const int order = std::max(0, probe.order() - 1);
  SparseJetLsq lsq(3 * n, dim, order);
  for (int X = 0; X < n; ++X)
    for (int Y = X + 1; Y < n; ++Y)
      for (int Z = 0; Z < n; ++Z) {
        int row = lsq.add_row();
        for (int a = 0; a < 3; ++a) {
          lsq.add_term(row, a * n + Y,
                       Jjets[a][X * n + Z].truncated(order) * -0.5);
          lsq.add_term(row, a * n + X,
                       Jjets[a][Y * n + Z].truncated(order) * 0.5);
        }
        lsq.set_rhs(row, N[(X * n + Y) * n + Z]);
      }
  auto sol = lsq.solve();
  OmegaOpResult r;
  r.residual = sol.max_residual;
  for (int a = 0; a < 3; ++a)
    r.omega[a].assign(sol.x.begin() + a * n, sol.x.begin() + (a + 1) * n);
  return r;
}

OmegaOpResult extract_omega_op(const HypercomplexTriple& H,
                               std::span<const double> p) {
  auto Jjets = structure_jets_at(H.J, p, 1);
  return extract_omega_op_jets(Jjets, H.dim());
}

// ---- vielbeins ---------------------------------------------------------------

std::complex<double> flat_frame_entry(int mu, int i, int alpha) {
  using namespace std::complex_literals;
  static const std::complex<double> A[4][2][2] = {
      {{1.0 + 0i, 0}, {0, 1.0 + 0i}},
      {{0, -1i}, {-1i, 0}},
      {{0, 1.0 + 0i}, {-1.0 + 0i, 0}},
      {{-1i, 0}, {0, 1i}}};
  return A[mu][i][alpha] / std::sqrt(2.0);
}

std::vector<double> rho_matrix(int two_r) {
  std::vector<double> rho(static_cast<size_t>(two_r) * two_r, 0.0);
  for (int m = 0; m < two_r / 2; ++m) {
    rho[(2 * m) * two_r + (2 * m + 1)] = 1.0;
    rho[(2 * m + 1) * two_r + (2 * m)] = -1.0;
  }
  return rho;
}

VielbeinJets flat_vielbein(int n, int dim, int order) {
  VielbeinJets vb;
  vb.n = n;
  const int two_r = n / 2;
  vb.f.assign(static_cast<size_t>(n) * 2 * two_r, CJet::make(0.0, dim, order));
  vb.finv = vb.f;
  for (int m = 0; m < n / 4; ++m)
    for (int mu = 0; mu < 4; ++mu)
      for (int i = 0; i < 2; ++i)
        for (int alpha = 0; alpha < 2; ++alpha) {
          std::complex<double> e = flat_frame_entry(mu, i, alpha);
          int X = 4 * m + mu, A = 2 * m + alpha;
          vb.f[(X * 2 + i) * two_r + A] = CJet::make(e, dim, order);
          vb.finv[(X * 2 + i) * two_r + A] = CJet::make(std::conj(e), dim, order);
        }
  return vb;
}

VielbeinJets frame_from_structure(const std::array<JetVec, 3>& Jjets, int n,
                                  const JetVec* g) {
  const Jet& probe = Jjets[0][0];
  const int dim = probe.dim(), order = probe.order();
  const Jet zero(0.0, dim, order);
  const int r = n / 4;
  JetVec B(static_cast<size_t>(n) * n, zero);  // columns are frame vectors
  int seed = 0, retries = 0;
  for (int m = 0; m < r; ++m) {
    JetVec v(n, zero);
    bool ok = false;
    while (!ok) {
      if (retries > n)
        throw std::runtime_error("frame_from_structure: no usable seed found");
      if (seed >= n) seed = 0;
      for (int X = 0; X < n; ++X) v[X] = zero;
      v[seed] = Jet(1.0, dim, order);
      ++seed;
      if (m > 0) {
        const int k = 4 * m;
        JetVec G(static_cast<size_t>(k) * k, zero), rhs(k, zero);
        for (int c1 = 0; c1 < k; ++c1) {
          for (int c2 = 0; c2 < k; ++c2) {
            Jet s = zero;
            if (g) {
              for (int X = 0; X < n; ++X)
                for (int Y = 0; Y < n; ++Y)
                  s += B[X * n + c1] * (*g)[X * n + Y] * B[Y * n + c2];
            } else {
              for (int X = 0; X < n; ++X) s += B[X * n + c1] * B[X * n + c2];
            }
            G[c1 * k + c2] = s;
          }
          Jet s = zero;
          if (g) {
            for (int X = 0; X < n; ++X)
              for (int Y = 0; Y < n; ++Y)
                s += B[X * n + c1] * (*g)[X * n + Y] * v[Y];
          } else {
            for (int X = 0; X < n; ++X) s += B[X * n + c1] * v[X];
          }
          rhs[c1] = s;
        }
        JetVec coef;
        try {
          coef = jet_solve_dense(G, rhs, k, 1);
        } catch (const RankDeficientError&) {
          ++retries;
          continue;
        }
        for (int c = 0; c < k; ++c)
          for (int X = 0; X < n; ++X) v[X] -= coef[c] * B[X * n + c];
      }
      Jet nrm2 = zero;
      if (g) {
        for (int X = 0; X < n; ++X)
          for (int Y = 0; Y < n; ++Y) nrm2 += v[X] * (*g)[X * n + Y] * v[Y];
        if (nrm2.value() < 0.0) nrm2 = -nrm2;
      } else {
        for (int X = 0; X < n; ++X) nrm2 += v[X] * v[X];
      }
      if (nrm2.value() < 1e-8) {
        ++retries;
        continue;
      }
      Jet inv = 1.0 / sqrt(nrm2);
      for (int X = 0; X < n; ++X) v[X] = v[X] * inv;
      ok = true;
    }
    for (int X = 0; X < n; ++X) B[X * n + (4 * m)] = v[X];
    for (int a = 0; a < 3; ++a)
      for (int Y = 0; Y < n; ++Y) {
        Jet s = zero;
        for (int X = 0; X < n; ++X) s += v[X] * Jjets[a][X * n + Y];
        B[Y * n + (4 * m + 1 + a)] = s;
      }
  }
  JetVec Binv = jet_invert(B, n);

  VielbeinJets vb;
  vb.n = n;
  const int two_r = n / 2;
  vb.f.assign(static_cast<size_t>(n) * 2 * two_r, CJet::make(0.0, dim, order));
  vb.finv = vb.f;
  for (int X = 0; X < n; ++X)
    for (int i = 0; i < 2; ++i)
      for (int m = 0; m < r; ++m)
        for (int alpha = 0; alpha < 2; ++alpha) {
          CJet sf = CJet::make(0.0, dim, order);
          CJet sg = CJet::make(0.0, dim, order);
          for (int mu = 0; mu < 4; ++mu) {
            std::complex<double> e = flat_frame_entry(mu, i, alpha);
            sf += CJet(Binv[(4 * m + mu) * n + X] * e.real(),
                       Binv[(4 * m + mu) * n + X] * e.imag());
            sg += CJet(B[X * n + (4 * m + mu)] * e.real(),
                       B[X * n + (4 * m + mu)] * -e.imag());
          }
          vb.f[(X * 2 + i) * two_r + (2 * m + alpha)] = sf;
          vb.finv[(X * 2 + i) * two_r + (2 * m + alpha)] = sg;
        }
  return vb;
}

std::array<JetVec, 3> j_from_vielbein(const VielbeinJets& vb,
                                      double* imag_residual) {
  const int n = vb.n, two_r = vb.two_r();
  const Jet& probe = vb.f[0].re;
  const Jet zero(0.0, probe.dim(), probe.order());
  std::array<JetVec, 3> J;
  double imag_worst = 0.0;
  for (int a = 0; a < 3; ++a) {
    J[a].assign(static_cast<size_t>(n) * n, zero);
    for (int X = 0; X < n; ++X)
      for (int Y = 0; Y < n; ++Y) {
        CJet s = CJet::make(0.0, probe.dim(), probe.order());
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            std::complex<double> sig = kSigma[a][i][j];
            if (sig == std::complex<double>(0.0)) continue;
            for (int A = 0; A < two_r; ++A)
              s += (vb.fXiA(X, i, A) * vb.finvYiA(Y, j, A)) * sig;
          }
        CJet val = s * std::complex<double>(0.0, -1.0);
        J[a][X * n + Y] = val.re;
        imag_worst = std::max(imag_worst, std::abs(val.im.value()));
      }
  }
  if (imag_residual) *imag_residual = imag_worst;
  return J;
}

std::vector<CJet> l_tensor(const VielbeinJets& vb) {
  const int n = vb.n, two_r = vb.two_r();
  const Jet& probe = vb.f[0].re;
  std::vector<CJet> L(static_cast<size_t>(n) * n * two_r * two_r,
                      CJet::make(0.0, probe.dim(), probe.order()));
  for (int W = 0; W < n; ++W)
    for (int Z = 0; Z < n; ++Z)
      for (int A = 0; A < two_r; ++A)
        for (int Bb = 0; Bb < two_r; ++Bb) {
          CJet s = CJet::make(0.0, probe.dim(), probe.order());
          for (int i = 0; i < 2; ++i)
            s += vb.finvYiA(Z, i, A) * vb.fXiA(W, i, Bb);
          L[((static_cast<size_t>(W) * n + Z) * two_r + A) * two_r + Bb] = s;
        }
  return L;
}

double vielbein_invariants_residual(const VielbeinJets& vb) {
  const int n = vb.n, two_r = vb.two_r();
  double worst = 0.0;
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y) {
      std::complex<double> s = 0.0;
      for (int i = 0; i < 2; ++i)
        for (int A = 0; A < two_r; ++A)
          s += vb.fXiA(X, i, A).value() * vb.finvYiA(Y, i, A).value();
      if (X == Y) s -= 1.0;
      worst = std::max(worst, std::abs(s));
    }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int A = 0; A < two_r; ++A)
        for (int Bb = 0; Bb < two_r; ++Bb) {
          std::complex<double> s = 0.0;
          for (int X = 0; X < n; ++X)
            s += vb.fXiA(X, i, A).value() * vb.finvYiA(X, j, Bb).value();
          if (i == j && A == Bb) s -= 1.0;
          worst = std::max(worst, std::abs(s));
        }
  std::vector<double> rho = rho_matrix(two_r);
  const double eps2[2][2] = {{0, 1}, {-1, 0}};
  for (int X = 0; X < n; ++X)
    for (int i = 0; i < 2; ++i)
      for (int A = 0; A < two_r; ++A) {
        std::complex<double> lhs = std::conj(vb.finvYiA(X, i, A).value());
        std::complex<double> rhs = 0.0;
        for (int j = 0; j < 2; ++j)
          for (int Bb = 0; Bb < two_r; ++Bb)
            rhs += eps2[i][j] * rho[A * two_r + Bb] *
                   vb.finvYiA(X, j, Bb).value();
        worst = std::max(worst, std::abs(lhs - rhs));
        lhs = std::conj(vb.fXiA(X, i, A).value());
        rhs = 0.0;
        for (int j = 0; j < 2; ++j)
          for (int Bb = 0; Bb < two_r; ++Bb)
            rhs += eps2[i][j] * rho[A * two_r + Bb] * vb.fXiA(X, j, Bb).value();
        worst = std::max(worst, std::abs(lhs - rhs));
      }
  return worst;
}

}  // namespace quatlike
