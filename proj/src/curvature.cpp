#include "quatlike/curvature.hpp"

#include <cmath>

namespace quatlike {

std::vector<double> riemann(const JetVec& gamma, int n) {
  std::vector<double> R(static_cast<size_t>(n) * n * n * n, 0.0);
  auto G = [&](int X, int Y, int Z) -> const Jet& {
    return gamma[(static_cast<size_t>(X) * n + Y) * n + Z];
  };
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y) {
      if (Y == X) continue;
      for (int Z = 0; Z < n; ++Z)
        for (int W = 0; W < n; ++W) {
          double acc = G(Y, Z, W).d1(X) - G(X, Z, W).d1(Y);
          for (int V = 0; V < n; ++V)
            acc += G(X, V, W).value() * G(Y, Z, V).value() -
                   G(Y, V, W).value() * G(X, Z, V).value();
          R[((static_cast<size_t>(X) * n + Y) * n + Z) * n + W] = acc;
        }
    }
  return R;
}

double first_bianchi_residual(std::span<const double> R, int n) {
  auto at = [&](int X, int Y, int Z, int W) {
    return R[((static_cast<size_t>(X) * n + Y) * n + Z) * n + W];
  };
  double worst = 0.0;
  for (int X = 0; X < n; ++X)
    for (int Y = X + 1; Y < n; ++Y)
      for (int Z = Y + 1; Z < n; ++Z)
        for (int W = 0; W < n; ++W)
          worst = std::max(
              worst, std::abs(at(X, Y, Z, W) + at(Y, Z, X, W) + at(Z, X, Y, W)));
  return worst;
}

std::vector<double> ricci_from_riemann(std::span<const double> R, int n) {
  std::vector<double> ric(static_cast<size_t>(n) * n, 0.0);
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y) {
      double acc = 0.0;
      for (int Z = 0; Z < n; ++Z)
        acc += R[((static_cast<size_t>(Z) * n + X) * n + Y) * n + Z];
      ric[X * n + Y] = acc;
    }
  return ric;
}

std::array<std::vector<double>, 3> su2_curvature(
    const std::array<JetVec, 3>& omega, int n) {
  std::array<std::vector<double>, 3> out;
  for (int a = 0; a < 3; ++a)
    out[a].assign(static_cast<size_t>(n) * n, 0.0);
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y) {
      Triplet<double> wx, wy, dxy, dyx;
      for (int a = 0; a < 3; ++a) {
        wx[a] = omega[a][X].value();
        wy[a] = omega[a][Y].value();
        dxy[a] = omega[a][Y].d1(X);
        dyx[a] = omega[a][X].d1(Y);
      }
      Triplet<double> cxy = cross(wx, wy);
      for (int a = 0; a < 3; ++a)
        out[a][X * n + Y] = dxy[a] - dyx[a] + kSu2FieldStrength * cxy[a];
    }
  return out;
}

std::vector<std::complex<double>> gl_curvature(const std::vector<CJet>& omega_gl,
                                               int n, int two_r) {
  std::vector<std::complex<double>> F(
      static_cast<size_t>(n) * n * two_r * two_r, 0.0);
  auto w = [&](int X, int B, int A) -> const CJet& {
    return omega_gl[(static_cast<size_t>(X) * two_r + B) * two_r + A];
  };
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      for (int B = 0; B < two_r; ++B)
        for (int A = 0; A < two_r; ++A) {
          std::complex<double> acc(w(Y, B, A).re.d1(X) - w(X, B, A).re.d1(Y),
                                   w(Y, B, A).im.d1(X) - w(X, B, A).im.d1(Y));
          for (int C = 0; C < two_r; ++C)
            acc += w(X, C, A).value() * w(Y, B, C).value() -
                   w(Y, C, A).value() * w(X, B, C).value();
          F[(static_cast<size_t>(X) * n + Y) * two_r * two_r + B * two_r + A] =
              acc;
        }
  return F;
}

std::vector<double> r_curvature(std::span<const std::complex<double>> rgl,
                                int n, int two_r, double* imag_residual) {
  std::vector<double> out(static_cast<size_t>(n) * n, 0.0);
  double imag_worst = 0.0;
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y) {
      std::complex<double> tr = 0.0;
      for (int A = 0; A < two_r; ++A)
        tr += rgl[(static_cast<size_t>(X) * n + Y) * two_r * two_r +
                  A * two_r + A];
      out[X * n + Y] = tr.real();
      imag_worst = std::max(imag_worst, std::abs(tr.imag()));
    }
  if (imag_residual) *imag_residual = imag_worst;
  return out;
}

double curvature_relation_residual(
    std::span<const double> R, const std::array<std::vector<double>, 3>* r_su2,
    std::span<const std::complex<double>> r_gl, const VielbeinJets& vb,
    const StructureVals& s) {
  const int n = s.n, two_r = vb.two_r();
  double worst = 0.0;
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      for (int W = 0; W < n; ++W)
        for (int Z = 0; Z < n; ++Z) {
          std::complex<double> acc =
              R[((static_cast<size_t>(X) * n + Y) * n + W) * n + Z];
          if (r_su2)
            for (int a = 0; a < 3; ++a)
              acc += s.J[a][W * n + Z] * (*r_su2)[a][X * n + Y];
          for (int A = 0; A < two_r; ++A)
            for (int B = 0; B < two_r; ++B) {
              // L_W{}^Z{}_A{}^B = f^Z_{iA} f_W^{iB}
              std::complex<double> L = 0.0;
              for (int i = 0; i < 2; ++i)
                L += vb.finvYiA(Z, i, A).value() * vb.fXiA(W, i, B).value();
              acc -= L * r_gl[(static_cast<size_t>(X) * n + Y) * two_r * two_r +
                              B * two_r + A];
            }
          worst = std::max(worst, std::abs(acc));
        }
  return worst;
}

namespace {

// frame conversion R̂_{iA jB kC}{}^{lD} of R_{XYZ}{}^W, staged contractions
std::vector<std::complex<double>> frame_curvature(std::span<const double> R,
                                                  const VielbeinJets& vb) {
  const int n = vb.n, two_r = vb.two_r();
  const int fr = 2 * two_r;  // combined (i,A) index
  auto fidx = [&](int i, int A) { return i * two_r + A; };
  // stage 1: T1[p][Y][Z][W] = Σ_X finv(X,p) R_{XYZ}{}^W
  std::vector<std::complex<double>> T1(static_cast<size_t>(fr) * n * n * n, 0.0);
  for (int i = 0; i < 2; ++i)
    for (int A = 0; A < two_r; ++A) {
      int p = fidx(i, A);
      for (int X = 0; X < n; ++X) {
        std::complex<double> fx = vb.finvYiA(X, i, A).value();
        if (fx == std::complex<double>(0.0)) continue;
        for (int c = 0; c < n * n * n; ++c)
          T1[static_cast<size_t>(p) * n * n * n + c] +=
              fx * R[static_cast<size_t>(X) * n * n * n + c];
      }
    }
  // stage 2: T2[p][q][Z][W] = Σ_Y finv(Y,q) T1[p][Y][Z][W]
  std::vector<std::complex<double>> T2(
      static_cast<size_t>(fr) * fr * n * n, 0.0);
  for (int p = 0; p < fr; ++p)
    for (int j = 0; j < 2; ++j)
      for (int B = 0; B < two_r; ++B) {
        int q = fidx(j, B);
        for (int Y = 0; Y < n; ++Y) {
          std::complex<double> fy = vb.finvYiA(Y, j, B).value();
          if (fy == std::complex<double>(0.0)) continue;
          for (int c = 0; c < n * n; ++c)
            T2[(static_cast<size_t>(p) * fr + q) * n * n + c] +=
                fy * T1[(static_cast<size_t>(p) * n + Y) * n * n + c];
        }
      }
  // stage 3+4: out[p][q][s][t] = Σ_{Z,W} finv(Z,s) f(W,t) T2[p][q][Z][W]
  std::vector<std::complex<double>> out(
      static_cast<size_t>(fr) * fr * fr * fr, 0.0);
  for (int p = 0; p < fr; ++p)
    for (int q = 0; q < fr; ++q) {
      std::vector<std::complex<double>> T3(static_cast<size_t>(fr) * n, 0.0);
      for (int k = 0; k < 2; ++k)
        for (int C = 0; C < two_r; ++C) {
          int ss = fidx(k, C);
          for (int Z = 0; Z < n; ++Z) {
            std::complex<double> fz = vb.finvYiA(Z, k, C).value();
            if (fz == std::complex<double>(0.0)) continue;
            for (int W = 0; W < n; ++W)
              T3[static_cast<size_t>(ss) * n + W] +=
                  fz * T2[(static_cast<size_t>(p) * fr + q) * n * n + Z * n + W];
          }
        }
      for (int ss = 0; ss < fr; ++ss)
        for (int l = 0; l < 2; ++l)
          for (int D = 0; D < two_r; ++D) {
            std::complex<double> acc = 0.0;
            for (int W = 0; W < n; ++W)
              acc += vb.fXiA(W, l, D).value() * T3[static_cast<size_t>(ss) * n + W];
            out[((static_cast<size_t>(p) * fr + q) * fr + ss) * fr +
                fidx(l, D)] = acc;
          }
    }
  return out;
}

}  // namespace

WTensor extract_w(std::span<const double> R, const VielbeinJets& vb) {
  const int two_r = vb.two_r();
  const int fr = 2 * two_r;
  auto Rhat = frame_curvature(R, vb);
  auto rh = [&](int i, int A, int j, int B, int k, int C, int l, int D) {
    return Rhat[((static_cast<size_t>(i * two_r + A) * fr + j * two_r + B) *
                     fr +
                 k * two_r + C) *
                    fr +
                l * two_r + D];
  };
  const double eps_up[2][2] = {{0, 1}, {-1, 0}};
  WTensor wt;
  wt.two_r = two_r;
  auto widx = [&](int A, int B, int C, int D) {
    return ((static_cast<size_t>(A) * two_r + B) * two_r + C) * two_r + D;
  };
  wt.w.assign(static_cast<size_t>(two_r) * two_r * two_r * two_r, 0.0);
  for (int A = 0; A < two_r; ++A)
    for (int B = 0; B < two_r; ++B)
      for (int C = 0; C < two_r; ++C)
        for (int D = 0; D < two_r; ++D) {
          std::complex<double> acc = 0.0;
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
              if (eps_up[i][j] == 0.0) continue;
              for (int k = 0; k < 2; ++k)
                acc += eps_up[i][j] * rh(i, A, j, B, k, C, k, D);
            }
          wt.w[widx(A, B, C, D)] = -0.5 * acc;
        }
  // pattern residual: R̂ + 1/2 ε_{ij} δ_k^l W = 0
  const double eps_dn[2][2] = {{0, 1}, {-1, 0}};
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int A = 0; A < two_r; ++A)
      for (int j = 0; j < 2; ++j)
        for (int B = 0; B < two_r; ++B)
          for (int k = 0; k < 2; ++k)
            for (int C = 0; C < two_r; ++C)
              for (int l = 0; l < 2; ++l)
                for (int D = 0; D < two_r; ++D) {
                  std::complex<double> acc = rh(i, A, j, B, k, C, l, D);
                  if (k == l)
                    acc += 0.5 * eps_dn[i][j] * wt.w[widx(A, B, C, D)];
                  worst = std::max(worst, std::abs(acc));
                }
  wt.pattern_residual = worst;
  // symmetry in (A,B,C)
  double sym_worst = 0.0;
  auto wat = [&](int A, int B, int C, int D) { return wt.w[widx(A, B, C, D)]; };
  for (int A = 0; A < two_r; ++A)
    for (int B = 0; B < two_r; ++B)
      for (int C = 0; C < two_r; ++C)
        for (int D = 0; D < two_r; ++D) {
          std::complex<double> sym =
              (wat(A, B, C, D) + wat(A, C, B, D) + wat(B, A, C, D) +
               wat(B, C, A, D) + wat(C, A, B, D) + wat(C, B, A, D)) /
              6.0;
          sym_worst = std::max(sym_worst, std::abs(wat(A, B, C, D) - sym));
        }
  wt.sym_residual = sym_worst;
  // trace split on the symmetrized tensor: W_sym = 𝒲 + δ-distribution of t
  std::vector<std::complex<double>> wsym(wt.w.size());
  for (int A = 0; A < two_r; ++A)
    for (int B = 0; B < two_r; ++B)
      for (int C = 0; C < two_r; ++C)
        for (int D = 0; D < two_r; ++D)
          wsym[widx(A, B, C, D)] =
              (wat(A, B, C, D) + wat(A, C, B, D) + wat(B, A, C, D) +
               wat(B, C, A, D) + wat(C, A, B, D) + wat(C, B, A, D)) /
              6.0;
  wt.trace.assign(static_cast<size_t>(two_r) * two_r, 0.0);
  for (int A = 0; A < two_r; ++A)
    for (int B = 0; B < two_r; ++B) {
      std::complex<double> tr = 0.0;
      for (int C = 0; C < two_r; ++C) tr += wsym[widx(A, B, C, C)];
      wt.trace[A * two_r + B] = tr / static_cast<double>(two_r + 2);
    }
  wt.traceless = wsym;
  for (int A = 0; A < two_r; ++A)
    for (int B = 0; B < two_r; ++B)
      for (int C = 0; C < two_r; ++C)
        for (int D = 0; D < two_r; ++D)
          wt.traceless[widx(A, B, C, D)] -=
              (D == A ? wt.trace[B * two_r + C] : 0.0) +
              (D == B ? wt.trace[A * two_r + C] : 0.0) +
              (D == C ? wt.trace[A * two_r + B] : 0.0);
  return wt;
}

namespace {

// map a frame-index tensor S_{ABC}{}^D back to coordinates through the
// vielbein pattern -1/2 f ε f f finv S
std::vector<double> pattern_to_coordinates(
    const std::vector<std::complex<double>>& S, const VielbeinJets& vb,
    double* imag_residual) {
  const int n = vb.n, two_r = vb.two_r();
  const double eps_dn[2][2] = {{0, 1}, {-1, 0}};
  std::vector<double> R(static_cast<size_t>(n) * n * n * n, 0.0);
  double imag_worst = 0.0;
  auto sidx = [&](int A, int B, int C, int D) {
    return ((static_cast<size_t>(A) * two_r + B) * two_r + C) * two_r + D;
  };
  // stage: U[X][Y][C][D] = Σ_{ijAB} f_X^{iA} ε_{ij} f_Y^{jB} S_{ABC}{}^D
  std::vector<std::complex<double>> U(
      static_cast<size_t>(n) * n * two_r * two_r, 0.0);
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      for (int C = 0; C < two_r; ++C)
        for (int D = 0; D < two_r; ++D) {
          std::complex<double> acc = 0.0;
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
              if (eps_dn[i][j] == 0.0) continue;
              for (int A = 0; A < two_r; ++A) {
                std::complex<double> fx = vb.fXiA(X, i, A).value();
                if (fx == std::complex<double>(0.0)) continue;
                for (int B = 0; B < two_r; ++B)
                  acc += fx * eps_dn[i][j] * vb.fXiA(Y, j, B).value() *
                         S[sidx(A, B, C, D)];
              }
            }
          U[(static_cast<size_t>(X) * n + Y) * two_r * two_r + C * two_r + D] =
              acc;
        }
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      for (int Z = 0; Z < n; ++Z)
        for (int W = 0; W < n; ++W) {
          std::complex<double> acc = 0.0;
          for (int k = 0; k < 2; ++k)
            for (int C = 0; C < two_r; ++C) {
              std::complex<double> fz = vb.fXiA(Z, k, C).value();
              if (fz == std::complex<double>(0.0)) continue;
              for (int D = 0; D < two_r; ++D)
                acc += fz * vb.finvYiA(W, k, D).value() *
                       U[(static_cast<size_t>(X) * n + Y) * two_r * two_r +
                         C * two_r + D];
            }
          acc *= -0.5;
          R[((static_cast<size_t>(X) * n + Y) * n + Z) * n + W] = acc.real();
          imag_worst = std::max(imag_worst, std::abs(acc.imag()));
        }
  if (imag_residual) *imag_residual = imag_worst;
  return R;
}

}  // namespace

RicciWeylSplit ricci_weyl_split(std::span<const double> R,
                                const VielbeinJets& vb) {
  const int n = vb.n;
  RicciWeylSplit out;
  WTensor raw = extract_w(R, vb);
  out.r_weyl = pattern_to_coordinates(raw.traceless, vb, nullptr);
  out.r_ric.assign(R.begin(), R.end());
  for (size_t i = 0; i < out.r_ric.size(); ++i) out.r_ric[i] -= out.r_weyl[i];
  // report the W tensor of the Weyl part itself (symmetric and traceless up
  // to the extraction residuals, unlike the raw projection input)
  out.w = extract_w(out.r_weyl, vb);
  auto ric_w = ricci_from_riemann(out.r_weyl, n);
  double worst = 0.0;
  for (double v : ric_w) worst = std::max(worst, std::abs(v));
  out.weyl_ricci_residual = worst;
  return out;
}

EinsteinResidual einstein_check(std::span<const double> g,
                                std::span<const double> R,
                                const std::array<std::vector<double>, 3>* r_su2,
                                const StructureVals& s, double nu, int r) {
  const int n = s.n;
  EinsteinResidual out;
  auto ric = ricci_from_riemann(R, n);
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      out.ric = std::max(out.ric, std::abs(ric[X * n + Y] -
                                           nu * (r + 2) * g[X * n + Y]));
  if (r_su2) {
    for (int a = 0; a < 3; ++a)
      for (int X = 0; X < n; ++X)
        for (int Y = 0; Y < n; ++Y) {
          double jlow = 0.0;
          for (int W = 0; W < n; ++W)
            jlow += s.J[a][X * n + W] * g[W * n + Y];
          out.su2 = std::max(out.su2, std::abs((*r_su2)[a][X * n + Y] -
                                               0.5 * nu * jlow));
        }
  }
  return out;
}

}  // namespace quatlike
