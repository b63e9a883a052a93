#include "quatlike/symmetry.hpp"

#include <cmath>

#include "quatlike/linalg.hpp"

namespace quatlike {

double symmetry_residual(const ConnectionJets& c, const JetVec& kjets, int n) {
  // ∇k as jets (order 1), then ∇∇k values and the curvature term
  JetVec nk = covariant_derivative(c.gamma, kjets, n, 1, 0);
  auto R = riemann(c.gamma, n);
  auto G = [&](int X, int Y, int Z) {
    return c.gamma[(static_cast<size_t>(X) * n + Y) * n + Z].value();
  };
  double worst = 0.0;
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y)
      for (int Z = 0; Z < n; ++Z) {
        // ∇_X (∇k)_Y{}^Z for the (1,1)-tensor ∇k
        double acc = nk[Y * n + Z].d1(X);
        for (int W = 0; W < n; ++W)
          acc += G(X, W, Z) * nk[Y * n + W].value() -
                 G(X, Y, W) * nk[W * n + Z].value();
        for (int W = 0; W < n; ++W)
          acc -= R[((static_cast<size_t>(X) * n + W) * n + Y) * n + Z] *
                 kjets[W].value();
        worst = std::max(worst, std::abs(acc));
      }
  return worst;
}

RotationResult rotation_functions(const std::vector<double>& lie_J,
                                  const StructureVals& s) {
  const int n = s.n;
  // rows: (a, X, Y); unknowns r^b via (r⃗ × J⃗)^a = ε^{abc} r^b J^c
  Mat A(3 * n * n, 3);
  std::vector<double> b(3 * n * n, 0.0);
  int row = 0;
  for (int a = 0; a < 3; ++a)
    for (int X = 0; X < n; ++X)
      for (int Y = 0; Y < n; ++Y) {
        for (int bb = 0; bb < 3; ++bb)
          for (int cc = 0; cc < 3; ++cc) {
            double e = kEps3[a][bb][cc];
            if (e != 0.0) A(row, bb) += e * s.J[cc][X * n + Y];
          }
        b[row] = lie_J[a * n * n + X * n + Y];
        ++row;
      }
  RotationResult out;
  std::vector<double> r = lstsq(A, b, 1e-12, &out.residual);
  for (int i = 0; i < 3; ++i) out.r[i] = r[i];
  return out;
}

MomentMap moment_map(const Triplet<double>& r,
                     const std::array<JetVec, 3>& omega,
                     std::span<const double> k, double nu, int n) {
  MomentMap out;
  if (nu == 0.0) return out;  // hyper-Kähler branch: undefined by this formula
  out.defined = true;
  for (int a = 0; a < 3; ++a) {
    double wk = 0.0;
    for (int X = 0; X < n; ++X) wk += omega[a][X].value() * k[X];
    out.P[a] = (-0.5 * r[a] - wk) / nu;
  }
  return out;
}

DkDecomposition decompose_dk(const ConnectionJets& c, const JetVec& kjets,
                             const VielbeinJets& vb, const StructureVals& s,
                             double nu) {
  const int n = s.n, two_r = vb.two_r();
  JetVec nkj = covariant_derivative(c.gamma, kjets, n, 1, 0);
  std::vector<double> nk(static_cast<size_t>(n) * n);
  for (int i = 0; i < n * n; ++i) nk[i] = nkj[i].value();
  DkDecomposition out;
  // P^a = -(1/(4 r ν)) Σ ∇_X k^Y J^a_Y{}^X   (tr J^a J^b = -4r δ^{ab})
  const int quat_r = n / 4;
  for (int a = 0; a < 3; ++a) {
    double acc = 0.0;
    for (int X = 0; X < n; ++X)
      for (int Y = 0; Y < n; ++Y) acc += nk[X * n + Y] * s.J[a][Y * n + X];
    out.P[a] = nu != 0.0 ? -acc / (4.0 * quat_r * nu) : 0.0;
  }
  // t_C{}^D = 1/2 Σ ∇_X k^Y L_Y{}^X{}_C{}^D
  out.t.assign(static_cast<size_t>(two_r) * two_r, 0.0);
  for (int C = 0; C < two_r; ++C)
    for (int D = 0; D < two_r; ++D) {
      std::complex<double> acc = 0.0;
      for (int X = 0; X < n; ++X)
        for (int Y = 0; Y < n; ++Y) {
          std::complex<double> L = 0.0;
          for (int i = 0; i < 2; ++i)
            L += vb.finvYiA(X, i, C).value() * vb.fXiA(Y, i, D).value();
          acc += nk[X * n + Y] * L;
        }
      out.t[C * two_r + D] = 0.5 * acc;
    }
  // reconstruction residual
  double worst = 0.0;
  for (int X = 0; X < n; ++X)
    for (int Y = 0; Y < n; ++Y) {
      std::complex<double> acc = -nk[X * n + Y];
      for (int a = 0; a < 3; ++a)
        acc += nu * s.J[a][X * n + Y] * out.P[a];
      for (int A = 0; A < two_r; ++A)
        for (int B = 0; B < two_r; ++B) {
          std::complex<double> L = 0.0;
          for (int i = 0; i < 2; ++i)
            L += vb.finvYiA(Y, i, A).value() * vb.fXiA(X, i, B).value();
          acc += L * out.t[B * two_r + A];
        }
      worst = std::max(worst, std::abs(acc));
    }
  out.residual = worst;
  return out;
}

Triplet<double> xi_moment_shift(const Triplet<double>& P, const JetVec& xi,
                                std::span<const double> k,
                                const StructureVals& s, double nu) {
  const int n = s.n;
  Triplet<double> out;
  for (int a = 0; a < 3; ++a) {
    double xjk = 0.0;
    for (int X = 0; X < n; ++X)
      for (int Y = 0; Y < n; ++Y)
        xjk += xi[Y].value() * k[X] * s.J[a][X * n + Y];
    out[a] = P[a] - xjk / nu;
  }
  return out;
}

TensorField lift_symmetry_field(const LiftData& L, TensorField k_small,
                                TensorField r_small) {
  const int N = L.big_dim(), ns = L.small_dim();
  TensorField f;
  f.dim = N;
  f.nup = 1;
  f.order_cost = std::max({k_small.order_cost, r_small.order_cost,
                           L.k_alpha.order_cost});
  TensorField kal = L.k_alpha;
  std::array<double, 3> z_ref = L.z_ref;
  f.eval = [kal, k_small, r_small, z_ref, N, ns](const JetVec& xhat) -> JetVec {
    const int dim = xhat[0].dim(), order = xhat[0].order();
    JetVec zjets(xhat.begin() + 1, xhat.begin() + 4);
    JetVec qjets(xhat.begin() + 4, xhat.end());
    JetVec kq = k_small.eval(qjets);
    JetVec rr = r_small.eval(qjets);
    JetVec kall = kal.eval(zjets);
    // r⃗ is given in the reference frame; co-rotate to the frame at z
    auto O = frame_rotation_of_angles(zjets);
    JetVec zref;
    for (int a = 0; a < 3; ++a) zref.emplace_back(z_ref[a], dim, order);
    auto Or = frame_rotation_of_angles(zref);
    JetVec rot(3, Jet(0.0, dim, order));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        Jet s(0.0, dim, order);
        for (int c = 0; c < 3; ++c) s += O[a][c] * Or[b][c];
        rot[a] += s * rr[b];
      }
    JetVec out(N, Jet(0.0, dim, order));
    for (int al = 0; al < 3; ++al) {
      Jet s(0.0, dim, order);
      for (int a = 0; a < 3; ++a) s += kall[a * 3 + al] * rot[a];
      out[al + 1] = s;
    }
    for (int X = 0; X < ns; ++X) out[4 + X] = kq[X];
    return out;
  };
  return f;
}

ProjectedSymmetry project_symmetry(std::span<const double> khat,
                                   const StructureVals& Jhat, int n_h,
                                   std::span<const double> phat,
                                   std::array<double, 3> z_ref) {
  const int N = Jhat.n;
  ProjectedSymmetry out;
  out.k.assign(khat.begin() + 4, khat.begin() + 4 + 4 * n_h);
  out.k0_residual = std::abs(khat[0]);
  // m-read and r^a = m^a_alpha khat^{alpha+1}, then counter-rotate
  double m[3][3];
  {
    JetVec K(9, Jet(0.0, 3, 0)), Ki;
    for (int a = 0; a < 3; ++a)
      for (int al = 0; al < 3; ++al)
        K[a * 3 + al] = Jet(phat[0] * Jhat.J[a][0 * N + (al + 1)], 3, 0);
    Ki = jet_invert(K, 3);
    for (int a = 0; a < 3; ++a)
      for (int be = 0; be < 3; ++be) m[a][be] = Ki[be * 3 + a].value();
  }
  Triplet<double> r_frame;
  for (int a = 0; a < 3; ++a) {
    double s = 0.0;
    for (int al = 0; al < 3; ++al) s += m[a][al] * khat[al + 1];
    r_frame[a] = s;
  }
  JetVec zp, zr;
  for (int a = 0; a < 3; ++a) {
    zp.emplace_back(phat[1 + a], 3, 0);
    zr.emplace_back(z_ref[a], 3, 0);
  }
  auto Op = frame_rotation_of_angles(zp);
  auto Or = frame_rotation_of_angles(zr);
  for (int a = 0; a < 3; ++a) {
    double s = 0.0;
    for (int b = 0; b < 3; ++b) {
      double rel = 0.0;
      for (int c = 0; c < 3; ++c) rel += Op[b][c].value() * Or[a][c].value();
      s += rel * r_frame[b];
    }
    out.r[a] = s;
  }
  return out;
}

}  // namespace quatlike
