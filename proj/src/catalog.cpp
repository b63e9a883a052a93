#include "quatlike/catalog.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace quatlike {

namespace {

// quaternion product on jets (components 1, i, j, k)
std::array<Jet, 4> qmul(const std::array<Jet, 4>& p, const std::array<Jet, 4>& q) {
  return {p[0] * q[0] - p[1] * q[1] - p[2] * q[2] - p[3] * q[3],
          p[0] * q[1] + p[1] * q[0] + p[2] * q[3] - p[3] * q[2],
          p[0] * q[2] - p[1] * q[3] + p[2] * q[0] + p[3] * q[1],
          p[0] * q[3] + p[1] * q[2] - p[2] * q[1] + p[3] * q[0]};
}

// left multiplication matrix rows of p: (p x)_row
std::array<std::array<double, 4>, 4> left_mult_matrix(
    const std::array<double, 4>& p) {
  return {{{p[0], -p[1], -p[2], -p[3]},
           {p[1], p[0], -p[3], p[2]},
           {p[2], p[3], p[0], -p[1]},
           {p[3], -p[2], p[1], p[0]}}};
}

// the cone chart: (z0, z^alpha, q) -> (u, v_blocks); u = lam * w(z),
// v_m = q_m * u, lam = 2 sqrt(sig * z0 / (1 - |q|^2))
ChartMap cone_chart_map(int n_h, double sig) {
  const int N = 4 + 4 * n_h;
  ChartMap map;
  map.dim_from = map.dim_to = N;
  map.apply = [n_h, sig, N](const JetVec& zhat) -> JetVec {
    const int dim = zhat[0].dim(), order = zhat[0].order();
    Jet q2(0.0, dim, order);
    for (int i = 4; i < N; ++i) q2 += zhat[i] * zhat[i];
    Jet lam = 2.0 * sqrt((sig * zhat[0]) / (1.0 - q2));
    JetVec z3(zhat.begin() + 1, zhat.begin() + 4);
    Jet th = sqrt(z3[0] * z3[0] + z3[1] * z3[1] + z3[2] * z3[2]);
    Jet c = cos(th * 0.5);
    Jet s = sin(th * 0.5) / th;
    std::array<Jet, 4> u{lam * c, lam * (s * z3[0]), lam * (s * z3[1]),
                         lam * (s * z3[2])};
    JetVec out(N, Jet(0.0, dim, order));
    for (int ci = 0; ci < 4; ++ci) out[ci] = u[ci];
    for (int m = 0; m < n_h; ++m) {
      std::array<Jet, 4> qm{zhat[4 + 4 * m], zhat[5 + 4 * m], zhat[6 + 4 * m],
                            zhat[7 + 4 * m]};
      std::array<Jet, 4> vm = qmul(qm, u);
      for (int ci = 0; ci < 4; ++ci) out[4 + 4 * m + ci] = vm[ci];
    }
    return out;
  };
  return map;
}

FieldFn section_map(int big_dim, double z0_ref, std::array<double, 3> z_ref) {
  return [big_dim, z0_ref, z_ref](const JetVec& q) -> JetVec {
    const int dim = q[0].dim(), order = q[0].order();
    JetVec out;
    out.reserve(big_dim);
    out.emplace_back(z0_ref, dim, order);
    for (int a = 0; a < 3; ++a) out.emplace_back(z_ref[a], dim, order);
    for (const Jet& j : q) out.push_back(j);
    return out;
  };
}

// slice a contiguous component range out of a field
TensorField slice_field(const TensorField& src, int offset, int count, int nup,
                        int ndown, int extra) {
  TensorField out;
  out.dim = src.dim;
  out.nup = nup;
  out.ndown = ndown;
  out.extra = extra;
  out.order_cost = src.order_cost;
  FieldFn ev = src.eval;
  out.eval = [ev, offset, count](const JetVec& x) {
    JetVec all = ev(x);
    return JetVec(all.begin() + offset, all.begin() + offset + count);
  };
  return out;
}

std::function<bool(std::span<const double>)> ball_domain(int offset, int dim,
                                                         double r2) {
  return [offset, dim, r2](std::span<const double> p) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += p[offset + i] * p[offset + i];
    return s < r2;
  };
}

}  // namespace

TensorField linear_vector_field(int dim, std::vector<double> P) {
  TensorField f;
  f.dim = dim;
  f.nup = 1;
  f.eval = [P, dim](const JetVec& x) {
    JetVec out;
    out.reserve(dim);
    for (int M = 0; M < dim; ++M) {
      Jet s(0.0, x[0].dim(), x[0].order());
      for (int X = 0; X < dim; ++X) {
        double c = P[M * dim + X];
        if (c != 0.0) s += c * x[X];
      }
      out.push_back(s);
    }
    return out;
  };
  return f;
}

CatalogEntry flat_cone(int n_h, bool positive_nu) {
  if (n_h < 1) throw std::invalid_argument("flat_cone: n_h must be >= 1");
  CatalogEntry e;
  e.kind = EntryKind::FlatCone;
  e.name = positive_nu ? "flat-cone-pos" : "flat-cone";
  e.n_h = n_h;
  e.sig = positive_nu ? -1.0 : 1.0;
  const int N = 4 + 4 * n_h, ns = 4 * n_h;

  // linear chart: flat coordinates with the cone margin 0.1 <= |z0| <= 10
  e.big_linear.dim = N;
  e.big_linear.box.lo.assign(N, -1.6);
  e.big_linear.box.hi.assign(N, 1.6);
  double sig = e.sig;
  e.big_linear.extra_domain = [N, sig](std::span<const double> x) {
    double z0 = 0.0;
    for (int i = 0; i < 4; ++i) z0 += x[i] * x[i];
    for (int i = 4; i < N; ++i) z0 -= x[i] * x[i];
    z0 *= sig / 4.0;
    return z0 > 0.1 && z0 < 10.0;
  };

  e.big_adapted.dim = N;
  e.big_adapted.box.lo = {0.5, 0.2, 0.2, 0.2};
  e.big_adapted.box.hi = {4.0, 1.0, 1.0, 1.0};
  if (positive_nu) {
    e.big_adapted.box.lo[0] = -4.0;
    e.big_adapted.box.hi[0] = -0.5;
  }
  const double qbound = 0.9 / std::sqrt(static_cast<double>(ns));
  for (int i = 0; i < ns; ++i) {
    e.big_adapted.box.lo.push_back(-qbound);
    e.big_adapted.box.hi.push_back(qbound);
  }
  e.big_adapted.extra_domain = ball_domain(4, ns, 0.81);

  e.small_chart.dim = ns;
  e.small_chart.box.lo.assign(ns, -qbound);
  e.small_chart.box.hi.assign(ns, qbound);
  e.small_chart.extra_domain = ball_domain(0, ns, 0.81);

  e.J_linear = standard_structure(N);
  std::vector<double> gdiag(static_cast<size_t>(N) * N, 0.0);
  for (int i = 0; i < 4; ++i) gdiag[i * N + i] = -e.sig;
  for (int i = 4; i < N; ++i) gdiag[i * N + i] = e.sig;
  e.g_linear = constant_field(N, 0, 2, 1, gdiag);
  std::vector<double> kmat(static_cast<size_t>(N) * N, 0.0);
  for (int i = 0; i < N; ++i) kmat[i * N + i] = 1.5;
  e.k_linear = linear_vector_field(N, kmat);

  e.adapted_to_linear = cone_chart_map(n_h, e.sig);
  e.J_adapted = {pullback_tensor(e.adapted_to_linear, e.J_linear.J)};
  e.g_adapted = pullback_tensor(e.adapted_to_linear, e.g_linear);
  e.k_adapted = pullback_tensor(e.adapted_to_linear, e.k_linear);
  e.has_adapted = true;
  e.has_metric = true;

  if (positive_nu) e.z0_ref = -1.0;
  FieldFn sect = section_map(N, e.z0_ref, e.z_ref);
  // section reads: J from the q-block, A from the q-row against z0, h from the
  // metric blocks (the project() read, expressed as a composed field)
  TensorField Jad = e.J_adapted.J;
  TensorField gad = e.g_adapted;
  {
    TensorField big;
    big.dim = N;
    big.extra = 3 * ns * ns + 3 * ns + ns * ns;  // J, A, h packed together
    big.order_cost = std::max(Jad.order_cost, gad.order_cost);
    FieldFn jev = Jad.eval, gev = gad.eval;
    big.eval = [jev, gev, N, ns](const JetVec& xhat) -> JetVec {
      JetVec Jall = jev(xhat);
      JetVec gall = gev(xhat);
      const Jet& z0 = xhat[0];
      Jet inv_z0 = 1.0 / z0;
      JetVec out;
      out.reserve(3 * ns * ns + 3 * ns + ns * ns);
      for (int a = 0; a < 3; ++a)
        for (int X = 0; X < ns; ++X)
          for (int Y = 0; Y < ns; ++Y)
            out.push_back(Jall[a * N * N + (4 + X) * N + (4 + Y)]);
      for (int a = 0; a < 3; ++a)
        for (int X = 0; X < ns; ++X)
          out.push_back(Jall[a * N * N + (4 + X) * N + 0] * inv_z0);
      // h_XY = g_{XY}/z0 + M_{ab} u^a_X u^b_Y with m, k read off J
      std::array<std::array<Jet, 3>, 3> k, m;
      for (int a = 0; a < 3; ++a)
        for (int al = 0; al < 3; ++al)
          k[a][al] = Jall[a * N * N + 0 * N + (al + 1)] * z0;
      m = invert_k_alpha(k);
      const Jet zero(0.0, xhat[0].dim(), xhat[0].order());
      std::array<std::array<Jet, 3>, 3> M;
      for (int al = 0; al < 3; ++al)
        for (int be = 0; be < 3; ++be) {
          Jet s = zero;
          for (int a = 0; a < 3; ++a) s += m[a][al] * m[a][be];
          M[al][be] = s;
        }
      std::vector<Jet> u(static_cast<size_t>(3) * ns, zero);
      for (int be = 0; be < 3; ++be)
        for (int X = 0; X < ns; ++X) {
          Jet s = zero;
          for (int a = 0; a < 3; ++a)
            s += (Jall[a * N * N + (4 + X) * N + 0] * inv_z0) * k[a][be];
          u[be * ns + X] = s;
        }
      for (int X = 0; X < ns; ++X)
        for (int Y = 0; Y < ns; ++Y) {
          Jet s = gall[(4 + X) * N + (4 + Y)] * inv_z0;
          for (int al = 0; al < 3; ++al)
            for (int be = 0; be < 3; ++be)
              s += M[al][be] * (u[al * ns + X] * u[be * ns + Y]);
          out.push_back(s);
        }
      return out;
    };
    TensorField packed = compose_field(big, sect, ns);
    e.lift.n_h = n_h;
    e.lift.z_ref = e.z_ref;
    e.lift.J = {slice_field(packed, 0, 3 * ns * ns, 1, 1, 3)};
    e.lift.A = slice_field(packed, 3 * ns * ns, 3 * ns, 0, 1, 3);
    e.lift.h = slice_field(packed, 3 * ns * ns + 3 * ns, ns * ns, 0, 2, 1);
    e.lift.has_h = true;
    e.lift.k_alpha = standard_su2_vectors_field();
  }

  // sp(1, n_h)-type generators: block quaternion left multiplications with
  // P† η + η P = 0; they commute with the structure and with the dilatation
  const int blocks = 1 + n_h;
  auto add_gen = [&](const std::string& name,
                     const std::vector<std::array<double, 4>>& pq) {
    std::vector<double> P(static_cast<size_t>(N) * N, 0.0);
    for (int bi = 0; bi < blocks; ++bi)
      for (int bj = 0; bj < blocks; ++bj) {
        auto Lm = left_mult_matrix(pq[bi * blocks + bj]);
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c)
            P[(4 * bi + r) * N + (4 * bj + c)] = Lm[r][c];
      }
    e.gen_names.push_back(name);
    e.gen_mats.push_back(std::move(P));
  };
  std::vector<std::array<double, 4>> zero_blocks(blocks * blocks,
                                                 {0, 0, 0, 0});
  // diagonal imaginary units
  for (int b = 0; b < blocks; ++b)
    for (int a = 1; a <= 3; ++a) {
      auto pq = zero_blocks;
      pq[b * blocks + b][a] = 1.0;
      add_gen("diag" + std::to_string(b) + "_e" + std::to_string(a), pq);
    }
  // off-diagonal pairs: P_ij = b, P_ji = -(η_j/η_i) conj(b)
  for (int bi = 0; bi < blocks; ++bi)
    for (int bj = bi + 1; bj < blocks; ++bj) {
      double etai = bi == 0 ? -1.0 : 1.0, etaj = bj == 0 ? -1.0 : 1.0;
      for (int a = 0; a <= 3; ++a) {
        auto pq = zero_blocks;
        pq[bi * blocks + bj][a] = 1.0;
        // conj(e_a) = e_a for a=0, -e_a otherwise
        pq[bj * blocks + bi][a] = -(etaj / etai) * (a == 0 ? 1.0 : -1.0);
        add_gen("off" + std::to_string(bi) + std::to_string(bj) + "_e" +
                    std::to_string(a),
                pq);
      }
    }
  return e;
}

CatalogEntry deformed_cone(const CatalogEntry& base, uint64_t seed,
                           double amplitude) {
  CatalogEntry e = base;
  e.kind = EntryKind::DeformedCone;
  e.name = "deformed-cone";
  e.deform_seed = seed;
  e.has_metric = false;
  e.has_adapted = false;
  const int ns = base.lift.small_dim();
  // ξ̂ = dμ for a random polynomial potential μ of degree <= 3: the closed
  // one-forms are exactly the shifts that keep the A⃗-curvature condition
  // solvable, hence the lifted structure integrable. The gradient is written
  // out analytically so the field stays exact on coordinate slices.
  Pcg32 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  auto lin = std::make_shared<std::vector<double>>(ns);
  auto quad = std::make_shared<std::vector<double>>(ns * ns);
  auto cub = std::make_shared<std::vector<double>>(ns * ns * ns);
  for (double& c : *lin) c = amplitude * rng.uniform(-1.0, 1.0);
  for (double& c : *quad) c = amplitude * rng.uniform(-1.0, 1.0);
  for (double& c : *cub) c = amplitude * rng.uniform(-1.0, 1.0);
  TensorField xihat;
  xihat.dim = ns;
  xihat.ndown = 1;
  xihat.eval = [lin, quad, cub, ns](const JetVec& q) -> JetVec {
    const Jet zero(0.0, q[0].dim(), q[0].order());
    JetVec out(ns, zero);
    for (int X = 0; X < ns; ++X) {
      Jet s((*lin)[X], q[0].dim(), q[0].order());
      for (int j = 0; j < ns; ++j) {
        s += ((*quad)[X * ns + j] + (*quad)[j * ns + X]) * q[j];
        for (int k = 0; k < ns; ++k)
          s += ((*cub)[(X * ns + j) * ns + k] + (*cub)[(j * ns + X) * ns + k] +
                (*cub)[(j * ns + k) * ns + X]) *
               (q[j] * q[k]);
      }
      out[X] = s;
    }
    return out;
  };
  e.lift = xi_hat_transform(base.lift, xihat);
  return e;
}

CatalogEntry rigid_flat(int n) {
  if (n < 1) throw std::invalid_argument("rigid_flat: n must be >= 1");
  CatalogEntry e;
  e.kind = EntryKind::RigidFlat;
  e.name = "rigid-flat";
  e.n_h = n;
  const int dim = 4 * n;
  e.small_chart.dim = dim;
  e.small_chart.box.lo.assign(dim, -1.0);
  e.small_chart.box.hi.assign(dim, 1.0);
  e.J_linear = standard_structure(dim);
  std::vector<double> eye(static_cast<size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) eye[i * dim + i] = 1.0;
  e.g_linear = constant_field(dim, 0, 2, 1, eye);
  e.has_metric = true;
  // constant translations are the baseline triholomorphic symmetries
  for (int d = 0; d < std::min(dim, 4); ++d) {
    std::vector<double> P(static_cast<size_t>(dim) * dim, 0.0);
    e.gen_names.push_back("translation" + std::to_string(d));
    e.gen_mats.push_back(std::move(P));  // zero matrix: constant field handled
  }
  return e;
}

CatalogEntry catalog_entry(const std::string& name, int n_h, uint64_t seed) {
  if (name == "flat-cone") return flat_cone(n_h, false);
  if (name == "flat-cone-pos") return flat_cone(n_h, true);
  if (name == "deformed-cone") return deformed_cone(flat_cone(n_h, false), seed);
  if (name == "rigid-flat") return rigid_flat(n_h);
  throw std::invalid_argument("unknown manifold: " + name);
}

HypercomplexTriple rotated_small_structure(const CatalogEntry& e,
                                           uint64_t seed) {
  const int N = e.big_linear.dim, ns = 4 * e.n_h;
  TensorField Jad = e.J_adapted.J;
  Pcg32 rng(seed ^ 0x7b1fa3c5d2e48a61ULL);
  auto coef = std::make_shared<std::vector<double>>(3 * (1 + ns + ns * ns));
  for (double& c : *coef) c = 0.3 * rng.uniform(-1.0, 1.0);
  const double z0r = e.z0_ref;
  const std::array<double, 3> zr = e.z_ref;
  FieldFn sect = [N, ns, coef, z0r, zr](const JetVec& q) -> JetVec {
    const int dim = q[0].dim(), order = q[0].order();
    JetVec out;
    out.emplace_back(z0r, dim, order);
    const int stride = 1 + ns + ns * ns;
    for (int a = 0; a < 3; ++a) {
      Jet s(zr[a] + (*coef)[a * stride], dim, order);
      for (int i = 0; i < ns; ++i) {
        s += (*coef)[a * stride + 1 + i] * q[i];
        for (int j = 0; j < ns; ++j)
          s += (*coef)[a * stride + 1 + ns + i * ns + j] * (q[i] * q[j]);
      }
      out.push_back(s);
    }
    for (const Jet& j : q) out.push_back(j);
    return out;
  };
  TensorField big;
  big.dim = N;
  big.extra = 3 * ns * ns;
  big.order_cost = Jad.order_cost;
  FieldFn jev = Jad.eval;
  big.eval = [jev, N, ns](const JetVec& xhat) {
    JetVec Jall = jev(xhat);
    JetVec out;
    out.reserve(static_cast<size_t>(3) * ns * ns);
    for (int a = 0; a < 3; ++a)
      for (int X = 0; X < ns; ++X)
        for (int Y = 0; Y < ns; ++Y)
          out.push_back(Jall[a * N * N + (4 + X) * N + (4 + Y)]);
    return out;
  };
  TensorField packed = compose_field(big, sect, ns);
  packed.nup = packed.ndown = 1;
  packed.extra = 3;
  return {packed};
}

TensorField adapted_generator(const CatalogEntry& e,
                              const std::vector<double>& P) {
  return pullback_tensor(e.adapted_to_linear,
                         linear_vector_field(e.big_linear.dim, P));
}

SmallGenerator project_generator(const CatalogEntry& e,
                                 const std::vector<double>& P) {
  const int N = e.big_linear.dim, ns = 4 * e.n_h;
  TensorField khat = adapted_generator(e, P);
  TensorField Jad = e.J_adapted.J;
  TensorField big;
  big.dim = N;
  big.extra = ns + 3;
  big.order_cost = std::max(khat.order_cost, Jad.order_cost);
  FieldFn kev = khat.eval, jev = Jad.eval;
  big.eval = [kev, jev, N, ns](const JetVec& xhat) -> JetVec {
    JetVec kj = kev(xhat);
    JetVec Jall = jev(xhat);
    const Jet& z0 = xhat[0];
    JetVec out;
    out.reserve(ns + 3);
    for (int X = 0; X < ns; ++X) out.push_back(kj[4 + X]);
    // r^a = m^a_alpha khat^{alpha+1}
    std::array<std::array<Jet, 3>, 3> k;
    for (int a = 0; a < 3; ++a)
      for (int al = 0; al < 3; ++al)
        k[a][al] = Jall[a * N * N + 0 * N + (al + 1)] * z0;
    auto m = invert_k_alpha(k);
    for (int a = 0; a < 3; ++a) {
      Jet s(0.0, xhat[0].dim(), xhat[0].order());
      for (int al = 0; al < 3; ++al) s += m[a][al] * kj[al + 1];
      out.push_back(s);
    }
    return out;
  };
  FieldFn sect = section_map(N, e.z0_ref, e.z_ref);
  TensorField packed = compose_field(big, sect, ns);
  SmallGenerator out;
  out.k = slice_field(packed, 0, ns, 1, 0, 1);
  out.r = slice_field(packed, ns, 3, 0, 0, 3);
  return out;
}

std::string catalog_manifest_json() {
  nlohmann::ordered_json m;
  m["schema"] = 1;
  nlohmann::ordered_json entries = nlohmann::ordered_json::array();
  for (int nh : {1, 2}) {
    nlohmann::ordered_json e;
    e["name"] = "flat-cone";
    e["n_h"] = nh;
    e["big_dim"] = 4 + 4 * nh;
    e["small_dim"] = 4 * nh;
    e["big_signature"] = "(4," + std::to_string(4 * nh) + ")";
    e["einstein_factor"] = nh + 2;
    nlohmann::ordered_json nu;
    for (double z0 : {0.5, 1.0, 2.0, 4.0})
      nu[std::to_string(z0)] = -1.0 / z0;
    e["nu_per_z0"] = nu;
    e["generators"] = 3 * (1 + nh) + 2 * nh * (nh + 1);
    entries.push_back(e);
    nlohmann::ordered_json ep = e;
    ep["name"] = "flat-cone-pos";
    ep["big_signature"] = "(" + std::to_string(4 * nh) + ",4)";
    nlohmann::ordered_json nup;
    for (double z0 : {-0.5, -1.0, -2.0, -4.0})
      nup[std::to_string(z0)] = -1.0 / z0;
    ep["nu_per_z0"] = nup;
    entries.push_back(ep);
    nlohmann::ordered_json ed;
    ed["name"] = "deformed-cone";
    ed["n_h"] = nh;
    ed["big_dim"] = 4 + 4 * nh;
    ed["small_dim"] = 4 * nh;
    ed["hypercomplex"] = true;
    ed["hyper_kahler"] = false;
    entries.push_back(ed);
    nlohmann::ordered_json er;
    er["name"] = "rigid-flat";
    er["n"] = nh;
    er["dim"] = 4 * nh;
    er["nu"] = 0.0;
    entries.push_back(er);
  }
  m["entries"] = entries;
  return m.dump(2) + "\n";
}

}  // namespace quatlike
