#include "quatlike/fields.hpp"

#include <stdexcept>

namespace quatlike {

bool Chart::contains(std::span<const double> p) const {
  for (size_t i = 0; i < box.lo.size(); ++i)
    if (p[i] < box.lo[i] || p[i] > box.hi[i]) return false;
  if (extra_domain && !extra_domain(p)) return false;
  return true;
}

std::vector<double> Chart::sample(Pcg32& rng) const {
  std::vector<double> p(dim);
  for (int tries = 0; tries < 1000; ++tries) {
    for (int i = 0; i < dim; ++i) p[i] = rng.uniform(box.lo[i], box.hi[i]);
    if (!extra_domain || extra_domain(p)) return p;
  }
  throw std::runtime_error("chart sampling: domain predicate rejected 1000 draws");
}

TensorField constant_field(int dim, int nup, int ndown, int extra,
                           std::vector<double> values) {
  TensorField f;
  f.dim = dim;
  f.nup = nup;
  f.ndown = ndown;
  f.extra = extra;
  f.eval = [values](const JetVec& x) {
    JetVec out;
    out.reserve(values.size());
    for (double v : values) out.emplace_back(v, x[0].dim(), x[0].order());
    return out;
  };
  return f;
}

PartialResult partial(const TensorField& f, std::span<const double> p) {
  JetVec comps = f.at(p, 1);
  const int nc = static_cast<int>(comps.size());
  const int d = static_cast<int>(p.size());
  PartialResult r;
  r.comp.resize(nc);
  r.d = Mat(nc, d);
  for (int c = 0; c < nc; ++c) {
    r.comp[c] = comps[c].value();
    for (int X = 0; X < d; ++X) r.d(c, X) = comps[c].d1(X);
  }
  return r;
}

std::vector<double> lie_derivative(const TensorField& k, const TensorField& T,
                                   TensorKind kind, std::span<const double> p) {
  const int n = T.dim;
  PartialResult kp = partial(k, p);
  PartialResult Tp = partial(T, p);
  std::vector<double> out(T.ncomp(), 0.0);
  const int blk = T.ncomp() / T.extra;
  for (int e = 0; e < T.extra; ++e) {
    const int off = e * blk;
    switch (kind) {
      case TensorKind::Vector:
        for (int Y = 0; Y < n; ++Y) {
          double s = 0;
          for (int W = 0; W < n; ++W)
            s += kp.comp[W] * Tp.d(off + Y, W) - Tp.comp[off + W] * kp.d(Y, W);
          out[off + Y] = s;
        }
        break;
      case TensorKind::OneForm:
        for (int X = 0; X < n; ++X) {
          double s = 0;
          for (int W = 0; W < n; ++W)
            s += kp.comp[W] * Tp.d(off + X, W) + Tp.comp[off + W] * kp.d(W, X);
          out[off + X] = s;
        }
        break;
      case TensorKind::T11:
        for (int X = 0; X < n; ++X)
          for (int Y = 0; Y < n; ++Y) {
            double s = 0;
            for (int W = 0; W < n; ++W)
              s += kp.comp[W] * Tp.d(off + X * n + Y, W) +
                   Tp.comp[off + W * n + Y] * kp.d(W, X) -
                   Tp.comp[off + X * n + W] * kp.d(Y, W);
            out[off + X * n + Y] = s;
          }
        break;
      case TensorKind::T02:
        for (int X = 0; X < n; ++X)
          for (int Y = 0; Y < n; ++Y) {
            double s = 0;
            for (int W = 0; W < n; ++W)
              s += kp.comp[W] * Tp.d(off + X * n + Y, W) +
                   Tp.comp[off + W * n + Y] * kp.d(W, X) +
                   Tp.comp[off + X * n + W] * kp.d(W, Y);
            out[off + X * n + Y] = s;
          }
        break;
    }
  }
  return out;
}

std::vector<double> exterior_derivative(const TensorField& A,
                                        std::span<const double> p) {
  const int n = A.dim;
  PartialResult Ap = partial(A, p);
  std::vector<double> out(static_cast<size_t>(A.extra) * n * n, 0.0);
  for (int e = 0; e < A.extra; ++e)
    for (int X = 0; X < n; ++X)
      for (int Y = 0; Y < n; ++Y)
        out[(e * n + X) * n + Y] = Ap.d(e * n + Y, X) - Ap.d(e * n + X, Y);
  return out;
}

TensorField compose_field(const TensorField& src, FieldFn point_map,
                          int dim_from) {
  TensorField out;
  out.dim = dim_from;
  out.nup = src.nup;
  out.ndown = src.ndown;
  out.extra = src.extra;
  out.order_cost = 0;  // re-seeds internally; capped by kMaxJetOrder
  FieldFn src_eval = src.eval;
  const int src_cost = src.order_cost;
  out.eval = [src_eval, src_cost, point_map](const JetVec& x) -> JetVec {
    JetVec inner = point_map(x);
    const int order = x[0].order();
    const int seed_order = std::min(order + src_cost, kMaxJetOrder);
    std::vector<double> pt(inner.size());
    for (size_t i = 0; i < inner.size(); ++i) pt[i] = inner[i].value();
    JetVec big = src_eval(seed_point(pt, seed_order));
    JetVec outv;
    outv.reserve(big.size());
    for (const Jet& b : big) outv.push_back(jet_substitute(b, inner));
    return outv;
  };
  return out;
}

JetVec chart_map_jacobian(const JetVec& phi, int dim_from) {
  JetVec D;
  D.reserve(phi.size() * dim_from);
  for (const Jet& pm : phi)
    for (int X = 0; X < dim_from; ++X) D.push_back(pm.partial(X));
  return D;
}

TensorField pullback_tensor(const ChartMap& map, const TensorField& src) {
  if (map.dim_from != map.dim_to)
    throw std::invalid_argument("pullback: chart map must be square");
  TensorField out;
  out.dim = map.dim_from;
  out.nup = src.nup;
  out.ndown = src.ndown;
  out.extra = src.extra;
  out.order_cost = src.order_cost + 1;
  const int nup = src.nup, ndown = src.ndown, extra = src.extra;
  FieldFn apply = map.apply;
  FieldFn src_eval = src.eval;
  out.eval = [apply, src_eval, nup, ndown, extra](const JetVec& x) -> JetVec {
    const int n = static_cast<int>(x.size());
    JetVec phi = apply(x);
    JetVec D = chart_map_jacobian(phi, n);
    JetVec S = src_eval(phi);
    JetVec Dinv;
    if (nup > 0) Dinv = jet_invert(D, n);
    auto dmat = [&](int M, int X) -> const Jet& { return D[M * n + X]; };
    auto dinv = [&](int Y, int N) -> const Jet& { return Dinv[Y * n + N]; };
    const int blk = static_cast<int>(S.size()) / extra;
    JetVec out_jets;
    out_jets.reserve(S.size());
    const Jet zero(0.0, x[0].dim(), std::max(0, x[0].order() - 1));
    if (ndown == 0 && nup == 0) return S;
    for (int e = 0; e < extra; ++e) {
      const int off = e * blk;
      if (ndown == 1 && nup == 0) {
        for (int X = 0; X < n; ++X) {
          Jet s = zero;
          for (int M = 0; M < n; ++M) s += dmat(M, X) * S[off + M];
          out_jets.push_back(std::move(s));
        }
      } else if (ndown == 0 && nup == 1) {
        for (int Y = 0; Y < n; ++Y) {
          Jet s = zero;
          for (int N = 0; N < n; ++N) s += dinv(Y, N) * S[off + N];
          out_jets.push_back(std::move(s));
        }
      } else if (ndown == 1 && nup == 1) {
        // tmp[M][Y] = Σ_N S[M][N] Dinv[Y][N]
        JetVec tmp(static_cast<size_t>(n) * n, zero);
        for (int M = 0; M < n; ++M)
          for (int Y = 0; Y < n; ++Y) {
            Jet s = zero;
            for (int N = 0; N < n; ++N) s += S[off + M * n + N] * dinv(Y, N);
            tmp[M * n + Y] = std::move(s);
          }
        for (int X = 0; X < n; ++X)
          for (int Y = 0; Y < n; ++Y) {
            Jet s = zero;
            for (int M = 0; M < n; ++M) s += dmat(M, X) * tmp[M * n + Y];
            out_jets.push_back(std::move(s));
          }
      } else if (ndown == 2 && nup == 0) {
        JetVec tmp(static_cast<size_t>(n) * n, zero);
        for (int M = 0; M < n; ++M)
          for (int Y = 0; Y < n; ++Y) {
            Jet s = zero;
            for (int N = 0; N < n; ++N) s += S[off + M * n + N] * dmat(N, Y);
            tmp[M * n + Y] = std::move(s);
          }
        for (int X = 0; X < n; ++X)
          for (int Y = 0; Y < n; ++Y) {
            Jet s = zero;
            for (int M = 0; M < n; ++M) s += dmat(M, X) * tmp[M * n + Y];
            out_jets.push_back(std::move(s));
          }
      } else {
        throw std::invalid_argument("pullback: unsupported rank");
      }
    }
    return out_jets;
  };
  return out;
}

}  // namespace quatlike
