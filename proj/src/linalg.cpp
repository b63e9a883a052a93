#include "quatlike/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace quatlike {

void CholFactor::factor(Mat A, double rank_tol) {
  n_ = A.rows;
  l_ = std::move(A);
  double max_diag = 0.0;
  for (int i = 0; i < n_; ++i) max_diag = std::max(max_diag, l_(i, i));
  double min_piv = max_diag;
  for (int j = 0; j < n_; ++j) {
    double d = l_(j, j);
    for (int k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
    if (!(d > rank_tol * max_diag))
      throw RankDeficientError("cholesky: pivot below rank tolerance");
    min_piv = std::min(min_piv, d);
    const double lj = std::sqrt(d);
    l_(j, j) = lj;
    const double inv = 1.0 / lj;
    for (int i = j + 1; i < n_; ++i) {
      double s = l_(i, j);
      const double* ri = &l_.a[static_cast<size_t>(i) * n_];
      const double* rj = &l_.a[static_cast<size_t>(j) * n_];
      for (int k = 0; k < j; ++k) s -= ri[k] * rj[k];
      l_(i, j) = s * inv;
    }
  }
  pivot_ratio_ = max_diag > 0 ? min_piv / max_diag : 0.0;
}

std::vector<double> CholFactor::solve(std::span<const double> b) const {
  std::vector<double> y(b.begin(), b.end());
  for (int i = 0; i < n_; ++i) {
    double s = y[i];
    const double* ri = &l_.a[static_cast<size_t>(i) * n_];
    for (int k = 0; k < i; ++k) s -= ri[k] * y[k];
    y[i] = s / ri[i];
  }
  for (int i = n_ - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < n_; ++k) s -= l_(k, i) * y[k];
    y[i] = s / l_(i, i);
  }
  return y;
}

void LuFactor::factor(Mat A, double rank_tol) {
  n_ = A.rows;
  lu_ = std::move(A);
  perm_.resize(n_);
  double max_abs = 0.0;
  for (double v : lu_.a) max_abs = std::max(max_abs, std::abs(v));
  for (int k = 0; k < n_; ++k) {
    int p = k;
    double best = std::abs(lu_(k, k));
    for (int i = k + 1; i < n_; ++i)
      if (std::abs(lu_(i, k)) > best) best = std::abs(lu_(i, k)), p = i;
    if (!(best > rank_tol * (max_abs > 0 ? max_abs : 1.0)))
      throw RankDeficientError("lu: pivot below rank tolerance");
    perm_[k] = p;
    if (p != k)
      for (int c = 0; c < n_; ++c) std::swap(lu_(k, c), lu_(p, c));
    const double inv = 1.0 / lu_(k, k);
    for (int i = k + 1; i < n_; ++i) {
      const double m = lu_(i, k) * inv;
      lu_(i, k) = m;
      for (int c = k + 1; c < n_; ++c) lu_(i, c) -= m * lu_(k, c);
    }
  }
}

std::vector<double> LuFactor::solve(std::span<const double> b) const {
  std::vector<double> x(b.begin(), b.end());
  for (int k = 0; k < n_; ++k) {
    std::swap(x[k], x[perm_[k]]);
    for (int i = k + 1; i < n_; ++i) x[i] -= lu_(i, k) * x[k];
  }
  for (int i = n_ - 1; i >= 0; --i) {
    for (int c = i + 1; c < n_; ++c) x[i] -= lu_(i, c) * x[c];
    x[i] /= lu_(i, i);
  }
  return x;
}

std::vector<double> lstsq(const Mat& A, std::span<const double> b,
                          double rank_tol, double* max_residual) {
  const int n = A.cols;
  Mat N(n, n);
  std::vector<double> c(n, 0.0);
  for (int r = 0; r < A.rows; ++r) {
    const double* row = &A.a[static_cast<size_t>(r) * n];
    for (int i = 0; i < n; ++i) {
      if (row[i] == 0.0) continue;
      c[i] += row[i] * b[r];
      for (int j = i; j < n; ++j) N(i, j) += row[i] * row[j];
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) N(i, j) = N(j, i);
  CholFactor chol;
  chol.factor(std::move(N), rank_tol);
  std::vector<double> x = chol.solve(c);
  if (max_residual) {
    double mr = 0.0;
    for (int r = 0; r < A.rows; ++r) {
      double s = -b[r];
      const double* row = &A.a[static_cast<size_t>(r) * n];
      for (int i = 0; i < n; ++i) s += row[i] * x[i];
      mr = std::max(mr, std::abs(s));
    }
    *max_residual = mr;
  }
  return x;
}

SymEigen jacobi_eigen(Mat A) {
  const int n = A.rows;
  Mat V(n, n);
  for (int i = 0; i < n; ++i) V(i, i) = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(A(p, q)) < 1e-300) continue;
        double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        double c = 1.0 / std::sqrt(1.0 + t * t), s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
  }
  SymEigen e;
  e.values.resize(n);
  for (int i = 0; i < n; ++i) e.values[i] = A(i, i);
  // sort ascending, permuting the eigenvector columns along
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return e.values[a] < e.values[b]; });
  SymEigen out;
  out.values.resize(n);
  out.vectors = Mat(n, n);
  for (int c = 0; c < n; ++c) {
    out.values[c] = e.values[idx[c]];
    for (int r = 0; r < n; ++r) out.vectors(r, c) = V(r, idx[c]);
  }
  return out;
}

std::vector<double> lstsq_eigen(const Mat& A, std::span<const double> b,
                                double tol, int* null_dim,
                                double* max_residual) {
  const int n = A.cols;
  Mat N(n, n);
  std::vector<double> c(n, 0.0);
  for (int r = 0; r < A.rows; ++r) {
    const double* row = &A.a[static_cast<size_t>(r) * n];
    for (int i = 0; i < n; ++i) {
      if (row[i] == 0.0) continue;
      c[i] += row[i] * b[r];
      for (int j = 0; j < n; ++j) N(i, j) += row[i] * row[j];
    }
  }
  SymEigen e = jacobi_eigen(std::move(N));
  double lmax = std::max(std::abs(e.values.front()), std::abs(e.values.back()));
  int dropped = 0;
  std::vector<double> x(n, 0.0);
  for (int k = 0; k < n; ++k) {
    if (e.values[k] <= tol * lmax) {
      ++dropped;
      continue;
    }
    double proj = 0.0;
    for (int i = 0; i < n; ++i) proj += e.vectors(i, k) * c[i];
    proj /= e.values[k];
    for (int i = 0; i < n; ++i) x[i] += proj * e.vectors(i, k);
  }
  if (null_dim) *null_dim = dropped;
  if (max_residual) {
    double mr = 0.0;
    for (int r = 0; r < A.rows; ++r) {
      double s = -b[r];
      const double* row = &A.a[static_cast<size_t>(r) * n];
      for (int i = 0; i < n; ++i) s += row[i] * x[i];
      mr = std::max(mr, std::abs(s));
    }
    *max_residual = mr;
  }
  return x;
}

JetVec jet_solve_dense(JetVec A, JetVec b, int n, int nrhs) {
  auto at = [&](int r, int c) -> Jet& { return A[static_cast<size_t>(r) * n + c]; };
  auto bt = [&](int r, int c) -> Jet& { return b[static_cast<size_t>(r) * nrhs + c]; };
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(at(k, k).value());
    for (int i = k + 1; i < n; ++i)
      if (std::abs(at(i, k).value()) > best)
        best = std::abs(at(i, k).value()), p = i;
    if (!(best > 0.0)) throw RankDeficientError("jet solve: zero pivot");
    if (p != k) {
      for (int c = k; c < n; ++c) std::swap(at(k, c), at(p, c));
      for (int c = 0; c < nrhs; ++c) std::swap(bt(k, c), bt(p, c));
    }
    for (int i = k + 1; i < n; ++i) {
      Jet m = at(i, k) / at(k, k);
      for (int c = k + 1; c < n; ++c) at(i, c) -= m * at(k, c);
      for (int c = 0; c < nrhs; ++c) bt(i, c) -= m * bt(k, c);
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int c = 0; c < nrhs; ++c) {
      Jet s = bt(i, c);
      for (int j = i + 1; j < n; ++j) s -= at(i, j) * bt(j, c);
      bt(i, c) = s / at(i, i);
    }
  }
  return b;
}

JetVec jet_invert(const JetVec& A, int n) {
  if (A.empty()) return {};
  const Jet& probe = A[0];
  JetVec eye(static_cast<size_t>(n) * n, Jet(0.0, probe.dim(), probe.order()));
  for (int i = 0; i < n; ++i)
    eye[static_cast<size_t>(i) * n + i] = Jet(1.0, probe.dim(), probe.order());
  return jet_solve_dense(A, std::move(eye), n, n);
}

SparseJetLsq::Result SparseJetLsq::solve(double rank_tol) const {
  const int n = ncols_;
  Mat N(n, n);
  std::vector<double> c(n, 0.0);
  for (const Row& row : rows_) {
    for (const auto& [ci, ai] : row.terms) {
      const double av = ai.value();
      c[ci] += av * row.rhs.value();
      for (const auto& [cj, aj] : row.terms) {
        if (cj >= ci) N(ci, cj) += av * aj.value();
      }
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) N(i, j) = N(j, i);

  CholFactor chol;
  chol.factor(std::move(N), rank_tol);
  std::vector<double> x0 = chol.solve(c);

  Result res;
  res.pivot_ratio = chol.pivot_ratio();
  for (const Row& row : rows_) {
    double s = -row.rhs.value();
    for (const auto& [ci, ai] : row.terms) s += ai.value() * x0[ci];
    res.max_residual = std::max(res.max_residual, std::abs(s));
  }

  res.x.reserve(n);
  for (int i = 0; i < n; ++i) res.x.emplace_back(x0[i], dim_, order_);
  if (order_ >= 1) {
    std::vector<double> u(n);
    for (int s = 0; s < dim_; ++s) {
      std::fill(u.begin(), u.end(), 0.0);
      for (const Row& row : rows_) {
        double alpha = 0.0, alpha_s = 0.0;
        for (const auto& [cj, aj] : row.terms) {
          alpha += aj.value() * x0[cj];
          alpha_s += aj.d1(s) * x0[cj];
        }
        const double rho = row.rhs.value() - alpha;
        const double drs = row.rhs.d1(s) - alpha_s;
        for (const auto& [ci, ai] : row.terms)
          u[ci] += ai.d1(s) * rho + ai.value() * drs;
      }
      std::vector<double> xs = chol.solve(u);
      for (int i = 0; i < n; ++i) res.x[i].d1ref(s) = xs[i];
    }
  }
  return res;
}

}  // namespace quatlike
