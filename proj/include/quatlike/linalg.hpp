// Small dense linear algebra over doubles and jets.
//
// Connections and decompositions are produced by pointwise linear solves.
// Solves over jet-valued systems propagate first derivatives through the
// solution exactly: the value system is factorized once and the derivative
// slots are obtained by resolving against differentiated right-hand sides.

#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "quatlike/jet.hpp"

namespace quatlike {

struct RankDeficientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
  double& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double operator()(int r, int c) const {
    return a[static_cast<size_t>(r) * cols + c];
  }
};

// Cholesky factorization of a symmetric positive-definite matrix.
// Fails with RankDeficientError when a pivot falls below
// rank_tol * (largest diagonal).
class CholFactor {
 public:
  void factor(Mat A, double rank_tol = 1e-12);
  std::vector<double> solve(std::span<const double> b) const;
  int n() const { return n_; }
  double pivot_ratio() const { return pivot_ratio_; }

 private:
  Mat l_;
  int n_ = 0;
  double pivot_ratio_ = 1.0;
};

// LU with partial pivoting (general square systems of doubles).
class LuFactor {
 public:
  void factor(Mat A, double rank_tol = 1e-13);
  std::vector<double> solve(std::span<const double> b) const;

 private:
  Mat lu_;
  std::vector<int> perm_;
  int n_ = 0;
};

// Dense least squares min ||A x - b|| via normal equations, doubles.
std::vector<double> lstsq(const Mat& A, std::span<const double> b,
                          double rank_tol = 1e-12, double* max_residual = nullptr);

// Jacobi eigendecomposition of a symmetric matrix (ascending eigenvalues).
struct SymEigen {
  std::vector<double> values;
  Mat vectors;  // columns are eigenvectors
};
SymEigen jacobi_eigen(Mat A);

// least squares through the eigendecomposition of A^T A: drops directions with
// eigenvalue below tol * λmax and reports how many were dropped
std::vector<double> lstsq_eigen(const Mat& A, std::span<const double> b,
                                double tol, int* null_dim,
                                double* max_residual = nullptr);

// Gaussian elimination with value-based partial pivoting over jets.
// A is n x n row-major, b is n x nrhs row-major. Chart-dimension scale only.
JetVec jet_solve_dense(JetVec A, JetVec b, int n, int nrhs);
JetVec jet_invert(const JetVec& A, int n);

// Sparse least-squares system with jet-valued coefficients.
//
// Rows are short (a handful of nonzeros); the normal equations are assembled
// at value level, factorized once, and d1 slots of the solution follow from
// differentiating A^T(b - A x) = 0. Result order is min(entry order, 1).
class SparseJetLsq {
 public:
  SparseJetLsq(int ncols, int dim, int order)
      : ncols_(ncols), dim_(dim), order_(order > 1 ? 1 : order) {}

  int add_row() {
    rows_.emplace_back();
    return static_cast<int>(rows_.size()) - 1;
  }
  void add_term(int row, int col, Jet a) {
    rows_[row].terms.emplace_back(col, std::move(a));
  }
  void set_rhs(int row, Jet b) { rows_[row].rhs = std::move(b); }

  struct Result {
    JetVec x;
    double max_residual = 0.0;   // max row residual of the value system
    double pivot_ratio = 1.0;    // smallest/largest Cholesky pivot
  };
  Result solve(double rank_tol = 1e-12) const;

 private:
  struct Row {
    std::vector<std::pair<int, Jet>> terms;
    Jet rhs;
  };
  int ncols_, dim_, order_;
  std::vector<Row> rows_;
};

}  // namespace quatlike
