// Shared helpers for the test suites: random polynomial fields and
// finite-difference oracles kept independent of the jet evaluation path.

#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "quatlike/fields.hpp"
#include "quatlike/jet.hpp"

namespace quatlike::testutil {

// A multivariate polynomial with explicit monomials, evaluable both through
// jets and directly on doubles (the independent oracle path).
struct Poly {
  struct Term {
    double coef;
    std::vector<int> pow;  // one exponent per variable
  };
  int dim = 0;
  std::vector<Term> terms;

  double value(std::span<const double> p) const {
    double s = 0;
    for (const Term& t : terms) {
      double m = t.coef;
      for (int i = 0; i < dim; ++i)
        for (int k = 0; k < t.pow[i]; ++k) m *= p[i];
      s += m;
    }
    return s;
  }

  Jet eval(const JetVec& x) const {
    Jet s(0.0, x[0].dim(), x[0].order());
    for (const Term& t : terms) {
      Jet m(t.coef, x[0].dim(), x[0].order());
      for (int i = 0; i < dim; ++i)
        for (int k = 0; k < t.pow[i]; ++k) m = m * x[i];
      s += m;
    }
    return s;
  }
};

inline Poly random_poly(int dim, Pcg32& rng, int max_deg = 3, int nterms = 6) {
  Poly p;
  p.dim = dim;
  for (int t = 0; t < nterms; ++t) {
    Poly::Term term;
    term.coef = rng.uniform(-1.0, 1.0);
    term.pow.assign(dim, 0);
    int deg = static_cast<int>(rng.uniform(0.0, max_deg + 0.999));
    for (int d = 0; d < deg; ++d) {
      int v = static_cast<int>(rng.uniform(0.0, dim - 1e-9));
      term.pow[v] += 1;
    }
    p.terms.push_back(term);
  }
  return p;
}

// a smooth non-polynomial test function built over a random polynomial core
struct SmoothFn {
  Poly a, b;
  double value(std::span<const double> p) const {
    return std::sin(a.value(p)) + std::exp(0.3 * b.value(p)) +
           a.value(p) * b.value(p);
  }
  Jet eval(const JetVec& x) const {
    Jet u = a.eval(x), v = b.eval(x);
    return sin(u) + exp(0.3 * v) + u * v;
  }
};

// central finite differences of a double-valued function
inline double fd1(const std::function<double(std::span<const double>)>& f,
                  std::vector<double> p, int i, double h = 1e-5) {
  p[i] += h;
  double fp = f(p);
  p[i] -= 2 * h;
  double fm = f(p);
  return (fp - fm) / (2 * h);
}

inline double fd2(const std::function<double(std::span<const double>)>& f,
                  std::vector<double> p, int i, int j, double h = 1e-4) {
  if (i == j) {
    double f0 = f(p);
    p[i] += h;
    double fp = f(p);
    p[i] -= 2 * h;
    double fm = f(p);
    return (fp - 2 * f0 + fm) / (h * h);
  }
  std::vector<double> q = p;
  q[i] += h;
  q[j] += h;
  double fpp = f(q);
  q = p;
  q[i] += h;
  q[j] -= h;
  double fpm = f(q);
  q = p;
  q[i] -= h;
  q[j] += h;
  double fmp = f(q);
  q = p;
  q[i] -= h;
  q[j] -= h;
  double fmm = f(q);
  return (fpp - fpm - fmp + fmm) / (4 * h * h);
}

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace quatlike::testutil
