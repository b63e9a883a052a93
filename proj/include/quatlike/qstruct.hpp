// Almost hypercomplex / quaternionic structures, integrability machinery,
// hermitian forms, and vielbeins with the symplectic reality apparatus.
//
// Conventions (fixed once, used everywhere):
//   * (1,1) tensors are stored as comp[X*n + Y] = J_X{}^Y; products chain as
//     (J^a J^b)_X{}^Z = J^a_X{}^W J^b_W{}^Z, and the quaternion algebra reads
//     J^a J^b = -δ^{ab} 1 + ε^{abc} J^c (so J^1 J^2 = J^3 as stored matrices).
//   * Vectors act by (Jv)^Y = v^X J_X{}^Y; one-forms by (J*ξ)_X = J_X{}^Y ξ_Y.
//   * Triplet index a runs 0..2; ε^{abc} is the Levi-Civita symbol.

#pragma once

#include <array>
#include <complex>
#include <optional>

#include "quatlike/fields.hpp"
#include "quatlike/jet.hpp"

namespace quatlike {

// Nijenhuis normalization: the diagonal tensor is N = c_N Σ_a N^{J^a}.
// The constant is pinned by requiring the quaternionic Nijenhuis form
// N_{XY}{}^Z = -1/2 J⃗_X{}^Z·ω⃗_Y + 1/2 J⃗_Y{}^Z·ω⃗_X to hold with the
// ω⃗ = -(1/6)(2A⃗_X + A⃗_Y × J⃗_X{}^Y) connection on lifted structures; a
// calibration test guards it.
inline constexpr double kNijenhuisNormalization = 1.0 / 12.0;

struct HypercomplexTriple {
  TensorField J;  // extra = 3, rank (1,1)
  int dim() const { return J.dim; }
};

// The standard constant structure on a dim-4r chart: block quaternion
// multiplication with signs arranged so the stored matrices multiply as
// J^1 J^2 = J^3. Layout [a][X*n+Y].
std::vector<double> standard_structure_values(int n);
HypercomplexTriple standard_structure(int n);

struct HermitianForm {
  TensorField h;  // rank (0,2), symmetric
  std::string signature;
};

// ---- pointwise structure values ---------------------------------------------

struct StructureVals {
  int n = 0;
  std::array<std::vector<double>, 3> J;  // J[a][X*n+Y]
};

StructureVals eval_structure(const TensorField& J3, std::span<const double> p);
std::array<JetVec, 3> eval_structure_jets(const TensorField& J3, const JetVec& x);
// seeds at order + J3.order_cost so the returned jets carry `order` exactly
std::array<JetVec, 3> structure_jets_at(const TensorField& J3,
                                        std::span<const double> p, int order);
StructureVals structure_values(const std::array<JetVec, 3>& Jjets, int n);

double quaternion_algebra_residual(const StructureVals& s);
double quaternion_algebra_residual(const HypercomplexTriple& H,
                                   std::span<const double> p);

double hermiticity_residual(std::span<const double> F, const StructureVals& s);
double hermiticity_residual(const TensorField& F, const HypercomplexTriple& H,
                            std::span<const double> p);

// ---- Nijenhuis tensors -------------------------------------------------------

// per-structure N^J(X,Y)^Z on coordinate fields, values at p
std::vector<double> nijenhuis(const TensorField& J, std::span<const double> p);

// diagonal tensor c_N Σ_a N^{J^a} as jets (one order below the input jets)
JetVec nijenhuis_diag_jets(const std::array<JetVec, 3>& Jjets, int n);
std::vector<double> nijenhuis_diag(const HypercomplexTriple& H,
                                   std::span<const double> p);

// least-squares solve of N_{XY}{}^Z = -1/2 J⃗_X{}^Z·ω⃗_Y + 1/2 J⃗_Y{}^Z·ω⃗_X
struct OmegaOpResult {
  std::array<JetVec, 3> omega;  // ω^a_X as jets
  double residual = 0.0;        // pattern residual; small iff quaternionic
};
OmegaOpResult extract_omega_op_jets(const std::array<JetVec, 3>& Jjets, int n);
OmegaOpResult extract_omega_op(const HypercomplexTriple& H,
                               std::span<const double> p);

// ---- complex jets and vielbeins ---------------------------------------------

struct CJet {
  Jet re, im;
  CJet() = default;
  CJet(Jet r, Jet i) : re(std::move(r)), im(std::move(i)) {}
  static CJet make(std::complex<double> c, int dim, int order) {
    return {Jet(c.real(), dim, order), Jet(c.imag(), dim, order)};
  }
  std::complex<double> value() const { return {re.value(), im.value()}; }
  CJet partial(int i) const { return {re.partial(i), im.partial(i)}; }

  friend CJet operator+(const CJet& a, const CJet& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend CJet operator-(const CJet& a, const CJet& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend CJet operator*(const CJet& a, const CJet& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend CJet operator*(const CJet& a, const Jet& s) {
    return {a.re * s, a.im * s};
  }
  friend CJet operator*(const CJet& a, double s) { return {a.re * s, a.im * s}; }
  friend CJet operator*(const CJet& a, std::complex<double> c) {
    return {a.re * c.real() - a.im * c.imag(), a.re * c.imag() + a.im * c.real()};
  }
  friend CJet conj(const CJet& a) { return {a.re, -a.im}; }
  CJet& operator+=(const CJet& b) {
    re += b.re;
    im += b.im;
    return *this;
  }
};

// Pauli matrices σ^a_i{}^j (row i, col j)
inline const std::complex<double> kSigma[3][2][2] = {
    {{{0, 0}, {1, 0}}, {{1, 0}, {0, 0}}},
    {{{0, 0}, {0, -1}}, {{0, 1}, {0, 0}}},
    {{{1, 0}, {0, 0}}, {{0, 0}, {-1, 0}}}};

// quaternionic frame pattern: f^flat_μ{}^{iα} = (A_μ)_{iα}/√2 with
// A = { 1, -iσ¹, +iσ², -iσ³ } (satisfies the symplectic reality condition
// with ρ the block ε, and reproduces the standard structure)
std::complex<double> flat_frame_entry(int mu, int i, int alpha);

// vielbein block at a point (or as jets): f[(X*2+i)*twoR + A] = f_X^{iA},
// finv[(Y*2+i)*twoR + A] = f^Y_{iA}
struct VielbeinJets {
  int n = 0;  // 4r
  std::vector<CJet> f, finv;
  int two_r() const { return n / 2; }
  const CJet& fXiA(int X, int i, int A) const {
    return f[(X * 2 + i) * two_r() + A];
  }
  const CJet& finvYiA(int Y, int i, int A) const {
    return finv[(Y * 2 + i) * two_r() + A];
  }
};

// symplectic matrices: ρ^{AB} block-diagonal ε over quaternionic pairs
std::vector<double> rho_matrix(int two_r);

// pointwise frame construction from the structure (quaternionic Gram-Schmidt);
// g (optional, n² jets) switches the projections to g-orthogonal
VielbeinJets frame_from_structure(const std::array<JetVec, 3>& Jjets, int n,
                                  const JetVec* g = nullptr);

// constant standard frame (block flat pattern), evaluated like x
VielbeinJets flat_vielbein(int n, int dim, int order);

// J^a_X{}^Y = -i σ^a_i{}^j f_X^{iA} f^Y_{jA}; imag_residual reports the
// largest non-cancelling imaginary part
std::array<JetVec, 3> j_from_vielbein(const VielbeinJets& vb,
                                      double* imag_residual = nullptr);

// L_W{}^Z{}_A{}^B = f^Z_{iA} f_W^{iB}, layout [((W*n+Z)*2r+A)*2r+B]
std::vector<CJet> l_tensor(const VielbeinJets& vb);

// residuals of the defining vielbein relations (inverse pair + reality)
double vielbein_invariants_residual(const VielbeinJets& vb);

}  // namespace quatlike
