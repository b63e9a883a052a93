// Affine, SU(2) and Gl(r,H) connections: pointwise linear solves for the
// Obata and Oproiu connections, ξ-transformations, Levi-Civita, covariant
// derivatives, and covariant-constancy certification of vielbeins.
//
// Connections are represented by their jets at the working point, so first
// derivatives of Γ (needed by curvature and symmetry checks) are exact.

#pragma once

#include <optional>

#include "quatlike/qstruct.hpp"

namespace quatlike {

struct ConnectionJets {
  int n = 0;
  JetVec gamma;                                // Γ_{XY}{}^Z at [(X*n+Y)*n+Z]
  std::optional<std::array<JetVec, 3>> omega;  // SU(2) connection ω^a_X
  double solve_residual = 0.0;  // residual of the defining linear system
  double pivot_ratio = 1.0;     // normal-equation pivot ratio (uniqueness)
};

// ∇T for small ranks; returns [X][T-indices...] jets (order drops by one)
JetVec covariant_derivative(const JetVec& gamma, const JetVec& T, int n,
                            int nup, int ndown);

// residual of ∇J⃗ + 2 ω⃗ × J⃗ = 0 (ω⃗ omitted: plain ∇J⃗ = 0), value level
double nabla_j_residual(const JetVec& gamma, const std::array<JetVec, 3>& Jjets,
                        const std::array<JetVec, 3>* omega, int n);

// unique torsionless solution of ∇J⃗ = 0 (least squares, rank-checked);
// residual above tolerance signals a nonzero Nijenhuis tensor
ConnectionJets obata(const std::array<JetVec, 3>& Jjets, int n);

// torsionless solution of ∇J⃗ + 2 ω⃗^Op × J⃗ = 0 with ω⃗^Op extracted from the
// Nijenhuis tensor
ConnectionJets oproiu(const std::array<JetVec, 3>& Jjets, int n);
ConnectionJets oproiu_with_omega(const std::array<JetVec, 3>& Jjets,
                                 const std::array<JetVec, 3>& omega, int n);

// Γ' = Γ + S^ξ, ω⃗' = ω⃗ + J⃗*ξ with
// S^ξ_{XY}{}^Z = ξ_X δ_Y^Z + ξ_Y δ_X^Z - (J⃗ξ)_X·J⃗_Y{}^Z - (J⃗ξ)_Y·J⃗_X{}^Z
ConnectionJets xi_transform(const ConnectionJets& c, const JetVec& xi,
                            const std::array<JetVec, 3>& Jjets);

// Christoffel symbols of g from its jets (order drops by one)
JetVec levi_civita(const JetVec& g, int n);

// Gl(r,H) connection from covariant constancy of the vielbein:
// ∂_X f_Y^{iA} - Γ_{XY}^Z f_Z^{iA} + f_Y^{jA} ω_{Xj}{}^i + f_Y^{iB} ω_{XB}{}^A = 0
// with ω_{Xi}{}^j = i σ⃗_i{}^j · ω⃗_X. Solved in closed form by vielbein
// contraction; residual certifies the covariant constancy.
struct GlConnection {
  std::vector<CJet> omega;  // ω_{X A}{}^B at [(X*2r + A)*2r + B]
  double residual = 0.0;
};
GlConnection gl_connection(const VielbeinJets& vb, const ConnectionJets& c);

}  // namespace quatlike
