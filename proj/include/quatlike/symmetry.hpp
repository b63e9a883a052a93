// Symmetries without metrics, quaternionic/triholomorphic classification,
// moment maps and their ξ-shifts, and the one-to-one lift/projection of
// symmetries through the cone.

#pragma once

#include "quatlike/confmap.hpp"
#include "quatlike/curvature.hpp"

namespace quatlike {

// max |∇_X ∇_Y k^Z - R_{XWY}{}^Z k^W| — the metric-free symmetry equation
double symmetry_residual(const ConnectionJets& c, const JetVec& kjets, int n);

// least-squares solve of L_k J⃗ = r⃗ × J⃗ for the rotation functions r⃗;
// residual certifies the quaternionic-symmetry property (r⃗ ≈ 0 means
// triholomorphic)
struct RotationResult {
  Triplet<double> r;
  double residual = 0.0;
};
RotationResult rotation_functions(const std::vector<double>& lie_J,
                                  const StructureVals& s);

// ν P⃗ = -1/2 r⃗ - ω⃗(k); undefined for ν = 0 (reported, not computed)
struct MomentMap {
  Triplet<double> P;
  bool defined = false;
};
MomentMap moment_map(const Triplet<double>& r,
                     const std::array<JetVec, 3>& omega,
                     std::span<const double> k, double nu, int n);

// ∇_X k^Y = ν J⃗_X{}^Y·P⃗ + L_X{}^Y{}_A{}^B t_{B}{}^A: closed-form projections
// onto the J⃗-span and L-span, with the reconstruction residual
struct DkDecomposition {
  Triplet<double> P;
  std::vector<std::complex<double>> t;  // t_B{}^A at [B*2r+A]
  double residual = 0.0;
};
DkDecomposition decompose_dk(const ConnectionJets& c, const JetVec& kjets,
                             const VielbeinJets& vb, const StructureVals& s,
                             double nu);

// ν P⃗' = ν P⃗ - ξ(J⃗ k); requires L_k ξ = 0 (checked by the caller through
// lie_derivative); also re-derivable from the ξ-transformed ω⃗
Triplet<double> xi_moment_shift(const Triplet<double>& P, const JetVec& xi,
                                std::span<const double> k,
                                const StructureVals& s, double nu);

// k̂⁰ = 0, k̂^α = k⃗^α · r⃗, k̂^X = k^X(q): the symmetry lift as a field on the
// big chart; r is a triplet scalar field on the small chart
TensorField lift_symmetry_field(const LiftData& L, TensorField k_small,
                                TensorField r_small);

// reads (k_I, r⃗_I) back from a big-space symmetry vector at a point
struct ProjectedSymmetry {
  std::vector<double> k;  // small components
  Triplet<double> r;
  double k0_residual = 0.0;  // |k̂⁰| (must vanish for liftable symmetries)
};
ProjectedSymmetry project_symmetry(std::span<const double> khat,
                                   const StructureVals& Jhat, int n_h,
                                   std::span<const double> phat,
                                   std::array<double, 3> z_ref);

}  // namespace quatlike
