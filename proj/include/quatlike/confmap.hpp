// The conformal structure and the lift between quaternionic data and
// conformal hypercomplex cones: structure lift, cone metric, inverse
// projection, ξ̂-transformations, and the SU(2) gauge that brings the affine
// connection to Levi-Civita in the metric case.
//
// Big-chart coordinate layout (adapted coordinates): index 0 is z⁰, indices
// 1..3 are the SU(2) angles z^α, indices 4.. are the base coordinates q^X.

#pragma once

#include "quatlike/connections.hpp"

namespace quatlike {

struct LiftData {
  int n_h = 0;
  HypercomplexTriple J;  // structure on the 4 n_h chart
  TensorField A;         // triplet one-form A⃗_X (extra = 3, rank (0,1))
  TensorField h;         // symmetric bilinear form candidate (may be absent)
  bool has_h = false;
  TensorField k_alpha;   // k⃗^α(z): triplet of vectors on the 3-dim z chart
  // Triplet data is given in the frame of the reference section z = z_ref;
  // the lift co-rotates it along the SU(2) directions (the q-block of the
  // assembled structure rotates with the frame, matching L_k⃗ J⃗ = ε-rotation).
  std::array<double, 3> z_ref{0.4, 0.7, 0.5};

  int small_dim() const { return 4 * n_h; }
  int big_dim() const { return 4 + 4 * n_h; }
};

// k⃗^α of the standard cone frame on the exponential z-chart, and the scalar
// sign convention pinned by integrability of the lifted structure
inline constexpr double kSu2FrameSign = 1.0;
TensorField standard_su2_vectors_field();

// adjoint frame rotation O[a][b] = (w(z) e_a w(z)^{-1})^b on the z chart
std::array<std::array<Jet, 3>, 3> frame_rotation_of_angles(const JetVec& z);

// m⃗_α as jets from k⃗^α jets (3x3 inversion; k[a][alpha] layout)
std::array<std::array<Jet, 3>, 3> invert_k_alpha(
    const std::array<std::array<Jet, 3>, 3>& k);

// Ĵ assembled from LiftData exactly block by block; domain excludes z⁰ = 0
HypercomplexTriple lift_structure_field(const LiftData& L);

// cone metric; requires h
TensorField lift_metric_field(const LiftData& L);

// g = z⁰ h on the slice, with ν = -1/z⁰
TensorField small_metric_field(const LiftData& L, double z0);
inline double nu_of_slice(double z0) { return -1.0 / z0; }

// max |∇_X k^Y - (3/2) δ_X^Y|
double check_closed_homothetic(const ConnectionJets& c, const JetVec& kjets,
                               int n);

// k⃗ = (1/3) J⃗ k; off_residual reports components outside the z^α directions
struct Su2VectorsResult {
  std::array<std::vector<double>, 3> k;  // [a][big index]
  double off_residual = 0.0;
};
Su2VectorsResult su2_vectors(const StructureVals& Jhat,
                             std::span<const double> khat);

// integrability pair of the lift: the A⃗-curvature condition solved for a
// symmetric h (residual_A + extracted h + null-space dimension), and the
// quaternionicity of J against the closed-form SU(2) connection
// ω⃗^Op_X = -(1/6)(2A⃗_X + A⃗_Y × J⃗_X{}^Y)  (residual_quat)
struct LiftIntegrability {
  double residual_A = 0.0;
  std::vector<double> h;  // extracted symmetric h
  int null_dim = 0;
  double residual_quat = 0.0;
  std::array<std::vector<double>, 3> omega_op;  // the closed form, values
};
LiftIntegrability check_lift_integrability(const LiftData& L,
                                           std::span<const double> q);

// closed-form ω^Op jets from A and J jets
std::array<JetVec, 3> omega_op_from_a(const std::array<JetVec, 3>& Jjets,
                                      const std::array<JetVec, 3>& Ajets,
                                      int n);

// A⃗' = A⃗ + 2 J⃗*ξ̂; J and k⃗^α unchanged, h dropped (re-extract when needed)
LiftData xi_hat_transform(const LiftData& L, TensorField xihat);

// pointwise reads of the LiftData blocks from a big structure in adapted
// coordinates, with cross-block consistency certification
struct ProjectedPoint {
  double z0 = 0.0;
  std::array<std::vector<double>, 3> J;    // small-block values
  std::array<std::vector<double>, 3> A;    // [a][X]
  std::array<std::array<double, 3>, 3> k;  // k^{a,alpha}
  std::array<std::array<double, 3>, 3> m;  // m^a_alpha
  double cross_residual = 0.0;
  std::vector<double> h;  // from the metric blocks when supplied
  double metric_residual = 0.0;
};
// J and A reads are counter-rotated into the frame of the reference section
ProjectedPoint project(const StructureVals& Jhat,
                       const std::vector<double>* ghat,
                       std::span<const double> phat, int n_h,
                       std::array<double, 3> z_ref = {0.4, 0.7, 0.5});

// solve ω⃗^Op + J⃗*ξ = -1/2 A⃗ for ξ (jets); residual certifies reachability
struct GaugeResult {
  JetVec xi;
  double residual = 0.0;
};
GaugeResult choose_su2_gauge(const std::array<JetVec, 3>& Jjets,
                             const std::array<JetVec, 3>& omega_op,
                             const std::array<JetVec, 3>& Ajets, int n);

// ---- LiftData JSON (schema 1) -------------------------------------------------
// {"schema":1,"n_h":..,"J":"standard-constant"|{poly table},"A":table,
//  "h":table|null,"k_alpha":"su2-standard","z0_range":[lo,hi]}
struct LiftDataFile {
  LiftData data;
  double z0_lo = 0.5, z0_hi = 4.0;
};
LiftDataFile liftdata_from_json(const std::string& text);
std::string liftdata_schema_hint();

}  // namespace quatlike
