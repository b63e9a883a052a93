// Analytic example manifolds with known properties: the flat pseudo
// hyper-Kähler cone in linear and adapted (curvilinear) coordinates, its
// projection to quaternionic hyperbolic space, ξ̂-deformed variants, the
// signature-flipped variant, the trivial flat baseline, and the symmetry
// generator lists. Everything downstream is tested against these entries.

#pragma once

#include "quatlike/confmap.hpp"

namespace quatlike {

enum class EntryKind { FlatCone, DeformedCone, RigidFlat };

struct CatalogEntry {
  EntryKind kind = EntryKind::FlatCone;
  std::string name;
  int n_h = 1;
  double sig = 1.0;   // +1: metric (-,-,-,-,+,...); -1: flipped (ν > 0 branch)
  uint64_t deform_seed = 0;

  Chart big_linear, big_adapted, small_chart;
  ChartMap adapted_to_linear;

  // linear-chart fields (flat cone, rigid flat)
  HypercomplexTriple J_linear;
  TensorField g_linear, k_linear;

  // adapted-chart fields (pullbacks through the cone chart)
  HypercomplexTriple J_adapted;
  TensorField g_adapted, k_adapted;
  bool has_adapted = false;
  bool has_metric = false;

  LiftData lift;            // section-read LiftData (or deformed variant)
  double z0_ref = 1.0;
  std::array<double, 3> z_ref{0.4, 0.7, 0.5};

  std::vector<std::string> gen_names;
  std::vector<std::vector<double>> gen_mats;  // big-linear generators P[M][X]
};

CatalogEntry flat_cone(int n_h, bool positive_nu = false);
CatalogEntry deformed_cone(const CatalogEntry& base, uint64_t seed,
                           double amplitude = 0.15);
CatalogEntry rigid_flat(int n);

CatalogEntry catalog_entry(const std::string& name, int n_h, uint64_t seed);

// linear vector field x ↦ P x as a tensor field on the given chart
TensorField linear_vector_field(int dim, std::vector<double> P);

// small-space projection of a big linear generator: the q-components and the
// rotation functions r⃗ read through the section
struct SmallGenerator {
  TensorField k;  // (1,0) on the small chart
  TensorField r;  // triplet of scalars
};
SmallGenerator project_generator(const CatalogEntry& e,
                                 const std::vector<double>& P);

// rotated-frame presentation of the small quaternionic space: the structure
// read along a q-dependent section. Genuinely quaternionic (nonzero Nijenhuis
// and SU(2) connection) while representing the same underlying space.
HypercomplexTriple rotated_small_structure(const CatalogEntry& e,
                                           uint64_t seed);

// big generator in adapted coordinates (pullback of the linear field)
TensorField adapted_generator(const CatalogEntry& e,
                              const std::vector<double>& P);

// catalog manifest with parameters and expected-value tables
std::string catalog_manifest_json();

}  // namespace quatlike
