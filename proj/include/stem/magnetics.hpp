#pragma once

#include <vector>

#include "stem/errors.hpp"

namespace stem::magnetics {

inline constexpr double kMu0 = 1.2566370614359172e-6; // 4*pi*1e-7, H/m

// Observation points closer than this to a filament are rejected as singular.
inline constexpr double kSingularGuard = 1e-9; // m

// One circular current filament, coaxial with z.
struct LoopSpec {
    double radius = 0.0;    // m
    double axial_pos = 0.0; // m
    double current = 0.0;   // A
};

// Wound coil occupying an annular cross-section, coaxial with z.
struct CoilSpec {
    double inner_radius = 3.0e-3; // m
    double width = 2.0e-3;        // m, radial build (w_coil)
    double thickness = 3.0e-3;    // m, axial extent
    int turns = 293;
    double axial_center = 0.0;    // m

    double outer_radius() const { return inner_radius + width; }
};

// Axially magnetized cylindrical magnet centered on the z axis.
struct MagnetSpec {
    double radius = 2.0e-3;       // m
    double height = 4.0e-3;       // m (h_mag)
    double magnetization = 8.75e5; // A/m, uniform axial (N42-grade ~1.1 T remanence)
    double density = 7500.0;      // kg/m^3
};

// Magnetorheological-elastomer diaphragm: CIP loading concentrates flux.
struct MreSpec {
    double cip_vol_fraction = 0.30; // dimensionless, [0, 0.4]
    double alpha = 2.0;             // flux-factor slope, >= 0
};

// Field sample in cylindrical components at (r, z).
struct FieldVector {
    double b_r = 0.0; // T
    double b_z = 0.0; // T
    double r = 0.0;   // m
    double z = 0.0;   // m
};

// Cross-section discretization for coil and magnet filament models.
struct FilamentGrid {
    int coil_radial = 8;
    int coil_axial = 8;
    int magnet_loops = 32;
};

/// Field of a single circular filament via the complete elliptic integral
/// closed form. On the axis the B_r component is identically zero and the
/// closed-form on-axis expression is used.
FieldVector loop_field(const LoopSpec& loop, double r, double z);

/// Superposition of an n_r x n_z filament discretization of the coil carrying
/// drive_current through every turn. Total ampere-turns = turns * drive_current.
FieldVector coil_field(const CoilSpec& coil, double drive_current, double r, double z,
                       int n_r = 8, int n_z = 8);

/// Equivalent surface-current model of the magnet: n filaments on the lateral
/// surface, summed currents exactly magnetization * height. `axial_offset`
/// places the magnet center relative to z = 0.
std::vector<LoopSpec> magnet_filaments(const MagnetSpec& magnet, int n,
                                       double axial_offset = 0.0);

/// Flux concentration factor of the MRE diaphragm: 1 + alpha * fraction.
double flux_factor(const MreSpec& mre);

/// Axial Lorentz force on the magnet (surface-current model) in the coil's
/// field, scaled by the MRE flux factor. Positive z points from the coil
/// center toward the skin; the sign follows the physical force for positive
/// drive current and positive magnetization.
double axial_force(const CoilSpec& coil, double drive_current, const MagnetSpec& magnet,
                   double axial_offset, const MreSpec& mre,
                   const FilamentGrid& grid = {});

struct ForceConstantSample {
    double offset = 0.0; // m, magnet center relative to coil center
    double km = 0.0;     // N/A at unit drive current
};

/// Force per ampere of drive current over a set of magnet offsets.
std::vector<ForceConstantSample> force_constant_profile(
    const CoilSpec& coil, const MagnetSpec& magnet, const MreSpec& mre,
    const std::vector<double>& offsets, const FilamentGrid& grid = {});

} // namespace stem::magnetics
