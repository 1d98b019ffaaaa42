#include "stem/magnetics.hpp"

#include <cmath>
#include <string>

namespace stem::magnetics {

namespace {

void check_loop(const LoopSpec& loop) {
    if (!(loop.radius > 0.0) || !std::isfinite(loop.radius) ||
        !std::isfinite(loop.axial_pos) || !std::isfinite(loop.current)) {
        throw ValidityError("loop filament requires finite fields and radius > 0");
    }
}

} // namespace

FieldVector loop_field(const LoopSpec& loop, double r, double z) {
    check_loop(loop);
    const double a = loop.radius;
    const double dz = z - loop.axial_pos;
    const double rr = std::abs(r);

    // Distance from the observation point to the filament ring.
    const double ring_dist = std::hypot(rr - a, dz);
    if (ring_dist < kSingularGuard) {
        throw SingularPointError("observation point lies on the filament (distance " +
                                 std::to_string(ring_dist) + " m)");
    }

    FieldVector f;
    f.r = r;
    f.z = z;

    if (rr < 1e-12 * a) {
        // On-axis closed form; B_r vanishes by axisymmetry.
        const double denom = std::pow(a * a + dz * dz, 1.5);
        f.b_r = 0.0;
        f.b_z = kMu0 * loop.current * a * a / (2.0 * denom);
        return f;
    }

    // Elliptic-integral closed form, e.g. Simpson et al., "Simple analytic
    // expressions for the magnetic field of a circular current loop".
    const double alpha2 = a * a + rr * rr + dz * dz - 2.0 * a * rr;
    const double beta2 = a * a + rr * rr + dz * dz + 2.0 * a * rr;
    const double beta = std::sqrt(beta2);
    const double k2 = 1.0 - alpha2 / beta2;
    const double k = std::sqrt(std::min(k2, 1.0));

    const double eK = std::comp_ellint_1(k);
    const double eE = std::comp_ellint_2(k);

    const double c = kMu0 * loop.current / M_PI;
    const double a2r2z2 = a * a + rr * rr + dz * dz;
    f.b_r = c * dz / (2.0 * alpha2 * beta * rr) * (a2r2z2 * eE - alpha2 * eK);
    f.b_z = c / (2.0 * alpha2 * beta) * ((a * a - rr * rr - dz * dz) * eE + alpha2 * eK);
    return f;
}

FieldVector coil_field(const CoilSpec& coil, double drive_current, double r, double z,
                       int n_r, int n_z) {
    if (n_r < 1 || n_z < 1) throw ValidityError("coil filament grid must be at least 1x1");
    if (coil.turns < 1) throw ValidityError("coil must have at least one turn");
    if (!(coil.width > 0.0) || !(coil.thickness > 0.0)) {
        throw ValidityError("coil width and thickness must be positive");
    }

    const double per_filament = coil.turns * drive_current / double(n_r * n_z);
    const double dr = coil.width / n_r;
    const double dzc = coil.thickness / n_z;
    const double z0 = coil.axial_center - 0.5 * coil.thickness;

    FieldVector total;
    total.r = r;
    total.z = z;
    for (int i = 0; i < n_r; ++i) {
        const double a = coil.inner_radius + (i + 0.5) * dr;
        for (int j = 0; j < n_z; ++j) {
            LoopSpec fil{a, z0 + (j + 0.5) * dzc, per_filament};
            FieldVector f = loop_field(fil, r, z);
            total.b_r += f.b_r;
            total.b_z += f.b_z;
        }
    }
    return total;
}

std::vector<LoopSpec> magnet_filaments(const MagnetSpec& magnet, int n, double axial_offset) {
    if (n < 1) throw ValidityError("magnet filament count must be >= 1");
    if (!(magnet.radius > 0.0) || !(magnet.height > 0.0) || !(magnet.magnetization > 0.0)) {
        throw ValidityError("magnet requires positive radius, height and magnetization");
    }
    // Sheet current K = M (A/m) on the lateral surface; each band carries M*h/n
    // so the filament currents sum to M*h exactly.
    std::vector<LoopSpec> loops;
    loops.reserve(n);
    const double band = magnet.height / n;
    const double z0 = axial_offset - 0.5 * magnet.height;
    for (int i = 0; i < n; ++i) {
        loops.push_back({magnet.radius, z0 + (i + 0.5) * band, magnet.magnetization * band});
    }
    return loops;
}

double flux_factor(const MreSpec& mre) {
    if (mre.cip_vol_fraction < 0.0 || mre.cip_vol_fraction > 0.4) {
        throw ValidityError("CIP volume fraction must lie in [0, 0.4]");
    }
    if (mre.alpha < 0.0) throw ValidityError("flux-factor slope must be >= 0");
    return 1.0 + mre.alpha * mre.cip_vol_fraction;
}

double axial_force(const CoilSpec& coil, double drive_current, const MagnetSpec& magnet,
                   double axial_offset, const MreSpec& mre, const FilamentGrid& grid) {
    const auto loops = magnet_filaments(magnet, grid.magnet_loops, axial_offset);
    // F_z on an azimuthal filament: dF = I dl x B gives -2*pi*r*I*B_r.
    double force = 0.0;
    for (const LoopSpec& loop : loops) {
        FieldVector f = coil_field(coil, drive_current, loop.radius, loop.axial_pos,
                                   grid.coil_radial, grid.coil_axial);
        force += -2.0 * M_PI * loop.radius * loop.current * f.b_r;
    }
    return force * flux_factor(mre);
}

std::vector<ForceConstantSample> force_constant_profile(
    const CoilSpec& coil, const MagnetSpec& magnet, const MreSpec& mre,
    const std::vector<double>& offsets, const FilamentGrid& grid) {
    std::vector<ForceConstantSample> table;
    table.reserve(offsets.size());
    for (double z : offsets) {
        table.push_back({z, axial_force(coil, 1.0, magnet, z, mre, grid)});
    }
    return table;
}

} // namespace stem::magnetics
