#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stem/magnetics.hpp"

namespace stem::design {

using magnetics::CoilSpec;
using magnetics::FilamentGrid;
using magnetics::MagnetSpec;
using magnetics::MreSpec;

// One candidate actuator design: the two free parameters of the objective.
struct DesignPoint {
    double h_mag = 4.0e-3;  // m
    double w_coil = 2.0e-3; // m
};

// Volume envelope of the assembled actuator (11 mm diameter x 6 mm thick
// device around a fixed 2 mm magnet radius and 3 mm coil build).
struct DesignEnvelope {
    double max_diameter = 11.0e-3;  // m
    double max_thickness = 6.0e-3;  // m
    double magnet_radius = 2.0e-3;  // m, fixed
    double coil_thickness = 3.0e-3; // m, fixed axial build
    double bore_gap = 1.0e-3;       // m, diaphragm wall between magnet and bore
    double pole_piece = 1.0e-3;     // m, ferromagnetic cap on the magnet top
    double encap_margin = 0.5e-3;   // m, silicone above and below the stack

    double coil_inner_radius() const { return magnet_radius + bore_gap; }

    bool feasible(const DesignPoint& dp) const {
        if (!(dp.h_mag > 0.0) || !(dp.w_coil > 0.0)) return false;
        const double outer_d = 2.0 * (coil_inner_radius() + dp.w_coil);
        const double stack =
            std::max(coil_thickness, dp.h_mag + pole_piece) + 2.0 * encap_margin;
        return outer_d <= max_diameter && stack <= max_thickness;
    }
};

struct WireSpec {
    double wire_diameter = 0.135e-3; // m
    double resistivity = 1.68e-8;    // Ohm*m, copper
    double fill_factor = 0.7;        // (0, 1]
};

struct DesignEvaluation {
    DesignPoint point;
    double force = 0.0;       // N
    double power = 0.0;       // W
    double magnet_mass = 0.0; // kg
    double objective = 0.0;   // N / sqrt(W * kg)
};

// Everything the objective evaluation needs besides the design point itself.
struct EvalContext {
    WireSpec wire;
    MreSpec mre;
    DesignEnvelope envelope;
    double drive_voltage = 3.0;    // V, fixed-voltage comparison across designs
    double magnetization = 8.75e5; // A/m
    double magnet_density = 7500.0; // kg/m^3
    FilamentGrid grid;
};

/// Number of turns that pack into the coil cross-section at the given fill.
int wire_turns(const CoilSpec& coil, const WireSpec& wire);

/// DC resistance of the packed winding at the mean radius.
double coil_resistance(const CoilSpec& coil, const WireSpec& wire);

double magnet_mass(const MagnetSpec& magnet);

/// The design objective F / sqrt(P * m).
double objective_value(double force, double power, double mass);

/// Magnet rest position used for all design-force evaluations: the pole-piece
/// face sits flush with the coil top, so the magnet top is one pole-piece
/// thickness below it.
double seated_offset(const DesignEnvelope& env, double h_mag);

/// Realize the design inside the envelope and score it at the context's
/// drive voltage. Throws InfeasibleDesignError outside the envelope.
DesignEvaluation evaluate_objective(const DesignPoint& dp, const EvalContext& ctx);

struct SweepRange {
    double lo = 0.0;
    double hi = 0.0;
};

struct SweepResult {
    std::vector<DesignEvaluation> evaluations; // feasible cells, row-major
    DesignEvaluation best;                     // argmax, lexicographic tie-break
    int grid_h = 0;
    int grid_w = 0;
};

using Evaluator = std::function<DesignEvaluation(const DesignPoint&)>;

/// Evaluate every feasible cell of an n_h x n_w grid (row-major: h outer,
/// w inner) with a caller-supplied evaluator. `feasible` gates cells before
/// evaluation. Ties on the objective break toward the lexicographically
/// smallest (h_mag, w_coil). threads = 0 picks the hardware default.
SweepResult grid_sweep(const SweepRange& h_range, const SweepRange& w_range,
                       int n_h, int n_w, const Evaluator& evaluator,
                       const std::function<bool(const DesignPoint&)>& feasible,
                       int threads = 0);

/// Grid sweep of the real design objective under `ctx`.
SweepResult grid_sweep(const SweepRange& h_range, const SweepRange& w_range,
                       int n_h, int n_w, const EvalContext& ctx, int threads = 0);

/// Local derivative-free polish of a feasible start; never returns a design
/// scoring below the start. Infeasible trial points are rejected by penalty.
DesignPoint refine(const DesignPoint& start, const Evaluator& evaluator,
                   const std::function<bool(const DesignPoint&)>& feasible);
DesignPoint refine(const DesignPoint& start, const EvalContext& ctx);

/// CSV export: header h_mag_mm,w_coil_mm,force_N,power_W,mass_kg,objective,
/// one row per feasible cell in row-major grid order.
void write_sweep_csv(const SweepResult& result, const std::string& path);

} // namespace stem::design
