#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stem/errors.hpp"

namespace stem::electromech {

inline constexpr double kGravity = 9.8; // m/s^2, the G unit used for accel output

enum class Mode { Blocked, Free };

// Calibrated lumped constants of the actuator. Defaults are the calibration
// output for the reference device's measurement set (see calibrate()).
struct LumpedParams {
    double R = 8.5714285714;  // Ohm, winding resistance (3 V / 0.35 A)
    double L = 3.30e-3;       // H, winding inductance
    double Km = 0.5226;       // N/A force constant = V s/m back-EMF constant
    double m_mov = 6.45e-4;   // kg, moving mass (magnet + pole piece)
    double k = 1004.3;        // N/m, diaphragm stiffness
    double c = 0.345;         // N s/m, suspension damping
    double preload = 0.050;   // N, blocked-mode contact preload
    double k_contact = 1.5e4; // N/m, load-cell/skin contact stiffness
    double c_contact = 306.8; // N s/m, contact interface damping (viscoelastic)
    double V_max = 7.0;       // V, drive ceiling
};

// Sampled drive voltage. Synthesized kinds keep their analytic form so the
// integrator can evaluate V(t) exactly between samples; arbitrary signals are
// interpolated linearly.
struct DriveSignal {
    enum class Kind { Step, Sine, Ramp, Impulse, Arbitrary };

    Kind kind = Kind::Arbitrary;
    double sample_rate = 0.0; // Hz
    std::vector<double> samples;

    double amplitude = 0.0; // step level / sine amplitude / ramp end / pulse level
    double frequency = 0.0; // Hz, sine only
    double pulse_width = 0.0; // s, impulse only

    static DriveSignal step(double level_v, double duration_s, double sample_rate_hz);
    static DriveSignal sine(double amplitude_v, double freq_hz, double duration_s,
                            double sample_rate_hz);
    static DriveSignal ramp(double end_v, double duration_s, double sample_rate_hz);
    static DriveSignal impulse(double level_v, double width_s, double duration_s,
                               double sample_rate_hz);
    static DriveSignal arbitrary(std::vector<double> samples_v, double sample_rate_hz);

    double duration() const { return samples.empty() ? 0.0 : samples.size() / sample_rate; }
    double value(double t) const;
};

// Integrator state; also usable as an initial condition and for resuming a
// simulation chunk by chunk.
struct SimState {
    double x = 0.0;       // m
    double v = 0.0;       // m/s
    double current = 0.0; // A
};

// Time series produced by simulate(). Rows are spaced dt_row seconds apart.
// Blocked mode reports the contact force channel, free mode the acceleration
// channel (in units of G = 9.8 m/s^2).
struct SimTrace {
    Mode mode = Mode::Blocked;
    double dt_row = 0.0;
    std::vector<double> time;      // s
    std::vector<double> x;         // m
    std::vector<double> v;         // m/s
    std::vector<double> current;   // A
    std::vector<double> f_contact; // N
    std::vector<double> accel_g;   // G
    SimState final_state;
};

struct ThermalParams {
    double R_th = 31.128; // K/W
    double C_th = 1.285;  // J/K  (tau = R_th * C_th = 40 s)
    double T_amb = 25.0;  // degC
};

/// Fixed-step RK4 integration of the coupled electrical/mechanical equations
///   L dI/dt = V(t) - R I - Km v
///   m dv/dt = Km I - k x - c v - F_contact
/// with x measured from the (preloaded) rest position. Blocked mode presses
/// the magnet on a contact spring/damper pair; lift-off occurs when the total
/// contact reaction would drop below zero. Throws InstabilityError if |x|
/// exceeds 5 mm. `store_stride` keeps every n-th step in the trace.
SimTrace simulate(const LumpedParams& p, const DriveSignal& s, Mode mode, double dt,
                  int store_stride = 1, const SimState& initial = {});

struct StepMetrics {
    double t90 = 0.0; // s, first crossing of 0.9 * F_ss
    double f_ss = 0.0; // N, mean of the final 10% window
};

/// Rise-time metrics of a blocked-mode step trace.
StepMetrics step_metrics(const SimTrace& trace);

struct FreqResponsePoint {
    double freq = 0.0;      // Hz
    double amplitude_v = 0.0; // V drive amplitude
    double response = 0.0;  // N (blocked) or G (free), half peak-to-peak, steady
};

/// Steady-state response amplitude per (drive amplitude, frequency) pair;
/// at least five transient periods (more when the envelope decays slowly)
/// are discarded and the last five periods measured.
std::vector<FreqResponsePoint> freq_sweep(const LumpedParams& p,
                                          const std::vector<double>& amplitudes_v,
                                          const std::vector<double>& freqs_hz, Mode mode);

struct PeakResponse {
    double freq = 0.0;
    double response = 0.0;
};

/// Locate the response peak near [f_lo, f_hi] by coarse sweep plus parabolic
/// refinement through the top three samples.
PeakResponse peak_response(const LumpedParams& p, double amplitude_v, double f_lo,
                           double f_hi, Mode mode, int coarse_points = 12);

struct AccelTarget {
    double freq = 0.0;    // Hz
    double accel_g = 0.0; // G
    bool floor_only = false; // one-sided: only penalize falling short
};

struct CalibrationTargets {
    std::optional<double> v_ref;   // V of the R-defining pair
    std::optional<double> i_ref;   // A of the R-defining pair
    std::optional<double> f_res;   // Hz, suspension resonance estimate
    std::optional<double> f_max;   // N, blocked steady force at v_max
    double v_max = 7.0;            // V
    std::optional<double> peak_accel_g; // G, sweep peak at v_accel
    double v_accel = 3.0;          // V
    std::optional<double> t90;     // s, blocked step rise time at v_max
    std::vector<AccelTarget> accel_points; // extra sweep shape targets

    /// The measurement set of the reference device.
    static CalibrationTargets reference_device();
};

struct CalibrationResidual {
    std::string name;
    double target = 0.0;
    double achieved = 0.0;
};

struct CalibrationResult {
    LumpedParams params;
    std::vector<CalibrationResidual> residuals;
    double rms = 0.0;  // rms of relative residuals (hinges excluded when met)
    std::string km_note; // DC-gain convention used for Km
};

struct CalibrationError : std::runtime_error {
    CalibrationError(const std::string& msg, CalibrationResult best_so_far)
        : std::runtime_error(msg), best(std::move(best_so_far)) {}
    CalibrationResult best;
};

/// Fit the lumped constants to a measurement set: R from the (V, I) pair,
/// k from m and f_res, Km from the blocked steady force, and (L, m_mov, c,
/// c_contact) by bounded derivative-free least squares on the simulated
/// metrics. When no t90 target is given the contact relaxation time falls
/// back to the declared 20 ms default instead of being fitted.
CalibrationResult calibrate(const CalibrationTargets& targets);

/// Integrate C_th dT/dt = I^2 R - (T - T_amb)/R_th over a sampled current
/// trace (spacing dt_s); exact per-interval exponential stepping. Returns one
/// temperature per sample, T(0) = T_amb.
std::vector<double> thermal_sim(const ThermalParams& tp, double R,
                                const std::vector<double>& current_a, double dt_s);

/// Solve R_th so that the declared reference drive (i_ref RMS sine into R)
/// reaches t_obs -> dT_obs, holding tau_th = R_th * C_th at 40 s.
ThermalParams thermal_fit(double R, double dT_obs = 15.0, double t_obs = 100.0,
                          double i_peak_ref = 0.35, double tau_th = 40.0,
                          double T_amb = 25.0);

} // namespace stem::electromech
