#include "stem/electromech.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "stem/simplex.hpp"

namespace stem::electromech {

namespace {

constexpr double kHardVoltageBound = 10.0; // V
constexpr double kDisplacementLimit = 5e-3; // m, model validity range
constexpr double kDefaultContactTau = 20e-3; // s, declared contact relaxation time

void check_samples(const std::vector<double>& samples, double sample_rate) {
    if (!(sample_rate > 0.0)) throw ValidityError("sample rate must be positive");
    if (samples.empty()) throw ValidityError("drive signal must contain samples");
    for (double s : samples) {
        if (!(std::abs(s) <= kHardVoltageBound)) {
            throw ValidityError("drive sample exceeds the 10 V hard bound");
        }
    }
}

std::vector<double> synth(double duration, double rate, const std::function<double(double)>& f) {
    const std::size_t n = std::size_t(std::llround(duration * rate));
    if (n == 0) throw ValidityError("drive duration shorter than one sample");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = f(double(i) / rate);
    return out;
}

} // namespace

DriveSignal DriveSignal::step(double level_v, double duration_s, double sample_rate_hz) {
    DriveSignal s;
    s.kind = Kind::Step;
    s.sample_rate = sample_rate_hz;
    s.amplitude = level_v;
    s.samples = synth(duration_s, sample_rate_hz, [&](double) { return level_v; });
    check_samples(s.samples, sample_rate_hz);
    return s;
}

DriveSignal DriveSignal::sine(double amplitude_v, double freq_hz, double duration_s,
                              double sample_rate_hz) {
    if (!(freq_hz > 0.0)) throw ValidityError("sine frequency must be positive");
    if (sample_rate_hz < 10.0 * freq_hz) {
        throw ValidityError("sample rate must be at least 10x the synthesized frequency");
    }
    DriveSignal s;
    s.kind = Kind::Sine;
    s.sample_rate = sample_rate_hz;
    s.amplitude = amplitude_v;
    s.frequency = freq_hz;
    s.samples = synth(duration_s, sample_rate_hz,
                      [&](double t) { return amplitude_v * std::sin(2.0 * M_PI * freq_hz * t); });
    check_samples(s.samples, sample_rate_hz);
    return s;
}

DriveSignal DriveSignal::ramp(double end_v, double duration_s, double sample_rate_hz) {
    DriveSignal s;
    s.kind = Kind::Ramp;
    s.sample_rate = sample_rate_hz;
    s.amplitude = end_v;
    s.samples = synth(duration_s, sample_rate_hz,
                      [&](double t) { return end_v * t / duration_s; });
    check_samples(s.samples, sample_rate_hz);
    return s;
}

DriveSignal DriveSignal::impulse(double level_v, double width_s, double duration_s,
                                 double sample_rate_hz) {
    if (!(width_s > 0.0)) throw ValidityError("impulse width must be positive");
    DriveSignal s;
    s.kind = Kind::Impulse;
    s.sample_rate = sample_rate_hz;
    s.amplitude = level_v;
    s.pulse_width = width_s;
    s.samples = synth(duration_s, sample_rate_hz,
                      [&](double t) { return t < width_s ? level_v : 0.0; });
    check_samples(s.samples, sample_rate_hz);
    return s;
}

DriveSignal DriveSignal::arbitrary(std::vector<double> samples_v, double sample_rate_hz) {
    check_samples(samples_v, sample_rate_hz);
    DriveSignal s;
    s.kind = Kind::Arbitrary;
    s.sample_rate = sample_rate_hz;
    s.samples = std::move(samples_v);
    return s;
}

double DriveSignal::value(double t) const {
    if (t < 0.0) return 0.0;
    switch (kind) {
        case Kind::Step:
            return amplitude;
        case Kind::Sine:
            return amplitude * std::sin(2.0 * M_PI * frequency * t);
        case Kind::Ramp: {
            const double dur = duration();
            return t >= dur ? amplitude : amplitude * t / dur;
        }
        case Kind::Impulse:
            return t < pulse_width ? amplitude : 0.0;
        case Kind::Arbitrary: {
            // zero-order hold, matching what a DAC does with the sample stream
            const std::size_t i = std::size_t(t * sample_rate);
            return i < samples.size() ? samples[i] : samples.back();
        }
    }
    return 0.0;
}

namespace {

using State = SimState;

struct Deriv {
    double dx, dv, di;
};

// Contact reaction in the preloaded-equilibrium frame: the spring/damper pair
// acts while the total normal reaction (preload + k_contact x) stays positive;
// past lift-off only the released preload remains.
inline double contact_force(const LumpedParams& p, double x, double v) {
    if (p.preload + p.k_contact * x > 0.0) return p.k_contact * x + p.c_contact * v;
    return -p.preload;
}

inline Deriv rhs(const LumpedParams& p, Mode mode, double volt, const State& s) {
    Deriv d;
    d.di = (volt - p.R * s.current - p.Km * s.v) / p.L;
    double f_ext = mode == Mode::Blocked ? contact_force(p, s.x, s.v) : 0.0;
    d.dv = (p.Km * s.current - p.k * s.x - p.c * s.v - f_ext) / p.m_mov;
    d.dx = s.v;
    return d;
}

void validate_dt(const LumpedParams& p, const DriveSignal& s, Mode mode, double dt) {
    if (!(dt > 0.0)) throw ValidityError("dt must be positive");
    const double nyq_bound = 0.1 / s.sample_rate; // 1/(20 * f_nyquist)
    if (dt > nyq_bound * (1.0 + 1e-9)) {
        throw ValidityError("dt must be at most 1/(20 * signal Nyquist frequency)");
    }
    const double mech_bound = 0.02 * std::sqrt(p.m_mov / p.k);
    if (dt > mech_bound * (1.0 + 1e-9)) {
        throw ValidityError("dt must be at most sqrt(m/k)/50");
    }
    const double elec_bound = 2.5 * p.L / p.R;
    if (dt > elec_bound) {
        throw ValidityError("dt too large for the electrical pole R/L (stability)");
    }
    if (mode == Mode::Blocked) {
        const double stiff_bound = 2.5 * p.m_mov / (p.c + p.c_contact);
        if (dt > stiff_bound) {
            throw ValidityError("dt too large for the blocked contact damping (stability)");
        }
    }
}

} // namespace

SimTrace simulate(const LumpedParams& p, const DriveSignal& s, Mode mode, double dt,
                  int store_stride, const SimState& initial) {
    validate_dt(p, s, mode, dt);
    if (store_stride < 1) throw ValidityError("store_stride must be >= 1");

    const double duration = s.duration();
    const long n_steps = std::lround(duration / dt);

    SimTrace trace;
    trace.mode = mode;
    trace.dt_row = dt * store_stride;
    const std::size_t rows = std::size_t(n_steps / store_stride) + 1;
    trace.time.reserve(rows);
    trace.x.reserve(rows);
    trace.v.reserve(rows);
    trace.current.reserve(rows);
    trace.f_contact.reserve(rows);
    trace.accel_g.reserve(rows);

    State y = initial;
    auto record = [&](double t, const State& st) {
        const Deriv d = rhs(p, mode, s.value(t), st);
        trace.time.push_back(t);
        trace.x.push_back(st.x);
        trace.v.push_back(st.v);
        trace.current.push_back(st.current);
        trace.f_contact.push_back(mode == Mode::Blocked ? p.k_contact * std::max(st.x, 0.0)
                                                        : 0.0);
        trace.accel_g.push_back(d.dv / kGravity);
    };

    record(0.0, y);
    for (long step = 0; step < n_steps; ++step) {
        const double t = step * dt;
        const Deriv k1 = rhs(p, mode, s.value(t), y);
        State y2{y.x + 0.5 * dt * k1.dx, y.v + 0.5 * dt * k1.dv, y.current + 0.5 * dt * k1.di};
        const Deriv k2 = rhs(p, mode, s.value(t + 0.5 * dt), y2);
        State y3{y.x + 0.5 * dt * k2.dx, y.v + 0.5 * dt * k2.dv, y.current + 0.5 * dt * k2.di};
        const Deriv k3 = rhs(p, mode, s.value(t + 0.5 * dt), y3);
        State y4{y.x + dt * k3.dx, y.v + dt * k3.dv, y.current + dt * k3.di};
        const Deriv k4 = rhs(p, mode, s.value(t + dt), y4);

        y.x += dt / 6.0 * (k1.dx + 2.0 * (k2.dx + k3.dx) + k4.dx);
        y.v += dt / 6.0 * (k1.dv + 2.0 * (k2.dv + k3.dv) + k4.dv);
        y.current += dt / 6.0 * (k1.di + 2.0 * (k2.di + k3.di) + k4.di);

        if (std::abs(y.x) > kDisplacementLimit || !std::isfinite(y.x)) {
            throw InstabilityError("displacement left the model validity range (|x| > 5 mm)");
        }
        if ((step + 1) % store_stride == 0) record((step + 1) * dt, y);
    }
    trace.final_state = y;
    return trace;
}

StepMetrics step_metrics(const SimTrace& trace) {
    if (trace.mode != Mode::Blocked) {
        throw ValidityError("step metrics require a blocked-mode trace");
    }
    const std::size_t n = trace.f_contact.size();
    if (n < 10) throw ValidityError("trace too short for step metrics");

    const std::size_t window = std::max<std::size_t>(1, n / 10);
    double sum = 0.0;
    for (std::size_t i = n - window; i < n; ++i) sum += trace.f_contact[i];

    StepMetrics m;
    m.f_ss = sum / double(window);
    const double threshold = 0.9 * m.f_ss;
    for (std::size_t i = 0; i < n; ++i) {
        if (trace.f_contact[i] >= threshold && m.f_ss > 0.0) {
            m.t90 = trace.time[i];
            return m;
        }
    }
    throw NoCrossingError("step response never crosses 90% of its steady value");
}

namespace {

// Half peak-to-peak of the trailing `periods` cycles of the mode's output
// channel.
double steady_amplitude(const SimTrace& trace, double freq, int periods) {
    const auto& ch = trace.mode == Mode::Blocked ? trace.f_contact : trace.accel_g;
    const double t_start = trace.time.back() - periods / freq;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < ch.size(); ++i) {
        if (trace.time[i] < t_start) continue;
        if (first) {
            lo = hi = ch[i];
            first = false;
        } else {
            lo = std::min(lo, ch[i]);
            hi = std::max(hi, ch[i]);
        }
    }
    return 0.5 * (hi - lo);
}

double response_at(const LumpedParams& p, double amplitude, double freq, Mode mode) {
    // transient: at least five periods, or eight envelope time constants
    const double c_env = p.c + p.Km * p.Km / p.R + (mode == Mode::Blocked ? p.c_contact : 0.0);
    const double tau_env = 2.0 * p.m_mov / c_env;
    const int trans = std::max(5, int(std::ceil(8.0 * tau_env * freq)));
    const double duration = (trans + 5) / freq;

    const double rate = std::max(20.0 * freq, 1000.0);
    double dt = std::min({0.1 / rate, 0.02 * std::sqrt(p.m_mov / p.k), 2.0 * p.L / p.R});
    if (mode == Mode::Blocked) dt = std::min(dt, 2.0 * p.m_mov / (p.c + p.c_contact));
    const long steps = std::lround(std::ceil(duration / dt));
    dt = duration / double(steps);

    DriveSignal s = DriveSignal::sine(amplitude, freq, duration, rate);
    SimTrace trace = simulate(p, s, mode, dt);
    return steady_amplitude(trace, freq, 5);
}

} // namespace

std::vector<FreqResponsePoint> freq_sweep(const LumpedParams& p,
                                          const std::vector<double>& amplitudes_v,
                                          const std::vector<double>& freqs_hz, Mode mode) {
    std::vector<FreqResponsePoint> table;
    table.reserve(amplitudes_v.size() * freqs_hz.size());
    for (double a : amplitudes_v) {
        for (double f : freqs_hz) {
            table.push_back({f, a, response_at(p, a, f, mode)});
        }
    }
    return table;
}

PeakResponse peak_response(const LumpedParams& p, double amplitude_v, double f_lo,
                           double f_hi, Mode mode, int coarse_points) {
    if (coarse_points < 3) coarse_points = 3;
    std::vector<double> freqs(coarse_points), resp(coarse_points);
    const double df = (f_hi - f_lo) / (coarse_points - 1);
    int best = 0;
    for (int i = 0; i < coarse_points; ++i) {
        freqs[i] = f_lo + i * df;
        resp[i] = response_at(p, amplitude_v, freqs[i], mode);
        if (resp[i] > resp[best]) best = i;
    }
    if (best == 0 || best == coarse_points - 1) return {freqs[best], resp[best]};

    // parabolic refinement through the top three samples
    const double y0 = resp[best - 1], y1 = resp[best], y2 = resp[best + 1];
    const double denom = y0 - 2.0 * y1 + y2;
    if (std::abs(denom) < 1e-30) return {freqs[best], resp[best]};
    const double shift = 0.5 * (y0 - y2) / denom;
    const double f_peak = freqs[best] + shift * df;
    const double a_peak = y1 - 0.25 * (y0 - y2) * shift;
    return {f_peak, a_peak};
}

CalibrationTargets CalibrationTargets::reference_device() {
    CalibrationTargets t;
    t.v_ref = 3.0;
    t.i_ref = 0.35;
    t.f_res = 210.0;
    t.f_max = 0.4;
    t.v_max = 7.0;
    t.peak_accel_g = 58.0;
    t.v_accel = 3.0;
    t.t90 = 44.6e-3;
    t.accel_points = {{40.0, 1.15, true}}; // "exceeds 1 G starting from 40 Hz"
    return t;
}

namespace {

struct FitSetup {
    double R = 0.0;
    const CalibrationTargets* targets = nullptr;
    bool fit_contact = false;
    bool fit_fn = false; // peak data available: natural freq participates in the fit
};

// The measured resonance is the argmax of an acceleration sweep, which sits
// above the undamped natural frequency at finite damping. k = m (2 pi f_res)^2
// seeds f_n; when sweep-peak data is among the targets, f_n is fitted so the
// simulated peak lands on the measured one.
LumpedParams realize(const FitSetup& fs, double m, double L, double c, double cc,
                     double f_n) {
    LumpedParams p; // defaults carry k_contact, preload, the non-fitted constants
    p.R = fs.R;
    p.V_max = fs.targets->v_max;
    p.m_mov = m;
    p.L = L;
    p.c = c;
    p.k = m * std::pow(2.0 * M_PI * f_n, 2.0);
    const double kappa = p.k_contact / (p.k + p.k_contact);
    p.Km = *fs.targets->f_max * p.R / (fs.targets->v_max * kappa);
    p.c_contact = fs.fit_contact
                      ? cc
                      : std::max(1.0, kDefaultContactTau * (p.k + p.k_contact) - c);
    return p;
}

double simulated_t90(const LumpedParams& p, double v_max) {
    const double duration = 0.25;
    const double rate = 2000.0;
    double dt = std::min({0.1 / rate, 2.0 * p.m_mov / (p.c + p.c_contact),
                          0.02 * std::sqrt(p.m_mov / p.k), 2.0 * p.L / p.R});
    const long steps = std::lround(std::ceil(duration / dt));
    dt = duration / double(steps);
    DriveSignal s = DriveSignal::step(v_max, duration, rate);
    SimTrace trace = simulate(p, s, Mode::Blocked, dt, 8);
    return step_metrics(trace).t90;
}

} // namespace

CalibrationResult calibrate(const CalibrationTargets& targets) {
    if (!targets.v_ref || !targets.i_ref) {
        throw ValidityError("calibration requires the R-defining (V, I) pair");
    }
    if (!targets.f_res) throw ValidityError("calibration requires an f_res target");
    if (!targets.f_max) throw ValidityError("calibration requires F_max at V_max");

    FitSetup fs;
    fs.R = *targets.v_ref / *targets.i_ref;
    fs.targets = &targets;
    fs.fit_contact = targets.t90.has_value();
    fs.fit_fn = targets.peak_accel_g.has_value();

    // bounds (log space): m in grams is bounded below by the magnet itself
    const double m_lo = 0.38e-3, m_hi = 1.5e-3;
    const double L_lo = 2e-4, L_hi = 5e-2;
    const double c_lo = 5e-3, c_hi = 5.0;
    const double fn_lo = 0.75 * *targets.f_res, fn_hi = 1.1 * *targets.f_res;
    const double cc_lo = 1.0, cc_hi = 3000.0;

    auto unpack = [&](const Eigen::VectorXd& x) {
        const double m = std::exp(x(0));
        const double L = std::exp(x(1));
        const double c = std::exp(x(2));
        int idx = 3;
        const double f_n = fs.fit_fn ? std::exp(x(idx++)) : *targets.f_res;
        const double cc = fs.fit_contact ? std::exp(x(idx)) : 0.0;
        return realize(fs, m, L, c, cc, f_n);
    };

    auto bound_penalty = [](double v, double lo, double hi) {
        double d = 0.0;
        if (v < lo) d = std::log(lo / v);
        if (v > hi) d = std::log(v / hi);
        return 1e4 * d * d;
    };

    auto residuals = [&](const LumpedParams& p, std::vector<CalibrationResidual>* report) {
        std::vector<double> r;
        if (targets.peak_accel_g) {
            const double f_n = std::sqrt(p.k / p.m_mov) / (2.0 * M_PI);
            PeakResponse pk = peak_response(p, targets.v_accel, 0.85 * f_n, 1.25 * f_n,
                                            Mode::Free, 9);
            r.push_back((pk.response - *targets.peak_accel_g) / *targets.peak_accel_g);
            r.push_back((pk.freq - *targets.f_res) / *targets.f_res);
            if (report) {
                report->push_back({"peak_accel_G", *targets.peak_accel_g, pk.response});
                report->push_back({"f_res_Hz", *targets.f_res, pk.freq});
            }
        }
        for (const AccelTarget& at : targets.accel_points) {
            const double a = response_at(p, targets.v_accel, at.freq, Mode::Free);
            if (at.floor_only) {
                r.push_back(std::max(0.0, (at.accel_g - a) / at.accel_g));
            } else {
                r.push_back((a - at.accel_g) / at.accel_g);
            }
            if (report) {
                report->push_back({"accel_G@" + std::to_string(int(at.freq)) + "Hz",
                                   at.accel_g, a});
            }
        }
        if (targets.t90) {
            const double t90 = simulated_t90(p, targets.v_max);
            r.push_back((t90 - *targets.t90) / *targets.t90);
            if (report) report->push_back({"t90_s", *targets.t90, t90});
        }
        return r;
    };

    auto cost = [&](const Eigen::VectorXd& x) {
        double penalty = bound_penalty(std::exp(x(0)), m_lo, m_hi) +
                         bound_penalty(std::exp(x(1)), L_lo, L_hi) +
                         bound_penalty(std::exp(x(2)), c_lo, c_hi);
        int idx = 3;
        if (fs.fit_fn) penalty += bound_penalty(std::exp(x(idx++)), fn_lo, fn_hi);
        if (fs.fit_contact) penalty += bound_penalty(std::exp(x(idx)), cc_lo, cc_hi);
        const LumpedParams p = unpack(x);
        double ss = 0.0;
        for (double ri : residuals(p, nullptr)) ss += ri * ri;
        return ss + penalty;
    };

    const int dim = 3 + (fs.fit_fn ? 1 : 0) + (fs.fit_contact ? 1 : 0);
    Eigen::VectorXd x0(dim), step(dim);
    x0(0) = std::log(0.6e-3);
    x0(1) = std::log(3.0e-3);
    x0(2) = std::log(0.33);
    {
        int idx = 3;
        if (fs.fit_fn) x0(idx++) = std::log(0.95 * *targets.f_res);
        if (fs.fit_contact) x0(idx) = std::log(320.0);
    }
    step.setConstant(0.18);

    SimplexOptions opts;
    opts.max_iter = 220;
    opts.x_tol = 1e-6;
    auto fit = nelder_mead(cost, x0, step, opts);
    // polish from the first optimum with a tighter simplex
    Eigen::VectorXd step2 = Eigen::VectorXd::Constant(dim, 0.03);
    auto polish = nelder_mead(cost, fit.x, step2, opts);
    if (polish.value < fit.value) fit = polish;

    CalibrationResult result;
    result.params = unpack(fit.x);
    auto final_res = residuals(result.params, &result.residuals);
    double ss = 0.0;
    for (double ri : final_res) ss += ri * ri;
    result.rms = final_res.empty() ? 0.0 : std::sqrt(ss / double(final_res.size()));
    {
        const double kappa = result.params.k_contact / (result.params.k + result.params.k_contact);
        std::ostringstream note;
        note << "Km = F_max*R/(V_max*kappa), kappa = " << kappa
             << "; DC gain Km*kappa*V/R reproduces the blocked steady force";
        result.km_note = note.str();
    }
    result.residuals.insert(result.residuals.begin(),
                            {"R_ohm", fs.R, result.params.R});

    if (result.rms > 0.25) {
        throw CalibrationError("calibration failed to converge (rms residual " +
                                   std::to_string(result.rms) + ")",
                               result);
    }
    return result;
}

std::vector<double> thermal_sim(const ThermalParams& tp, double R,
                                const std::vector<double>& current_a, double dt_s) {
    if (!(tp.R_th > 0.0) || !(tp.C_th > 0.0)) throw ValidityError("thermal constants must be positive");
    if (!(dt_s > 0.0)) throw ValidityError("thermal dt must be positive");

    std::vector<double> temp(current_a.size(), tp.T_amb);
    if (current_a.empty()) return temp;

    const double tau = tp.R_th * tp.C_th;
    const double decay = std::exp(-dt_s / tau);
    double T = tp.T_amb;
    for (std::size_t i = 0; i + 1 < current_a.size(); ++i) {
        // piecewise-constant power over the interval, exact exponential step
        const double p_avg = 0.5 * R * (current_a[i] * current_a[i] +
                                        current_a[i + 1] * current_a[i + 1]);
        const double T_ss = tp.T_amb + p_avg * tp.R_th;
        T = T_ss + (T - T_ss) * decay;
        temp[i + 1] = T;
    }
    return temp;
}

ThermalParams thermal_fit(double R, double dT_obs, double t_obs, double i_peak_ref,
                          double tau_th, double T_amb) {
    if (!(R > 0.0)) throw ValidityError("thermal_fit requires a calibrated R");
    const double p_rms = 0.5 * i_peak_ref * i_peak_ref * R; // (i/sqrt(2))^2 * R
    ThermalParams tp;
    tp.T_amb = T_amb;
    tp.R_th = dT_obs / (p_rms * (1.0 - std::exp(-t_obs / tau_th)));
    tp.C_th = tau_th / tp.R_th;
    return tp;
}

} // namespace stem::electromech
