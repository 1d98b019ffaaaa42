// stem_twin: command-line front end for the actuator digital twin. Every
// subcommand writes deterministic CSV (and optional SVG plots) so runs can be
// diffed byte for byte.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "stem/design.hpp"
#include "stem/device.hpp"
#include "stem/electromech.hpp"
#include "stem/magnetics.hpp"
#include "stem/params_io.hpp"
#include "stem/pose.hpp"
#include "stem/protocol.hpp"
#include "stem/renderer.hpp"
#include "stem/svg.hpp"
#include "stem/trace_io.hpp"

namespace em = stem::electromech;
namespace mag = stem::magnetics;

namespace {

int env_threads() {
    const char* env = std::getenv("STEM_TWIN_THREADS");
    if (!env) return 0;
    const int n = std::atoi(env);
    return n > 0 ? n : 0;
}

struct Splitmix {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    int range(int lo, int hi) { return lo + int(next() % std::uint64_t(hi - lo + 1)); }
};

std::FILE* open_out(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw stem::IoError("cannot open " + path + " for writing");
    return f;
}

em::LumpedParams load_lumped(const std::string& params_path, em::ThermalParams* thermal = nullptr) {
    if (params_path.empty()) {
        if (thermal) *thermal = em::ThermalParams{};
        return em::LumpedParams{};
    }
    auto pf = stem::params_io::load_params(params_path);
    if (thermal) *thermal = pf.thermal;
    return pf.lumped;
}

double auto_dt(const em::LumpedParams& p, double sample_rate, em::Mode mode) {
    double dt = std::min({0.1 / sample_rate, 0.02 * std::sqrt(p.m_mov / p.k),
                          2.0 * p.L / p.R});
    if (mode == em::Mode::Blocked) dt = std::min(dt, 2.0 * p.m_mov / (p.c + p.c_contact));
    return dt;
}

// ---------------------------------------------------------------- field ----

struct FieldOpts {
    bool single_loop = false;
    double loop_radius_mm = 5.0;
    double current = 1.0;
    double inner_radius_mm = 3.0;
    double width_mm = 2.0;
    double thickness_mm = 3.0;
    int turns = 293;
    double r0_mm = 0.0, r1_mm = 0.0;
    double z0_mm = -4.0, z1_mm = 4.0;
    int nr = 1, nz = 81;
    std::string out = "field.csv";
    std::string svg;
};

int run_field(const FieldOpts& o) {
    std::FILE* f = open_out(o.out);
    std::fputs("r_mm,z_mm,B_r_T,B_z_T\n", f);
    std::vector<double> zs, bz;
    for (int i = 0; i < o.nr; ++i) {
        const double r = (o.nr == 1) ? o.r0_mm
                                     : o.r0_mm + (o.r1_mm - o.r0_mm) * i / double(o.nr - 1);
        for (int j = 0; j < o.nz; ++j) {
            const double z = (o.nz == 1) ? o.z0_mm
                                         : o.z0_mm + (o.z1_mm - o.z0_mm) * j / double(o.nz - 1);
            mag::FieldVector fv;
            if (o.single_loop) {
                fv = mag::loop_field({o.loop_radius_mm * 1e-3, 0.0, o.current}, r * 1e-3,
                                     z * 1e-3);
            } else {
                mag::CoilSpec coil;
                coil.inner_radius = o.inner_radius_mm * 1e-3;
                coil.width = o.width_mm * 1e-3;
                coil.thickness = o.thickness_mm * 1e-3;
                coil.turns = o.turns;
                fv = mag::coil_field(coil, o.current, r * 1e-3, z * 1e-3);
            }
            std::fprintf(f, "%.10g,%.10g,%.10g,%.10g\n", r, z, fv.b_r, fv.b_z);
            if (o.nr == 1) {
                zs.push_back(z);
                bz.push_back(fv.b_z);
            }
        }
    }
    std::fclose(f);
    if (!o.svg.empty() && !zs.empty()) {
        stem::svg::write_line_chart(o.svg, "axial field profile", "z (mm)", "B_z (T)",
                                    {{"B_z", zs, bz}});
    }
    return 0;
}

// ---------------------------------------------------------------- sweep ----

struct SweepOpts {
    double h_lo_mm = 1.0, h_hi_mm = 6.0;
    double w_lo_mm = 0.5, w_hi_mm = 3.5;
    int nh = 21, nw = 21;
    double voltage = 3.0;
    std::string out = "sweep.csv";
    std::string svg;
    std::string best_out;
    bool refine_best = false;
};

int run_sweep(const SweepOpts& o) {
    stem::design::EvalContext ctx;
    ctx.drive_voltage = o.voltage;
    auto result = stem::design::grid_sweep({o.h_lo_mm * 1e-3, o.h_hi_mm * 1e-3},
                                           {o.w_lo_mm * 1e-3, o.w_hi_mm * 1e-3}, o.nh, o.nw,
                                           ctx, env_threads());
    stem::design::write_sweep_csv(result, o.out);

    stem::design::DesignPoint best = result.best.point;
    auto best_eval = result.best;
    if (o.refine_best) {
        best = stem::design::refine(best, ctx);
        best_eval = stem::design::evaluate_objective(best, ctx);
    }
    std::printf("best: h_mag_mm=%.10g w_coil_mm=%.10g objective=%.10g force_N=%.10g "
                "power_W=%.10g mass_kg=%.10g\n",
                best.h_mag * 1e3, best.w_coil * 1e3, best_eval.objective, best_eval.force,
                best_eval.power, best_eval.magnet_mass);
    if (!o.best_out.empty()) {
        std::FILE* f = open_out(o.best_out);
        std::fprintf(f, "h_mag_mm=%.10g\nw_coil_mm=%.10g\nobjective=%.10g\n"
                        "force_N=%.10g\npower_W=%.10g\nmass_kg=%.10g\n",
                     best.h_mag * 1e3, best.w_coil * 1e3, best_eval.objective, best_eval.force,
                     best_eval.power, best_eval.magnet_mass);
        std::fclose(f);
    }
    if (!o.svg.empty()) {
        // objective vs h_mag at the argmax coil width
        std::vector<double> hs, fs;
        for (const auto& ev : result.evaluations) {
            if (std::abs(ev.point.w_coil - result.best.point.w_coil) < 1e-12) {
                hs.push_back(ev.point.h_mag * 1e3);
                fs.push_back(ev.objective);
            }
        }
        stem::svg::write_line_chart(o.svg, "design objective at best coil width",
                                    "h_mag (mm)", "objective", {{"objective", hs, fs}});
    }
    return 0;
}

// ------------------------------------------------------------ calibrate ----

struct CalibrateOpts {
    double v_ref = 3.0, i_ref = 0.35;
    double f_res = 210.0, f_max = 0.4, v_max = 7.0;
    double peak_accel_g = 58.0, v_accel = 3.0;
    double t90_ms = 44.6;
    bool skip_t90 = false;
    double accel_floor_g = 1.15, accel_floor_hz = 40.0;
    std::string out = "params.txt";
};

int run_calibrate(const CalibrateOpts& o) {
    em::CalibrationTargets t;
    t.v_ref = o.v_ref;
    t.i_ref = o.i_ref;
    t.f_res = o.f_res;
    t.f_max = o.f_max;
    t.v_max = o.v_max;
    t.peak_accel_g = o.peak_accel_g;
    t.v_accel = o.v_accel;
    if (!o.skip_t90) t.t90 = o.t90_ms * 1e-3;
    t.accel_points = {{o.accel_floor_hz, o.accel_floor_g, true}};

    auto result = em::calibrate(t);
    stem::params_io::ParamsFile pf;
    pf.lumped = result.params;
    pf.thermal = em::thermal_fit(result.params.R);
    stem::params_io::save_params(pf, o.out, "calibrated actuator parameters");

    std::printf("calibration residuals (rms %.6g):\n", result.rms);
    for (const auto& r : result.residuals) {
        std::printf("  %-16s target %-12.6g achieved %-12.6g\n", r.name.c_str(), r.target,
                    r.achieved);
    }
    std::printf("note: %s\n", result.km_note.c_str());
    std::printf("wrote %s\n", o.out.c_str());
    return 0;
}

// ------------------------------------------------------------- simulate ----

struct SimulateOpts {
    std::string params;
    std::string signal = "step";
    double amplitude = 7.0;
    double freq = 100.0;
    double pulse_ms = 5.0;
    double duration = 0.25;
    double rate = 2000.0;
    double dt = 0.0; // 0: auto
    int stride = 8;
    std::string mode = "blocked";
    std::string out = "trace.csv";
    std::string svg;
};

int run_simulate(const SimulateOpts& o) {
    em::LumpedParams p = load_lumped(o.params);
    const em::Mode mode = o.mode == "free" ? em::Mode::Free : em::Mode::Blocked;

    em::DriveSignal s = [&] {
        if (o.signal == "sine") return em::DriveSignal::sine(o.amplitude, o.freq, o.duration, o.rate);
        if (o.signal == "ramp") return em::DriveSignal::ramp(o.amplitude, o.duration, o.rate);
        if (o.signal == "impulse")
            return em::DriveSignal::impulse(o.amplitude, o.pulse_ms * 1e-3, o.duration, o.rate);
        return em::DriveSignal::step(o.amplitude, o.duration, o.rate);
    }();

    double dt = o.dt > 0.0 ? o.dt : auto_dt(p, o.rate, mode);
    const long steps = std::lround(std::ceil(o.duration / dt));
    dt = o.duration / double(steps);

    auto trace = em::simulate(p, s, mode, dt, o.stride);
    stem::trace_io::write_trace(trace, o.out);
    std::printf("wrote %s (%zu rows, dt_row %.6g s)\n", o.out.c_str(), trace.time.size(),
                trace.dt_row);

    if (o.signal == "step" && mode == em::Mode::Blocked) {
        auto m = em::step_metrics(trace);
        std::printf("step metrics: t90=%.10g ms F_ss=%.10g N\n", m.t90 * 1e3, m.f_ss);
    }
    if (!o.svg.empty()) {
        const auto& y = mode == em::Mode::Blocked ? trace.f_contact : trace.accel_g;
        stem::svg::write_line_chart(o.svg, "simulated response", "t (s)",
                                    mode == em::Mode::Blocked ? "F (N)" : "accel (G)",
                                    {{o.signal, trace.time, y}});
    }
    return 0;
}

// ----------------------------------------------------------------- freq ----

struct FreqOpts {
    std::string params;
    std::vector<double> amplitudes;
    double f_lo = 40.0, f_hi = 300.0, f_step = 5.0;
    std::string mode = "free";
    std::string out = "freq.csv";
    std::string svg;
};

int run_freq(const FreqOpts& o) {
    em::LumpedParams p = load_lumped(o.params);
    const em::Mode mode = o.mode == "blocked" ? em::Mode::Blocked : em::Mode::Free;
    std::vector<double> amps = o.amplitudes.empty() ? std::vector<double>{3.0} : o.amplitudes;
    std::vector<double> freqs;
    for (double f = o.f_lo; f <= o.f_hi + 1e-9; f += o.f_step) freqs.push_back(f);

    auto table = em::freq_sweep(p, amps, freqs, mode);
    std::FILE* f = open_out(o.out);
    std::fputs("f_hz,amplitude_v,response\n", f);
    for (const auto& pt : table) {
        std::fprintf(f, "%.10g,%.10g,%.10g\n", pt.freq, pt.amplitude_v, pt.response);
    }
    std::fclose(f);

    const em::FreqResponsePoint* best = &table.front();
    for (const auto& pt : table) {
        if (pt.response > best->response) best = &pt;
    }
    std::printf("peak response %.10g at %.10g Hz (amplitude %.10g V)\n", best->response,
                best->freq, best->amplitude_v);

    if (!o.svg.empty()) {
        std::vector<stem::svg::Series> series;
        for (double a : amps) {
            stem::svg::Series s;
            s.label = std::to_string(a) + " V";
            for (const auto& pt : table) {
                if (pt.amplitude_v == a) {
                    s.x.push_back(pt.freq);
                    s.y.push_back(pt.response);
                }
            }
            series.push_back(std::move(s));
        }
        stem::svg::write_line_chart(o.svg, "frequency response", "f (Hz)",
                                    mode == em::Mode::Blocked ? "force (N)" : "accel (G)",
                                    series);
    }
    return 0;
}

// -------------------------------------------------------------- thermal ----

struct ThermalOpts {
    std::string params;
    double amplitude = 3.0;
    double freq = 100.0;
    double duration = 100.0;
    double cooldown = 0.0;
    std::string out = "thermal.csv";
    std::string svg;
};

int run_thermal(const ThermalOpts& o) {
    em::ThermalParams tp;
    em::LumpedParams p = load_lumped(o.params, &tp);
    if (o.params.empty()) tp = em::thermal_fit(p.R);

    const double rate = std::max(20.0 * o.freq, 1000.0);
    double dt = auto_dt(p, rate, em::Mode::Blocked);
    const double total = o.duration + o.cooldown;
    const long steps = std::lround(std::ceil(total / dt));
    dt = total / double(steps);

    std::vector<double> volts(std::size_t(std::llround(total * rate)));
    for (std::size_t i = 0; i < volts.size(); ++i) {
        const double t = double(i) / rate;
        volts[i] = t < o.duration ? o.amplitude * std::sin(2.0 * M_PI * o.freq * t) : 0.0;
    }
    auto drive = em::DriveSignal::arbitrary(std::move(volts), rate);

    const int stride = std::max(1, int(std::llround(1e-3 / dt))); // ~1 kHz rows
    auto trace = em::simulate(p, drive, em::Mode::Blocked, dt, stride);
    auto temps = em::thermal_sim(tp, p.R, trace.current, trace.dt_row);

    std::FILE* f = open_out(o.out);
    std::fputs("t_s,T_C\n", f);
    for (std::size_t i = 0; i < temps.size(); ++i) {
        std::fprintf(f, "%.10g,%.10g\n", trace.time[i], temps[i]);
    }
    std::fclose(f);
    std::printf("T(%.10g s) = %.10g C (R_th %.6g K/W, C_th %.6g J/K)\n", o.duration,
                temps[std::size_t(std::llround(o.duration / trace.dt_row))], tp.R_th, tp.C_th);
    if (!o.svg.empty()) {
        stem::svg::write_line_chart(o.svg, "coil self-heating", "t (s)", "T (degC)",
                                    {{"T", trace.time, temps}});
    }
    return 0;
}

// --------------------------------------------------------------- replay ----

struct ReplayOpts {
    std::string scene;
    std::string pose;
    std::string params;
    std::string finger;
    double tick_rate = 1000.0;
    std::string out_commands = "commands.csv";
    std::string out_telemetry = "telemetry.csv";
    std::string frames_out;
    bool compare_batch = false;
};

int run_replay(const ReplayOpts& o) {
    em::ThermalParams tp;
    em::LumpedParams p = load_lumped(o.params, &tp);
    if (o.params.empty()) tp = em::thermal_fit(p.R);
    auto scene = stem::renderer::load_scene(o.scene);
    auto records = stem::pose::load_pose_csv(o.pose);
    if (records.empty()) throw stem::IoError("pose file contains no records");

    std::string finger = o.finger.empty() ? records.front().finger : o.finger;
    std::vector<stem::pose::PoseRecord> track;
    for (const auto& r : records) {
        if (r.finger == finger) track.push_back(r);
    }
    if (track.empty()) throw stem::IoError("no pose records for finger '" + finger + "'");

    stem::renderer::RenderSession session(scene, p, o.tick_rate);
    stem::device::SimulatedDevice dev(p, tp, o.tick_rate);

    const double t_end = double(track.back().t_ms) * 1e-3;
    const long n_ticks = std::lround(t_end * o.tick_rate) + 1;

    auto tip_at = [&](double t_ms) {
        // piecewise-linear pose interpolation
        if (t_ms <= double(track.front().t_ms)) {
            return Eigen::Vector3d(track.front().x, track.front().y, track.front().z);
        }
        for (std::size_t i = 1; i < track.size(); ++i) {
            if (double(track[i].t_ms) >= t_ms) {
                const auto& a = track[i - 1];
                const auto& b = track[i];
                const double span = double(b.t_ms - a.t_ms);
                const double w = span > 0.0 ? (t_ms - double(a.t_ms)) / span : 1.0;
                return Eigen::Vector3d(a.x + w * (b.x - a.x), a.y + w * (b.y - a.y),
                                       a.z + w * (b.z - a.z));
            }
        }
        return Eigen::Vector3d(track.back().x, track.back().y, track.back().z);
    };

    std::FILE* cmd_f = open_out(o.out_commands);
    std::fputs("tick,t_s,voltage_V,saturated,governor_gain\n", cmd_f);

    std::FILE* frames_f = o.frames_out.empty() ? nullptr : open_out(o.frames_out);

    stem::protocol::StreamDecoder decoder;
    std::vector<stem::protocol::TelemetryFrame> telemetry;
    std::vector<std::int16_t> pending;
    std::vector<double> all_volts;
    std::uint8_t seq = 0;

    auto flush_pending = [&] {
        if (pending.empty()) return;
        stem::protocol::DeviceFrame frame;
        frame.seq = seq++;
        frame.samples_mv = pending;
        pending.clear();
        auto bytes = stem::protocol::encode_frame(frame);
        if (frames_f) std::fwrite(bytes.data(), 1, bytes.size(), frames_f);
        decoder.feed({bytes.data(), bytes.size()});
        for (const auto& decoded : decoder.take_frames()) {
            for (const auto& t : dev.feed(decoded)) telemetry.push_back(t);
        }
    };

    for (long tick = 0; tick < n_ticks; ++tick) {
        const double t = double(tick) / o.tick_rate;
        auto cmd = session.tick(tip_at(t * 1e3));
        std::fprintf(cmd_f, "%ld,%.10g,%.10g,%d,%.10g\n", tick, t, cmd.voltage,
                     cmd.saturated ? 1 : 0, cmd.governor_gain);
        all_volts.push_back(cmd.voltage);
        pending.push_back(std::int16_t(std::clamp(std::lround(cmd.voltage * 1e3),
                                                  long(-10000), long(10000))));
        if (pending.size() == stem::protocol::kMaxSamples) flush_pending();
    }
    flush_pending();
    std::fclose(cmd_f);
    if (frames_f) std::fclose(frames_f);

    std::FILE* telem_f = open_out(o.out_telemetry);
    std::fputs("t_ms,force_mN,temp_centi_C\n", telem_f);
    for (const auto& t : telemetry) {
        std::fprintf(telem_f, "%u,%d,%d\n", t.t_ms, t.force_mn, t.temp_centi_c);
    }
    std::fclose(telem_f);
    std::printf("replayed %ld ticks, %zu telemetry frames\n", n_ticks, telemetry.size());

    if (o.compare_batch && !all_volts.empty()) {
        auto drive = em::DriveSignal::arbitrary(all_volts, o.tick_rate);
        auto batch = em::simulate(p, drive, em::Mode::Blocked, dev.dt(),
                                  int(std::llround(1e-3 / dev.dt())));
        double worst = 0.0;
        for (const auto& t : telemetry) {
            const std::size_t row = std::size_t(t.t_ms); // 1 kHz rows
            if (row >= batch.f_contact.size()) break;
            const double dev_f = t.force_mn / 1000.0;
            const double batch_f = batch.f_contact[row];
            worst = std::max(worst, std::abs(dev_f - batch_f));
        }
        std::printf("max |incremental - batch| force difference: %.10g N\n", worst);
    }
    return 0;
}

// -------------------------------------------------------- protocol-echo ----

struct EchoOpts {
    std::string in;
    int random_frames = 0;
    std::uint64_t seed = 1;
    std::string out;
};

int run_echo(const EchoOpts& o) {
    std::vector<std::uint8_t> input;
    if (o.random_frames > 0) {
        Splitmix rng{o.seed};
        for (int i = 0; i < o.random_frames; ++i) {
            stem::protocol::DeviceFrame f;
            f.seq = std::uint8_t(rng.range(0, 255));
            const int count = rng.range(1, 32);
            for (int s = 0; s < count; ++s) {
                f.samples_mv.push_back(std::int16_t(rng.range(-10000, 10000)));
            }
            auto bytes = stem::protocol::encode_frame(f);
            input.insert(input.end(), bytes.begin(), bytes.end());
        }
    } else if (!o.in.empty()) {
        std::FILE* f = std::fopen(o.in.c_str(), "rb");
        if (!f) throw stem::IoError("cannot open " + o.in);
        std::uint8_t buf[4096];
        std::size_t n;
        while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) input.insert(input.end(), buf, buf + n);
        std::fclose(f);
    } else {
        throw stem::IoError("protocol-echo needs --in or --random");
    }

    stem::protocol::StreamDecoder dec;
    dec.feed({input.data(), input.size()});
    dec.finish();
    auto frames = dec.take_frames();

    if (!o.out.empty()) {
        std::FILE* f = std::fopen(o.out.c_str(), "wb");
        if (!f) throw stem::IoError("cannot open " + o.out + " for writing");
        for (const auto& frame : frames) {
            auto bytes = stem::protocol::encode_frame(frame);
            std::fwrite(bytes.data(), 1, bytes.size(), f);
        }
        std::fclose(f);
    }
    const auto& st = dec.stats();
    std::printf("frames=%llu crc_errors=%llu bad_counts=%llu bytes_skipped=%llu pending=%zu\n",
                (unsigned long long)st.frames, (unsigned long long)st.crc_errors,
                (unsigned long long)st.bad_counts, (unsigned long long)st.bytes_skipped,
                dec.pending_bytes());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stem_twin: digital twin of a finger-worn electromagnetic tactile actuator"};
    app.set_config("--config", "", "flat key=value configuration file");
    app.require_subcommand(0, 1);

    FieldOpts field;
    auto* cmd_field = app.add_subcommand("field", "evaluate loop/coil magnetic fields");
    cmd_field->add_flag("--loop", field.single_loop, "single filament instead of the coil");
    cmd_field->add_option("--radius-mm", field.loop_radius_mm, "loop radius");
    cmd_field->add_option("--current", field.current, "drive current (A)");
    cmd_field->add_option("--inner-radius-mm", field.inner_radius_mm);
    cmd_field->add_option("--width-mm", field.width_mm);
    cmd_field->add_option("--thickness-mm", field.thickness_mm);
    cmd_field->add_option("--turns", field.turns)->check(CLI::PositiveNumber);
    cmd_field->add_option("--r0-mm", field.r0_mm);
    cmd_field->add_option("--r1-mm", field.r1_mm);
    cmd_field->add_option("--z0-mm", field.z0_mm);
    cmd_field->add_option("--z1-mm", field.z1_mm);
    cmd_field->add_option("--nr", field.nr)->check(CLI::PositiveNumber);
    cmd_field->add_option("--nz", field.nz)->check(CLI::PositiveNumber);
    cmd_field->add_option("-o,--out", field.out);
    cmd_field->add_option("--svg", field.svg);

    SweepOpts sweep;
    auto* cmd_sweep = app.add_subcommand("sweep", "grid sweep of the design objective");
    cmd_sweep->add_option("--h-lo-mm", sweep.h_lo_mm);
    cmd_sweep->add_option("--h-hi-mm", sweep.h_hi_mm);
    cmd_sweep->add_option("--w-lo-mm", sweep.w_lo_mm);
    cmd_sweep->add_option("--w-hi-mm", sweep.w_hi_mm);
    cmd_sweep->add_option("--nh", sweep.nh)->check(CLI::Range(2, 501));
    cmd_sweep->add_option("--nw", sweep.nw)->check(CLI::Range(2, 501));
    cmd_sweep->add_option("--voltage", sweep.voltage)->check(CLI::PositiveNumber);
    cmd_sweep->add_option("-o,--out", sweep.out);
    cmd_sweep->add_option("--best-out", sweep.best_out);
    cmd_sweep->add_option("--svg", sweep.svg);

    SweepOpts optimize = sweep;
    auto* cmd_opt = app.add_subcommand("optimize", "sweep plus local refinement");
    cmd_opt->add_option("--h-lo-mm", optimize.h_lo_mm);
    cmd_opt->add_option("--h-hi-mm", optimize.h_hi_mm);
    cmd_opt->add_option("--w-lo-mm", optimize.w_lo_mm);
    cmd_opt->add_option("--w-hi-mm", optimize.w_hi_mm);
    cmd_opt->add_option("--nh", optimize.nh)->check(CLI::Range(2, 501));
    cmd_opt->add_option("--nw", optimize.nw)->check(CLI::Range(2, 501));
    cmd_opt->add_option("--voltage", optimize.voltage)->check(CLI::PositiveNumber);
    cmd_opt->add_option("-o,--out", optimize.out);
    cmd_opt->add_option("--best-out", optimize.best_out);
    cmd_opt->add_option("--svg", optimize.svg);

    CalibrateOpts cal;
    auto* cmd_cal = app.add_subcommand("calibrate", "fit lumped parameters to measurements");
    cmd_cal->add_option("--v-ref", cal.v_ref)->check(CLI::PositiveNumber);
    cmd_cal->add_option("--i-ref", cal.i_ref)->check(CLI::PositiveNumber);
    cmd_cal->add_option("--f-res", cal.f_res)->check(CLI::PositiveNumber);
    cmd_cal->add_option("--f-max", cal.f_max)->check(CLI::PositiveNumber);
    cmd_cal->add_option("--v-max", cal.v_max)->check(CLI::PositiveNumber);
    cmd_cal->add_option("--peak-accel-g", cal.peak_accel_g)->check(CLI::PositiveNumber);
    cmd_cal->add_option("--v-accel", cal.v_accel)->check(CLI::PositiveNumber);
    cmd_cal->add_option("--t90-ms", cal.t90_ms)->check(CLI::PositiveNumber);
    cmd_cal->add_flag("--skip-t90", cal.skip_t90, "calibrate without the t90 target");
    cmd_cal->add_option("-o,--out", cal.out);

    SimulateOpts sim;
    auto* cmd_sim = app.add_subcommand("simulate", "time-domain simulation of one drive");
    cmd_sim->add_option("--params", sim.params);
    cmd_sim->add_option("--signal", sim.signal)
        ->check(CLI::IsMember({"step", "sine", "ramp", "impulse"}));
    cmd_sim->add_option("--amplitude", sim.amplitude);
    cmd_sim->add_option("--freq", sim.freq)->check(CLI::PositiveNumber);
    cmd_sim->add_option("--pulse-ms", sim.pulse_ms)->check(CLI::PositiveNumber);
    cmd_sim->add_option("--duration", sim.duration)->check(CLI::PositiveNumber);
    cmd_sim->add_option("--rate", sim.rate)->check(CLI::PositiveNumber);
    cmd_sim->add_option("--dt", sim.dt)->check(CLI::PositiveNumber);
    cmd_sim->add_option("--stride", sim.stride)->check(CLI::PositiveNumber);
    cmd_sim->add_option("--mode", sim.mode)->check(CLI::IsMember({"blocked", "free"}));
    cmd_sim->add_option("-o,--out", sim.out);
    cmd_sim->add_option("--svg", sim.svg);

    FreqOpts freq;
    auto* cmd_freq = app.add_subcommand("freq", "steady-state frequency response sweep");
    cmd_freq->add_option("--params", freq.params);
    cmd_freq->add_option("--amplitude", freq.amplitudes, "drive amplitude (repeatable)");
    cmd_freq->add_option("--f-lo", freq.f_lo)->check(CLI::PositiveNumber);
    cmd_freq->add_option("--f-hi", freq.f_hi)->check(CLI::PositiveNumber);
    cmd_freq->add_option("--f-step", freq.f_step)->check(CLI::PositiveNumber);
    cmd_freq->add_option("--mode", freq.mode)->check(CLI::IsMember({"blocked", "free"}));
    cmd_freq->add_option("-o,--out", freq.out);
    cmd_freq->add_option("--svg", freq.svg);

    ThermalOpts thermal;
    auto* cmd_thermal = app.add_subcommand("thermal", "coil self-heating simulation");
    cmd_thermal->add_option("--params", thermal.params);
    cmd_thermal->add_option("--amplitude", thermal.amplitude);
    cmd_thermal->add_option("--freq", thermal.freq)->check(CLI::PositiveNumber);
    cmd_thermal->add_option("--duration", thermal.duration)->check(CLI::PositiveNumber);
    cmd_thermal->add_option("--cooldown", thermal.cooldown)->check(CLI::NonNegativeNumber);
    cmd_thermal->add_option("-o,--out", thermal.out);
    cmd_thermal->add_option("--svg", thermal.svg);

    ReplayOpts replay;
    auto* cmd_replay = app.add_subcommand("replay", "pose stream through the full haptic loop");
    cmd_replay->add_option("--scene", replay.scene)->required()->check(CLI::ExistingFile);
    cmd_replay->add_option("--pose", replay.pose)->required()->check(CLI::ExistingFile);
    cmd_replay->add_option("--params", replay.params)->check(CLI::ExistingFile);
    cmd_replay->add_option("--finger", replay.finger);
    cmd_replay->add_option("--tick-rate", replay.tick_rate)->check(CLI::PositiveNumber);
    cmd_replay->add_option("--out-commands", replay.out_commands);
    cmd_replay->add_option("--out-telemetry", replay.out_telemetry);
    cmd_replay->add_option("--frames-out", replay.frames_out);
    cmd_replay->add_flag("--compare-batch", replay.compare_batch);

    EchoOpts echo;
    auto* cmd_echo = app.add_subcommand("protocol-echo", "decode and re-encode a frame stream");
    cmd_echo->add_option("--in", echo.in)->check(CLI::ExistingFile);
    cmd_echo->add_option("--random", echo.random_frames)->check(CLI::NonNegativeNumber);
    cmd_echo->add_option("--seed", echo.seed);
    cmd_echo->add_option("-o,--out", echo.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // 0
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (app.get_subcommands().empty()) {
        std::fputs(app.help().c_str(), stdout);
        return 2;
    }

    try {
        if (cmd_field->parsed()) return run_field(field);
        if (cmd_sweep->parsed()) return run_sweep(sweep);
        if (cmd_opt->parsed()) {
            optimize.refine_best = true;
            return run_sweep(optimize);
        }
        if (cmd_cal->parsed()) return run_calibrate(cal);
        if (cmd_sim->parsed()) return run_simulate(sim);
        if (cmd_freq->parsed()) return run_freq(freq);
        if (cmd_thermal->parsed()) return run_thermal(thermal);
        if (cmd_replay->parsed()) return run_replay(replay);
        if (cmd_echo->parsed()) return run_echo(echo);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
