#include "stem/design.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>

#include "stem/simplex.hpp"

namespace stem::design {

namespace {

double wire_area(const WireSpec& wire) {
    return 0.25 * M_PI * wire.wire_diameter * wire.wire_diameter;
}

void check_wire(const WireSpec& wire) {
    if (!(wire.wire_diameter > 0.0)) throw ValidityError("wire diameter must be positive");
    if (!(wire.fill_factor > 0.0) || wire.fill_factor > 1.0) {
        throw ValidityError("fill factor must lie in (0, 1]");
    }
}

} // namespace

int wire_turns(const CoilSpec& coil, const WireSpec& wire) {
    check_wire(wire);
    const int turns = int(std::floor(wire.fill_factor * coil.width * coil.thickness / wire_area(wire)));
    if (turns < 1) {
        throw ZeroTurnError("wire of diameter " + std::to_string(wire.wire_diameter * 1e3) +
                            " mm does not fit the coil cross-section");
    }
    return turns;
}

double coil_resistance(const CoilSpec& coil, const WireSpec& wire) {
    const int turns = wire_turns(coil, wire);
    const double r_mean = coil.inner_radius + 0.5 * coil.width;
    return wire.resistivity * (turns * 2.0 * M_PI * r_mean) / wire_area(wire);
}

double magnet_mass(const MagnetSpec& magnet) {
    return magnet.density * M_PI * magnet.radius * magnet.radius * magnet.height;
}

double objective_value(double force, double power, double mass) {
    if (!(power > 0.0) || !(mass > 0.0)) {
        throw ValidityError("objective requires positive power and mass");
    }
    return force / std::sqrt(power * mass);
}

double seated_offset(const DesignEnvelope& env, double h_mag) {
    return 0.5 * env.coil_thickness - env.pole_piece - 0.5 * h_mag;
}

DesignEvaluation evaluate_objective(const DesignPoint& dp, const EvalContext& ctx) {
    if (!ctx.envelope.feasible(dp)) {
        throw InfeasibleDesignError("design (h_mag " + std::to_string(dp.h_mag * 1e3) +
                                    " mm, w_coil " + std::to_string(dp.w_coil * 1e3) +
                                    " mm) violates the volume envelope");
    }
    CoilSpec coil;
    coil.inner_radius = ctx.envelope.coil_inner_radius();
    coil.width = dp.w_coil;
    coil.thickness = ctx.envelope.coil_thickness;
    coil.axial_center = 0.0;
    coil.turns = wire_turns(coil, ctx.wire);

    MagnetSpec magnet;
    magnet.radius = ctx.envelope.magnet_radius;
    magnet.height = dp.h_mag;
    magnet.magnetization = ctx.magnetization;
    magnet.density = ctx.magnet_density;

    const double resistance = coil_resistance(coil, ctx.wire);
    const double current = ctx.drive_voltage / resistance;
    const double offset = seated_offset(ctx.envelope, dp.h_mag);

    DesignEvaluation ev;
    ev.point = dp;
    ev.force = std::abs(magnetics::axial_force(coil, current, magnet, offset, ctx.mre, ctx.grid));
    ev.power = current * current * resistance;
    ev.magnet_mass = magnet_mass(magnet);
    ev.objective = objective_value(ev.force, ev.power, ev.magnet_mass);
    return ev;
}

SweepResult grid_sweep(const SweepRange& h_range, const SweepRange& w_range,
                       int n_h, int n_w, const Evaluator& evaluator,
                       const std::function<bool(const DesignPoint&)>& feasible,
                       int threads) {
    if (n_h < 2 || n_w < 2) throw ValidityError("sweep grid must be at least 2x2");

    const double dh = (h_range.hi - h_range.lo) / (n_h - 1);
    const double dw = (w_range.hi - w_range.lo) / (n_w - 1);

    std::vector<std::optional<DesignEvaluation>> cells(std::size_t(n_h) * n_w);
    auto point_at = [&](int i, int j) {
        return DesignPoint{h_range.lo + i * dh, w_range.lo + j * dw};
    };

    int n_threads = threads > 0 ? threads : int(std::thread::hardware_concurrency());
    n_threads = std::clamp(n_threads, 1, n_h * n_w);

    std::vector<std::exception_ptr> errors(n_threads);
    auto worker = [&](int tid) {
        try {
            for (int idx = tid; idx < n_h * n_w; idx += n_threads) {
                const DesignPoint dp = point_at(idx / n_w, idx % n_w);
                if (feasible(dp)) cells[idx] = evaluator(dp);
            }
        } catch (...) {
            errors[tid] = std::current_exception();
        }
    };
    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
        for (auto& th : pool) th.join();
    }
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }

    SweepResult result;
    result.grid_h = n_h;
    result.grid_w = n_w;
    for (const auto& cell : cells) {
        if (cell) result.evaluations.push_back(*cell);
    }
    if (result.evaluations.empty()) {
        throw EmptyFeasibleSetError("no feasible design in the requested sweep region");
    }
    // strict > keeps the first (lexicographically smallest) cell on ties
    result.best = result.evaluations.front();
    for (const auto& ev : result.evaluations) {
        if (ev.objective > result.best.objective) result.best = ev;
    }
    return result;
}

SweepResult grid_sweep(const SweepRange& h_range, const SweepRange& w_range,
                       int n_h, int n_w, const EvalContext& ctx, int threads) {
    return grid_sweep(
        h_range, w_range, n_h, n_w,
        [&ctx](const DesignPoint& dp) { return evaluate_objective(dp, ctx); },
        [&ctx](const DesignPoint& dp) { return ctx.envelope.feasible(dp); }, threads);
}

DesignPoint refine(const DesignPoint& start, const Evaluator& evaluator,
                   const std::function<bool(const DesignPoint&)>& feasible) {
    if (!feasible(start)) throw InfeasibleDesignError("refine start must be feasible");
    const double f_start = evaluator(start).objective;

    auto cost = [&](const Eigen::VectorXd& x) {
        DesignPoint dp{x(0), x(1)};
        if (!feasible(dp)) return 1e12 + x.cwiseAbs().sum(); // graded penalty
        return -evaluator(dp).objective;
    };

    Eigen::VectorXd x0(2);
    x0 << start.h_mag, start.w_coil;
    Eigen::VectorXd step(2);
    step << 0.1e-3, 0.1e-3;
    SimplexOptions opts;
    opts.max_iter = 200;
    opts.x_tol = 1e-8;
    auto res = nelder_mead(cost, x0, step, opts);

    DesignPoint out{res.x(0), res.x(1)};
    if (!feasible(out) || -res.value < f_start) return start; // stagnation guard
    return out;
}

DesignPoint refine(const DesignPoint& start, const EvalContext& ctx) {
    return refine(
        start, [&ctx](const DesignPoint& dp) { return evaluate_objective(dp, ctx); },
        [&ctx](const DesignPoint& dp) { return ctx.envelope.feasible(dp); });
}

void write_sweep_csv(const SweepResult& result, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot open " + path + " for writing");
    std::fputs("h_mag_mm,w_coil_mm,force_N,power_W,mass_kg,objective\n", f);
    for (const auto& ev : result.evaluations) {
        std::fprintf(f, "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", ev.point.h_mag * 1e3,
                     ev.point.w_coil * 1e3, ev.force, ev.power, ev.magnet_mass, ev.objective);
    }
    std::fclose(f);
}

} // namespace stem::design
