#include "stem/device.hpp"

#include <algorithm>
#include <cmath>

namespace stem::device {

using electromech::DriveSignal;
using electromech::LumpedParams;
using electromech::Mode;
using electromech::SimState;
using protocol::TelemetryFrame;

SimulatedDevice::SimulatedDevice(LumpedParams params, electromech::ThermalParams thermal,
                                 double tick_rate_hz, int telemetry_decimation)
    : params_(std::move(params)),
      thermal_(std::move(thermal)),
      tick_rate_(tick_rate_hz),
      decimation_(telemetry_decimation),
      temperature_(thermal_.T_amb) {
    if (!(tick_rate_hz > 0.0)) throw ValidityError("tick rate must be positive");
    if (telemetry_decimation < 1) throw ValidityError("telemetry decimation must be >= 1");
    tick_period_ = 1.0 / tick_rate_;

    const double dt_max =
        std::min({0.02 * std::sqrt(params_.m_mov / params_.k),
                  2.0 * params_.m_mov / (params_.c + params_.c_contact),
                  2.0 * params_.L / params_.R, 0.1 * tick_period_});
    substeps_ = int(std::ceil(tick_period_ / dt_max));
    dt_ = tick_period_ / substeps_;
}

void SimulatedDevice::advance_tick(double volts) {
    // one tick of zero-order-hold drive, integrated in substeps; the thermal
    // state advances with the tick-mean resistive power
    DriveSignal hold = DriveSignal::step(volts, tick_period_, tick_rate_ * 10.0);
    auto trace = electromech::simulate(params_, hold, Mode::Blocked, dt_, substeps_, state_);

    double i_sq = 0.0;
    for (double i : trace.current) i_sq += i * i;
    i_sq /= double(trace.current.size());

    const double tau = thermal_.R_th * thermal_.C_th;
    const double t_ss = thermal_.T_amb + i_sq * params_.R * thermal_.R_th;
    temperature_ = t_ss + (temperature_ - t_ss) * std::exp(-tick_period_ / tau);

    state_ = trace.final_state;
    ++tick_;
}

double SimulatedDevice::contact_force_n() const {
    return params_.k_contact * std::max(state_.x, 0.0);
}

std::vector<TelemetryFrame> SimulatedDevice::feed(const protocol::DeviceFrame& frame) {
    std::vector<double> volts;
    volts.reserve(frame.samples_mv.size());
    for (std::int16_t mv : frame.samples_mv) volts.push_back(mv / 1000.0);
    return feed_samples(volts);
}

std::vector<TelemetryFrame> SimulatedDevice::feed_samples(const std::vector<double>& volts) {
    std::vector<TelemetryFrame> out;
    for (double v : volts) {
        advance_tick(v);
        if (tick_ % std::uint64_t(decimation_) == 0) {
            TelemetryFrame t;
            t.seq = telemetry_seq_++;
            t.t_ms = std::uint32_t(std::llround(double(tick_) * tick_period_ * 1e3));
            t.force_mn = std::int16_t(std::clamp(std::lround(contact_force_n() * 1e3),
                                                 long(-32768), long(32767)));
            t.temp_centi_c = std::int16_t(std::clamp(std::lround(temperature_ * 100.0),
                                                     long(-32768), long(32767)));
            out.push_back(t);
        }
    }
    return out;
}

} // namespace stem::device
