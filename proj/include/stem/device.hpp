#pragma once

#include <vector>

#include "stem/electromech.hpp"
#include "stem/protocol.hpp"

namespace stem::device {

// Simulated device endpoint: consumes drive frames at the tick rate, advances
// the blocked-mode electromechanical model one tick per sample, tracks coil
// temperature, and returns a telemetry frame every `telemetry_decimation`
// ticks. Deterministic for a given input stream.
class SimulatedDevice {
  public:
    SimulatedDevice(electromech::LumpedParams params, electromech::ThermalParams thermal,
                    double tick_rate_hz = 1000.0, int telemetry_decimation = 10);

    /// Consume one decoded frame; each sample is held for one tick.
    std::vector<protocol::TelemetryFrame> feed(const protocol::DeviceFrame& frame);

    /// Convenience for raw voltage ticks (volts, not millivolts).
    std::vector<protocol::TelemetryFrame> feed_samples(const std::vector<double>& volts);

    const electromech::SimState& state() const { return state_; }
    double temperature_c() const { return temperature_; }
    double contact_force_n() const;
    std::uint64_t ticks() const { return tick_; }
    double dt() const { return dt_; }

  private:
    electromech::LumpedParams params_;
    electromech::ThermalParams thermal_;
    double tick_rate_;
    double tick_period_;
    double dt_;       // RK4 substep, divides the tick period exactly
    int substeps_;
    int decimation_;
    electromech::SimState state_;
    double temperature_;
    std::uint64_t tick_ = 0;
    std::uint8_t telemetry_seq_ = 0;

    void advance_tick(double volts);
};

} // namespace stem::device
