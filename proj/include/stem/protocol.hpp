#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stem/errors.hpp"

namespace stem::protocol {

inline constexpr std::uint8_t kDeviceSync = 0xAA;
inline constexpr std::uint8_t kTelemetrySync = 0xAB;
inline constexpr std::size_t kMaxSamples = 32;
inline constexpr int kMaxAbsMillivolts = 10000;
inline constexpr std::size_t kTelemetryFrameSize = 12;

/// CRC-16/CCITT-FALSE: poly 0x1021, init 0xFFFF, no reflection, no final xor.
/// Check value over ASCII "123456789" is 0x29B1.
std::uint16_t crc16(std::span<const std::uint8_t> data);

// Drive frame: | 0xAA | seq | count | count x int16 mV (BE) | crc16 (BE) |.
// The CRC covers every byte before it.
struct DeviceFrame {
    std::uint8_t seq = 0; // wraps
    std::vector<std::int16_t> samples_mv;

    bool operator==(const DeviceFrame&) const = default;
};

// Telemetry frame mirrors the framing with sync 0xAB and a fixed payload:
// | 0xAB | seq | t_ms u32 BE | force mN i16 BE | temp centi-degC i16 BE | crc |.
struct TelemetryFrame {
    std::uint8_t seq = 0;
    std::uint32_t t_ms = 0;
    std::int16_t force_mn = 0;
    std::int16_t temp_centi_c = 0;

    bool operator==(const TelemetryFrame&) const = default;
};

struct FrameError : std::runtime_error {
    enum class Kind { CrcMismatch, Truncated, BadCount, BadSync, BadSample };
    FrameError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
    Kind kind;
};

std::vector<std::uint8_t> encode_frame(const DeviceFrame& frame);
std::vector<std::uint8_t> encode_frame(const TelemetryFrame& frame);

/// Decode exactly one frame from the start of the buffer.
DeviceFrame decode_frame(std::span<const std::uint8_t> bytes);
TelemetryFrame decode_telemetry(std::span<const std::uint8_t> bytes);

// Incremental decoder: feed arbitrary byte chunks, collect whole frames. On a
// bad frame it scans forward for the next sync byte, so a corrupted stream
// costs at most the damaged frame.
class StreamDecoder {
  public:
    struct Stats {
        std::uint64_t frames = 0;
        std::uint64_t crc_errors = 0;
        std::uint64_t bad_counts = 0;
        std::uint64_t bytes_skipped = 0;
    };

    void feed(std::span<const std::uint8_t> bytes);

    /// End of stream: no more bytes will arrive, so prefixes stuck waiting
    /// for a longer frame are skipped and any complete frames behind them
    /// recovered.
    void finish();

    std::vector<DeviceFrame> take_frames();
    const Stats& stats() const { return stats_; }
    std::size_t pending_bytes() const { return buffer_.size(); }

  private:
    void scan();
    std::vector<std::uint8_t> buffer_;
    std::vector<DeviceFrame> frames_;
    Stats stats_;
};

} // namespace stem::protocol
