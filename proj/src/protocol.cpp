#include "stem/protocol.hpp"

#include <array>

namespace stem::protocol {

namespace {

std::array<std::uint16_t, 256> make_crc_table() {
    std::array<std::uint16_t, 256> table{};
    for (int byte = 0; byte < 256; ++byte) {
        std::uint16_t crc = std::uint16_t(byte << 8);
        for (int bit = 0; bit < 8; ++bit) {
            crc = (crc & 0x8000) ? std::uint16_t((crc << 1) ^ 0x1021)
                                 : std::uint16_t(crc << 1);
        }
        table[std::size_t(byte)] = crc;
    }
    return table;
}

const std::array<std::uint16_t, 256> kCrcTable = make_crc_table();

void push_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(std::uint8_t(v >> 8));
    out.push_back(std::uint8_t(v & 0xFF));
}

void push_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(std::uint8_t(v >> 24));
    out.push_back(std::uint8_t(v >> 16));
    out.push_back(std::uint8_t(v >> 8));
    out.push_back(std::uint8_t(v & 0xFF));
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t at) {
    return std::uint16_t((b[at] << 8) | b[at + 1]);
}

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t at) {
    return (std::uint32_t(b[at]) << 24) | (std::uint32_t(b[at + 1]) << 16) |
           (std::uint32_t(b[at + 2]) << 8) | std::uint32_t(b[at + 3]);
}

void append_crc(std::vector<std::uint8_t>& out) {
    push_u16(out, crc16({out.data(), out.size()}));
}

} // namespace

std::uint16_t crc16(std::span<const std::uint8_t> data) {
    std::uint16_t crc = 0xFFFF;
    for (std::uint8_t b : data) {
        crc = std::uint16_t((crc << 8) ^ kCrcTable[std::size_t((crc >> 8) ^ b)]);
    }
    return crc;
}

std::vector<std::uint8_t> encode_frame(const DeviceFrame& frame) {
    if (frame.samples_mv.empty() || frame.samples_mv.size() > kMaxSamples) {
        throw FrameError(FrameError::Kind::BadCount,
                         "frame must carry between 1 and 32 samples");
    }
    for (std::int16_t s : frame.samples_mv) {
        if (s > kMaxAbsMillivolts || s < -kMaxAbsMillivolts) {
            throw FrameError(FrameError::Kind::BadSample,
                             "sample exceeds the 10000 mV bound");
        }
    }
    std::vector<std::uint8_t> out;
    out.reserve(5 + 2 * frame.samples_mv.size());
    out.push_back(kDeviceSync);
    out.push_back(frame.seq);
    out.push_back(std::uint8_t(frame.samples_mv.size()));
    for (std::int16_t s : frame.samples_mv) push_u16(out, std::uint16_t(s));
    append_crc(out);
    return out;
}

std::vector<std::uint8_t> encode_frame(const TelemetryFrame& frame) {
    std::vector<std::uint8_t> out;
    out.reserve(kTelemetryFrameSize);
    out.push_back(kTelemetrySync);
    out.push_back(frame.seq);
    push_u32(out, frame.t_ms);
    push_u16(out, std::uint16_t(frame.force_mn));
    push_u16(out, std::uint16_t(frame.temp_centi_c));
    append_crc(out);
    return out;
}

DeviceFrame decode_frame(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 3) throw FrameError(FrameError::Kind::Truncated, "frame header truncated");
    if (bytes[0] != kDeviceSync) {
        throw FrameError(FrameError::Kind::BadSync, "missing 0xAA sync byte");
    }
    const std::size_t count = bytes[2];
    if (count < 1 || count > kMaxSamples) {
        throw FrameError(FrameError::Kind::BadCount,
                         "sample count " + std::to_string(count) + " outside 1..32");
    }
    const std::size_t total = 3 + 2 * count + 2;
    if (bytes.size() < total) throw FrameError(FrameError::Kind::Truncated, "frame body truncated");

    const std::uint16_t expect = read_u16(bytes, total - 2);
    if (crc16(bytes.subspan(0, total - 2)) != expect) {
        throw FrameError(FrameError::Kind::CrcMismatch, "frame CRC mismatch");
    }

    DeviceFrame frame;
    frame.seq = bytes[1];
    frame.samples_mv.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        frame.samples_mv[i] = std::int16_t(read_u16(bytes, 3 + 2 * i));
        if (frame.samples_mv[i] > kMaxAbsMillivolts || frame.samples_mv[i] < -kMaxAbsMillivolts) {
            throw FrameError(FrameError::Kind::BadSample, "sample exceeds the 10000 mV bound");
        }
    }
    return frame;
}

TelemetryFrame decode_telemetry(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kTelemetryFrameSize) {
        throw FrameError(FrameError::Kind::Truncated, "telemetry frame truncated");
    }
    if (bytes[0] != kTelemetrySync) {
        throw FrameError(FrameError::Kind::BadSync, "missing 0xAB sync byte");
    }
    if (crc16(bytes.subspan(0, kTelemetryFrameSize - 2)) != read_u16(bytes, kTelemetryFrameSize - 2)) {
        throw FrameError(FrameError::Kind::CrcMismatch, "telemetry CRC mismatch");
    }
    TelemetryFrame f;
    f.seq = bytes[1];
    f.t_ms = read_u32(bytes, 2);
    f.force_mn = std::int16_t(read_u16(bytes, 6));
    f.temp_centi_c = std::int16_t(read_u16(bytes, 8));
    return f;
}

void StreamDecoder::feed(std::span<const std::uint8_t> bytes) {
    buffer_.insert(buffer_.end(), bytes.begin(), bytes.end());
    scan();
}

void StreamDecoder::finish() {
    while (!buffer_.empty()) {
        scan();
        if (buffer_.empty()) break;
        // the remaining prefix waits for bytes that will never arrive
        buffer_.erase(buffer_.begin());
        ++stats_.bytes_skipped;
    }
}

std::vector<DeviceFrame> StreamDecoder::take_frames() {
    std::vector<DeviceFrame> out;
    out.swap(frames_);
    return out;
}

void StreamDecoder::scan() {
    std::size_t pos = 0;
    while (pos < buffer_.size()) {
        if (buffer_[pos] != kDeviceSync) {
            ++pos;
            ++stats_.bytes_skipped;
            continue;
        }
        const std::span<const std::uint8_t> view{buffer_.data() + pos, buffer_.size() - pos};
        if (view.size() < 3) break; // wait for the header
        const std::size_t count = view[2];
        if (count < 1 || count > kMaxSamples) {
            ++stats_.bad_counts;
            ++pos;
            ++stats_.bytes_skipped;
            continue;
        }
        const std::size_t total = 3 + 2 * count + 2;
        if (view.size() < total) break; // wait for the body
        try {
            frames_.push_back(decode_frame(view.subspan(0, total)));
            ++stats_.frames;
            pos += total;
        } catch (const FrameError& e) {
            if (e.kind == FrameError::Kind::CrcMismatch) ++stats_.crc_errors;
            ++pos; // resynchronize on the next sync byte
            ++stats_.bytes_skipped;
        }
    }
    buffer_.erase(buffer_.begin(), buffer_.begin() + std::ptrdiff_t(pos));
}

} // namespace stem::protocol
