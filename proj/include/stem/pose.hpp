#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "stem/errors.hpp"

namespace stem::pose {

// One fingertip sample from the tracking stream: `t_ms,finger,x,y,z` in SI
// meters.
struct PoseRecord {
    std::uint64_t t_ms = 0;
    std::string finger;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

/// Parse one CSV line; returns nullopt for blank and '#'-comment lines.
/// Throws ParseError (carrying the line number) on malformed input.
std::optional<PoseRecord> parse_pose_line(const std::string& line, std::size_t line_no);

/// Read a whole stream, enforcing non-decreasing t_ms per finger; the error
/// names the offending line.
std::vector<PoseRecord> read_pose_stream(std::istream& in);

std::vector<PoseRecord> load_pose_csv(const std::string& path);

} // namespace stem::pose
