#pragma once

#include <string>

#include "stem/electromech.hpp"

namespace stem::trace_io {

/// CSV export of a simulation trace: header t_s,x_m,v_mps,I_A,F_N,accel_G,
/// one row per stored sample, 10 significant digits.
void write_trace(const electromech::SimTrace& trace, const std::string& path);

/// Read a trace CSV back; the mode flag is not representable in the file and
/// defaults to blocked.
electromech::SimTrace read_trace(const std::string& path);

} // namespace stem::trace_io
