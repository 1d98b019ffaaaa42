#include "stem/trace_io.hpp"

#include <cstdio>
#include <cstring>

namespace stem::trace_io {

using electromech::SimTrace;

void write_trace(const SimTrace& trace, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot open " + path + " for writing");
    std::fputs("t_s,x_m,v_mps,I_A,F_N,accel_G\n", f);
    for (std::size_t i = 0; i < trace.time.size(); ++i) {
        std::fprintf(f, "%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", trace.time[i], trace.x[i],
                     trace.v[i], trace.current[i], trace.f_contact[i], trace.accel_g[i]);
    }
    if (std::fclose(f) != 0) throw IoError("write to " + path + " failed");
}

SimTrace read_trace(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "r");
    if (!f) throw IoError("cannot open " + path);

    SimTrace trace;
    char line[512];
    if (!std::fgets(line, sizeof line, f)) {
        std::fclose(f);
        throw IoError("empty trace file " + path);
    }
    if (std::strncmp(line, "t_s,", 4) != 0) {
        std::fclose(f);
        throw IoError("unexpected trace header in " + path);
    }
    std::size_t line_no = 1;
    while (std::fgets(line, sizeof line, f)) {
        ++line_no;
        double t, x, v, i, fc, a;
        if (std::sscanf(line, "%lf,%lf,%lf,%lf,%lf,%lf", &t, &x, &v, &i, &fc, &a) != 6) {
            std::fclose(f);
            throw ParseError(line_no, "malformed trace row");
        }
        trace.time.push_back(t);
        trace.x.push_back(x);
        trace.v.push_back(v);
        trace.current.push_back(i);
        trace.f_contact.push_back(fc);
        trace.accel_g.push_back(a);
    }
    std::fclose(f);
    if (trace.time.size() >= 2) trace.dt_row = trace.time[1] - trace.time[0];
    return trace;
}

} // namespace stem::trace_io
