#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "stem/electromech.hpp"
#include "stem/errors.hpp"

namespace stem::params_io {

struct ParamsFile {
    electromech::LumpedParams lumped;
    electromech::ThermalParams thermal;
};

/// Key=value parameter file, one key per line, '#' comments ignored.
inline void save_params(const ParamsFile& pf, const std::string& path,
                        const std::string& header_comment = {}) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot open " + path + " for writing");
    if (!header_comment.empty()) std::fprintf(f, "# %s\n", header_comment.c_str());
    const auto& p = pf.lumped;
    std::fprintf(f, "R=%.10g\n", p.R);
    std::fprintf(f, "L=%.10g\n", p.L);
    std::fprintf(f, "Km=%.10g\n", p.Km);
    std::fprintf(f, "m_mov=%.10g\n", p.m_mov);
    std::fprintf(f, "k=%.10g\n", p.k);
    std::fprintf(f, "c=%.10g\n", p.c);
    std::fprintf(f, "preload=%.10g\n", p.preload);
    std::fprintf(f, "k_contact=%.10g\n", p.k_contact);
    std::fprintf(f, "c_contact=%.10g\n", p.c_contact);
    std::fprintf(f, "V_max=%.10g\n", p.V_max);
    std::fprintf(f, "R_th=%.10g\n", pf.thermal.R_th);
    std::fprintf(f, "C_th=%.10g\n", pf.thermal.C_th);
    std::fprintf(f, "T_amb=%.10g\n", pf.thermal.T_amb);
    if (std::fclose(f) != 0) throw IoError("write to " + path + " failed");
}

inline ParamsFile load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open parameter file " + path);

    std::map<std::string, double> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key=value");
        std::string key = line.substr(first, eq - first);
        key.erase(key.find_last_not_of(" \t") + 1);
        std::istringstream vs(line.substr(eq + 1));
        double value = 0.0;
        if (!(vs >> value)) throw ParseError(line_no, "bad numeric value for " + key);
        kv[key] = value;
    }

    ParamsFile pf;
    auto take = [&](const char* key, double& dst) {
        auto it = kv.find(key);
        if (it != kv.end()) dst = it->second;
    };
    take("R", pf.lumped.R);
    take("L", pf.lumped.L);
    take("Km", pf.lumped.Km);
    take("m_mov", pf.lumped.m_mov);
    take("k", pf.lumped.k);
    take("c", pf.lumped.c);
    take("preload", pf.lumped.preload);
    take("k_contact", pf.lumped.k_contact);
    take("c_contact", pf.lumped.c_contact);
    take("V_max", pf.lumped.V_max);
    take("R_th", pf.thermal.R_th);
    take("C_th", pf.thermal.C_th);
    take("T_amb", pf.thermal.T_amb);
    return pf;
}

} // namespace stem::params_io
