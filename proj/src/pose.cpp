#include "stem/pose.hpp"

#include <cstdlib>
#include <fstream>
#include <map>

namespace stem::pose {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    for (auto& f : fields) {
        const auto a = f.find_first_not_of(" \t\r");
        const auto b = f.find_last_not_of(" \t\r");
        f = (a == std::string::npos) ? std::string{} : f.substr(a, b - a + 1);
    }
    return fields;
}

double parse_number(const std::string& s, std::size_t line_no, const char* what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw ParseError(line_no, std::string("bad ") + what + " value '" + s + "'");
    }
    return v;
}

} // namespace

std::optional<PoseRecord> parse_pose_line(const std::string& line, std::size_t line_no) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') return std::nullopt;

    const auto fields = split_fields(line);
    if (fields.size() != 5) {
        throw ParseError(line_no, "expected 5 fields t_ms,finger,x,y,z but found " +
                                      std::to_string(fields.size()));
    }
    PoseRecord rec;
    const double t = parse_number(fields[0], line_no, "t_ms");
    if (t < 0.0) throw ParseError(line_no, "t_ms must be non-negative");
    rec.t_ms = std::uint64_t(t);
    rec.finger = fields[1];
    if (rec.finger.empty()) throw ParseError(line_no, "empty finger id");
    rec.x = parse_number(fields[2], line_no, "x");
    rec.y = parse_number(fields[3], line_no, "y");
    rec.z = parse_number(fields[4], line_no, "z");
    return rec;
}

std::vector<PoseRecord> read_pose_stream(std::istream& in) {
    std::vector<PoseRecord> records;
    std::map<std::string, std::uint64_t> last_t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto rec = parse_pose_line(line, line_no);
        if (!rec) continue;
        auto it = last_t.find(rec->finger);
        if (it != last_t.end() && rec->t_ms < it->second) {
            throw ParseError(line_no, "t_ms goes backwards for finger '" + rec->finger + "'");
        }
        last_t[rec->finger] = rec->t_ms;
        records.push_back(std::move(*rec));
    }
    return records;
}

std::vector<PoseRecord> load_pose_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open pose file " + path);
    return read_pose_stream(in);
}

} // namespace stem::pose
