#include "stem/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "stem/errors.hpp"

namespace stem::svg {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Bounds {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void grow(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {
            lo -= 1.0;
            hi += 1.0;
        } else {
            const double m = 0.05 * (hi - lo);
            lo -= m;
            hi += m;
        }
    }
};

} // namespace

void write_line_chart(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series, int width, int height) {
    Bounds bx, by;
    for (const auto& s : series) {
        for (double v : s.x) bx.grow(v);
        for (double v : s.y) by.grow(v);
    }
    if (!std::isfinite(bx.lo) || !std::isfinite(by.lo)) {
        bx = {0.0, 1.0};
        by = {0.0, 1.0};
    }
    bx.pad();
    by.pad();

    const double ml = 80, mr = 20, mt = 40, mb = 55;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto sx = [&](double v) { return ml + (v - bx.lo) / (bx.hi - bx.lo) * pw; };
    auto sy = [&](double v) { return mt + ph - (v - by.lo) / (by.hi - by.lo) * ph; };

    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw IoError("cannot open " + path + " for writing");

    std::fprintf(f,
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                 "viewBox=\"0 0 %d %d\" font-family=\"sans-serif\" font-size=\"13\">\n",
                 width, height, width, height);
    std::fprintf(f, "<rect width=\"%d\" height=\"%d\" fill=\"white\"/>\n", width, height);
    std::fprintf(f, "<text x=\"%.1f\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">%s</text>\n",
                 ml + pw / 2, title.c_str());

    // gridlines and tick labels
    for (int i = 0; i <= 5; ++i) {
        const double fx = bx.lo + (bx.hi - bx.lo) * i / 5.0;
        const double fy = by.lo + (by.hi - by.lo) * i / 5.0;
        std::fprintf(f,
                     "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                     "stroke=\"#dddddd\"/>\n",
                     sx(fx), mt, sx(fx), mt + ph);
        std::fprintf(f,
                     "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                     "stroke=\"#dddddd\"/>\n",
                     ml, sy(fy), ml + pw, sy(fy));
        std::fprintf(f,
                     "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%.4g</text>\n",
                     sx(fx), mt + ph + 18, fx);
        std::fprintf(f, "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%.4g</text>\n",
                     ml - 8, sy(fy) + 4, fy);
    }
    std::fprintf(f,
                 "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                 "stroke=\"black\"/>\n",
                 ml, mt, pw, ph);
    std::fprintf(f,
                 "<text x=\"%.1f\" y=\"%d\" text-anchor=\"middle\">%s</text>\n",
                 ml + pw / 2, height - 12, x_label.c_str());
    std::fprintf(f,
                 "<text x=\"18\" y=\"%.1f\" text-anchor=\"middle\" "
                 "transform=\"rotate(-90 18 %.1f)\">%s</text>\n",
                 mt + ph / 2, mt + ph / 2, y_label.c_str());

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % (sizeof kPalette / sizeof *kPalette)];
        std::fprintf(f, "<polyline fill=\"none\" stroke=\"%s\" stroke-width=\"1.5\" points=\"",
                     color);
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            std::fprintf(f, "%.1f,%.1f ", sx(s.x[i]), sy(s.y[i]));
        }
        std::fputs("\"/>\n", f);
        if (!s.label.empty()) {
            const double lx = ml + pw - 150, ly = mt + 18 + 18 * double(si);
            std::fprintf(f,
                         "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" "
                         "stroke=\"%s\" stroke-width=\"2\"/>\n",
                         lx, ly - 4, lx + 22, ly - 4, color);
            std::fprintf(f, "<text x=\"%.1f\" y=\"%.1f\">%s</text>\n", lx + 28, ly,
                         s.label.c_str());
        }
    }
    std::fputs("</svg>\n", f);
    if (std::fclose(f) != 0) throw IoError("write to " + path + " failed");
}

} // namespace stem::svg
