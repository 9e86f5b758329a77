#include "optivmd/svg.hpp"

#include "optivmd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace optivmd {

namespace {

constexpr int kStops[8][3] = {
    {0x44, 0x01, 0x54}, {0x46, 0x32, 0x7e}, {0x36, 0x5c, 0x8d}, {0x27, 0x7f, 0x8e},
    {0x1f, 0xa1, 0x87}, {0x4a, 0xc1, 0x6d}, {0xa0, 0xda, 0x39}, {0xfd, 0xe7, 0x25}};

std::string fmt(const char* format, ...) {
    char buf[256];
    va_list args;
    va_start(args, format);
    vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

}  // namespace

std::string ramp_color(double v) {
    v = std::clamp(v, 0.0, 1.0);
    const double pos = v * 7.0;
    const int lo = static_cast<int>(pos) >= 7 ? 6 : static_cast<int>(pos);
    const double f = pos - lo;
    char buf[8];
    snprintf(buf, sizeof buf, "#%02x%02x%02x",
             static_cast<int>(std::lround(kStops[lo][0] + f * (kStops[lo + 1][0] - kStops[lo][0]))),
             static_cast<int>(std::lround(kStops[lo][1] + f * (kStops[lo + 1][1] - kStops[lo][1]))),
             static_cast<int>(std::lround(kStops[lo][2] + f * (kStops[lo + 1][2] - kStops[lo][2]))));
    return buf;
}

std::string heatmap_svg(const FeatureMap& map, size_t channel) {
    if (channel >= map.C) throw Error("heatmap: channel out of range");

    const int cell = 4;
    const int margin_left = 48, margin_bottom = 32, margin_top = 12, margin_right = 12;
    const int plot_w = static_cast<int>(map.W) * cell;
    const int plot_h = static_cast<int>(map.H) * cell;
    const int width = margin_left + plot_w + margin_right;
    const int height = margin_top + plot_h + margin_bottom;

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";

    // row-run merge: consecutive same-color cells become one rect
    for (size_t h = 0; h < map.H; ++h) {
        // feature bin 0 at the bottom
        const int y = margin_top + static_cast<int>(map.H - 1 - h) * cell;
        size_t w = 0;
        while (w < map.W) {
            const std::string color = ramp_color(map.at(h, w, channel));
            size_t run = w + 1;
            while (run < map.W && ramp_color(map.at(h, run, channel)) == color) ++run;
            out << "<rect x=\"" << margin_left + static_cast<int>(w) * cell << "\" y=\"" << y
                << "\" width=\"" << static_cast<int>(run - w) * cell << "\" height=\"" << cell
                << "\" fill=\"" << color << "\"/>\n";
            w = run;
        }
    }

    const std::string name =
        channel < map.channel_names.size() ? map.channel_names[channel] : "channel";
    out << "<text x=\"" << margin_left + plot_w / 2 << "\" y=\"" << height - 8
        << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">time frames</text>\n"
        << "<text x=\"14\" y=\"" << margin_top + plot_h / 2
        << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
        << margin_top + plot_h / 2 << ")\">feature bins (" << name << ")</text>\n"
        << "</svg>\n";
    return out.str();
}

std::string surface_svg(const SearchReport& report) {
    std::set<int> ks;
    std::set<double> alphas;
    for (const auto& cell : report.cells) {
        ks.insert(cell.K);
        alphas.insert(cell.alpha);
    }
    const std::vector<int> k_axis(ks.begin(), ks.end());
    const std::vector<double> a_axis(alphas.begin(), alphas.end());

    const int cell = 64;
    const int margin_left = 72, margin_bottom = 48, margin_top = 16, margin_right = 16;
    const int plot_w = static_cast<int>(a_axis.size()) * cell;
    const int plot_h = static_cast<int>(k_axis.size()) * cell;
    const int width = margin_left + plot_w + margin_right;
    const int height = margin_top + plot_h + margin_bottom;

    auto col_of = [&](double alpha) {
        return static_cast<int>(std::find(a_axis.begin(), a_axis.end(), alpha) - a_axis.begin());
    };
    auto row_of = [&](int k) {
        return static_cast<int>(std::find(k_axis.begin(), k_axis.end(), k) - k_axis.begin());
    };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";

    for (const auto& c : report.cells) {
        const int x = margin_left + col_of(c.alpha) * cell;
        const int y = margin_top + (static_cast<int>(k_axis.size()) - 1 - row_of(c.K)) * cell;
        const std::string fill = c.failed ? "#cccccc" : ramp_color(c.accuracy);
        out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell << "\" height=\""
            << cell << "\" fill=\"" << fill << "\" stroke=\"#ffffff\"/>\n";
        const std::string label = c.failed ? "fail" : fmt("%.3f", c.accuracy);
        out << "<text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
            << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\" fill=\""
            << (c.failed || c.accuracy > 0.6 ? "#000000" : "#ffffff") << "\">" << label
            << "</text>\n";
    }

    // best cell outline
    {
        const int x = margin_left + col_of(report.best_alpha) * cell;
        const int y = margin_top +
                      (static_cast<int>(k_axis.size()) - 1 - row_of(report.best_k)) * cell;
        out << "<rect x=\"" << x + 2 << "\" y=\"" << y + 2 << "\" width=\"" << cell - 4
            << "\" height=\"" << cell - 4
            << "\" fill=\"none\" stroke=\"#ff3333\" stroke-width=\"3\"/>\n";
    }

    for (size_t i = 0; i < a_axis.size(); ++i)
        out << "<text x=\"" << margin_left + static_cast<int>(i) * cell + cell / 2 << "\" y=\""
            << margin_top + plot_h + 18
            << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">"
            << fmt("%g", a_axis[i]) << "</text>\n";
    for (size_t i = 0; i < k_axis.size(); ++i)
        out << "<text x=\"" << margin_left - 10 << "\" y=\""
            << margin_top + (static_cast<int>(k_axis.size()) - 1 - static_cast<int>(i)) * cell +
                   cell / 2 + 4
            << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">K="
            << k_axis[i] << "</text>\n";

    out << "<text x=\"" << margin_left + plot_w / 2 << "\" y=\"" << height - 10
        << "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">alpha</text>\n"
        << "</svg>\n";
    return out.str();
}

}  // namespace optivmd
