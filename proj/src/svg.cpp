// Copyright 2026 The seizeval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "seizeval/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace seizeval {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#4e79a7", "#f28e2b", "#59a14f", "#e15759",
                                                 "#76b7b2", "#edc948", "#b07aa1", "#9c755f"};

std::string num(double v)
{
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(2);
    os << v;
    return os.str();
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

using Getter = double (*)(const ScoreReport&);

struct Metric {
    const char* label;
    Getter get;
};

const std::array<Metric, 7> kRateMetrics = {{
    {"TPR ep", [](const ScoreReport& r) { return r.sensitivity_ep; }},
    {"PPV ep", [](const ScoreReport& r) { return r.precision_ep; }},
    {"F1 ep", [](const ScoreReport& r) { return r.f1_ep; }},
    {"TPR dur", [](const ScoreReport& r) { return r.sensitivity_dur; }},
    {"PPV dur", [](const ScoreReport& r) { return r.precision_dur; }},
    {"F1 dur", [](const ScoreReport& r) { return r.f1_dur; }},
    {"F1 DE", [](const ScoreReport& r) { return r.f1_de; }},
}};

void draw_panel(std::ostringstream& svg, std::span<const PanelSeries> series, std::span<const Metric> metrics,
                double x0, double y0, double width, double height, double ymax, const char* axis_label)
{
    svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
    svg << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0 + height) << "\" x2=\"" << num(x0 + width) << "\" y2=\""
        << num(y0 + height) << "\" stroke=\"#333\"/>\n";
    svg << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0) << "\" y2=\"" << num(y0 + height)
        << "\" stroke=\"#333\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double v = ymax * t / 4.0;
        const double y = y0 + height - height * t / 4.0;
        svg << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y) << "\" x2=\"" << num(x0 + width) << "\" y2=\"" << num(y)
            << "\" stroke=\"#ddd\"/>\n";
        svg << "<text x=\"" << num(x0 - 4) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << num(v)
            << "</text>\n";
    }
    svg << "<text x=\"" << num(x0 - 36) << "\" y=\"" << num(y0 + height / 2) << "\" transform=\"rotate(-90 "
        << num(x0 - 36) << ' ' << num(y0 + height / 2) << ")\" text-anchor=\"middle\">" << axis_label << "</text>\n";

    const double group_w = width / static_cast<double>(metrics.size());
    const double bar_w = group_w * 0.8 / static_cast<double>(std::max<std::size_t>(1, series.size()));
    const auto y_of = [&](double v) { return y0 + height - height * std::clamp(v / ymax, 0.0, 1.0); };
    for (std::size_t m = 0; m < metrics.size(); ++m) {
        const double gx = x0 + group_w * static_cast<double>(m) + group_w * 0.1;
        for (std::size_t s = 0; s < series.size(); ++s) {
            const double v = metrics[m].get(series[s].average);
            const double bx = gx + bar_w * static_cast<double>(s);
            const char* color = kPalette[s % kPalette.size()];
            svg << "<rect x=\"" << num(bx) << "\" y=\"" << num(y_of(v)) << "\" width=\"" << num(bar_w * 0.9)
                << "\" height=\"" << num(y0 + height - y_of(v)) << "\" fill=\"" << color << "\"><title>"
                << escape(series[s].name) << ' ' << metrics[m].label << ": " << num(v) << "</title></rect>\n";
            for (const auto& sub : series[s].subjects)
                svg << "<circle cx=\"" << num(bx + bar_w * 0.45) << "\" cy=\"" << num(y_of(metrics[m].get(sub)))
                    << "\" r=\"2.5\" fill=\"#222\" fill-opacity=\"0.6\"/>\n";
        }
        svg << "<text x=\"" << num(x0 + group_w * (static_cast<double>(m) + 0.5)) << "\" y=\"" << num(y0 + height + 16)
            << "\" text-anchor=\"middle\">" << metrics[m].label << "</text>\n";
    }
    svg << "</g>\n";
}

}  // namespace

std::string render_metric_panel(std::span<const PanelSeries> series, const std::string& title)
{
    const double width = 900.0;
    const double height = 340.0;
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" viewBox=\"0 0 " << num(width) << ' ' << num(height) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << num(width / 2) << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\" "
           "text-anchor=\"middle\">"
        << escape(title) << "</text>\n";

    draw_panel(svg, series, kRateMetrics, 60, 40, 600, 240, 1.0, "performance");

    double far_max = 1.0;
    for (const auto& s : series) {
        far_max = std::max(far_max, s.average.far_per_day);
        for (const auto& sub : s.subjects) far_max = std::max(far_max, sub.far_per_day);
    }
    far_max = std::pow(10.0, std::ceil(std::log10(far_max * 1.05)));
    const std::array<Metric, 1> far = {{{"FAR/day", [](const ScoreReport& r) { return r.far_per_day; }}}};
    draw_panel(svg, series, far, 740, 40, 120, 240, far_max, "false alarms / day");

    for (std::size_t s = 0; s < series.size(); ++s) {
        const double lx = 60.0 + 150.0 * static_cast<double>(s % 5);
        const double ly = 312.0 + 14.0 * static_cast<double>(s / 5);
        svg << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly - 9) << "\" width=\"10\" height=\"10\" fill=\""
            << kPalette[s % kPalette.size()] << "\"/>";
        svg << "<text x=\"" << num(lx + 14) << "\" y=\"" << num(ly) << "\" font-family=\"sans-serif\" font-size=\"11\">"
            << escape(series[s].name) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace seizeval
