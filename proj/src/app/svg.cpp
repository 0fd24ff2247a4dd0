#include "svg.hpp"

#include "parity/format.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

namespace parity::app {
namespace {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 80, kRight = 20, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void finish() {
        if (!std::isfinite(lo)) lo = 0, hi = 1;
        if (hi - lo < 1e-12) {
            const double pad = std::max(std::abs(lo) * 0.05, 1e-6);
            lo -= pad;
            hi += pad;
        }
    }
};

struct Frame {
    Range x, y;

    [[nodiscard]] double px(double v) const {
        return kLeft + (v - x.lo) / (x.hi - x.lo) * (kWidth - kLeft - kRight);
    }
    [[nodiscard]] double py(double v) const {
        return kHeight - kBottom - (v - y.lo) / (y.hi - y.lo) * (kHeight - kTop - kBottom);
    }
};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) { return fmt::format("{:.2f}", v); }

std::string header(const PlotLabels& labels) {
    return fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<text x=\"{2}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{3}</text>\n",
        kWidth, kHeight, kWidth / 2, escape(labels.title));
}

std::string axes(const Frame& f, const PlotLabels& labels) {
    std::string out;
    const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", num(x0), num(y0), num(x1));
    out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", num(x0), num(y0), num(y1));
    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double xv = f.x.lo + (f.x.hi - f.x.lo) * i / kTicks;
        const double yv = f.y.lo + (f.y.hi - f.y.lo) * i / kTicks;
        out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>"
                           "<text x=\"{0}\" y=\"{3}\" text-anchor=\"middle\">{4}</text>\n",
                           num(f.px(xv)), num(y0), num(y0 + 5), num(y0 + 20), fmt::format("{:.4g}", xv));
        out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>"
                           "<text x=\"{3}\" y=\"{4}\" text-anchor=\"end\">{5}</text>\n",
                           num(x0 - 5), num(f.py(yv)), num(x0), num(x0 - 8), num(f.py(yv) + 4),
                           fmt::format("{:.4g}", yv));
    }
    out += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num((x0 + x1) / 2),
                       num(kHeight - 15), escape(labels.x_label));
    out += fmt::format("<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>\n",
                       num((y0 + y1) / 2), escape(labels.y_label));
    return out;
}

}  // namespace

std::string line_plot_svg(const PlotLabels& labels, const std::vector<Series>& series) {
    Frame f;
    for (const auto& s : series) {
        for (double v : s.x) f.x.add(v);
        for (double v : s.y) f.y.add(v);
    }
    f.x.finish();
    f.y.finish();

    std::string out = header(labels) + axes(f, labels);
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* colour = kPalette[i % std::size(kPalette)];
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (s.markers_only) {
            for (std::size_t k = 0; k < n; ++k) {
                out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"2\" fill=\"{}\"/>\n", num(f.px(s.x[k])),
                                   num(f.py(s.y[k])), colour);
            }
        } else {
            std::string points;
            for (std::size_t k = 0; k < n; ++k) {
                if (!points.empty()) points += ' ';
                points += num(f.px(s.x[k])) + ',' + num(f.py(s.y[k]));
            }
            out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{} points=\"{}\"/>\n",
                               colour, s.dashed ? " stroke-dasharray=\"6,4\"" : "", points);
        }
        out += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", num(kWidth - kRight - 150),
                           num(kTop + 16 + 16.0 * static_cast<double>(i)), colour, escape(s.name));
    }
    out += "</svg>\n";
    return out;
}

std::string box_plot_svg(const PlotLabels& labels, const std::vector<BoxWhiskerSummary>& boxes) {
    Frame f;
    for (const auto& b : boxes) {
        f.x.add(b.key);
        f.y.add(b.lower_whisker);
        f.y.add(b.upper_whisker);
        for (double o : b.outliers) f.y.add(o);
    }
    f.x.finish();
    f.y.finish();
    // Pad the x range so edge boxes are fully visible.
    const double pad = (f.x.hi - f.x.lo) / std::max<double>(2.0 * static_cast<double>(boxes.size()), 2.0);
    f.x.lo -= pad;
    f.x.hi += pad;

    const double half_width =
        std::max(2.0, 0.35 * (kWidth - kLeft - kRight) / std::max<double>(static_cast<double>(boxes.size()), 1.0));
    std::string out = header(labels) + axes(f, labels);
    for (const auto& b : boxes) {
        const double cx = f.px(b.key);
        const double top = f.py(b.q3), bottom = f.py(b.q1);
        out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", num(cx),
                           num(f.py(b.upper_whisker)), num(top));
        out += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", num(cx),
                           num(bottom), num(f.py(b.lower_whisker)));
        out += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#aec7e8\" stroke=\"black\"/>\n",
                           num(cx - half_width), num(top), num(2 * half_width), num(std::max(bottom - top, 0.5)));
        out += fmt::format("<line x1=\"{0}\" y1=\"{2}\" x2=\"{1}\" y2=\"{2}\" stroke=\"#d62728\" stroke-width=\"2\"/>\n",
                           num(cx - half_width), num(cx + half_width), num(f.py(b.median)));
        for (double o : b.outliers) {
            out += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"2\" fill=\"none\" stroke=\"black\"/>\n", num(cx),
                               num(f.py(o)));
        }
    }
    out += "</svg>\n";
    return out;
}

}  // namespace parity::app
