#include "cli/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qtdlab {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 72.0;
constexpr double kRight = 24.0;
constexpr double kTop = 44.0;
constexpr double kBottom = 56.0;

const char* kPalette[] = {"#000000", "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    bool log = false;
    double lo = 0.0;
    double hi = 1.0;

    double t(double v) const { return log ? std::log10(v) : v; }
    bool valid(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
    double unit(double v) const { return (t(v) - t(lo)) / (t(hi) - t(lo)); }
};

void fit_axis(Axis& axis, double lo, double hi) {
    if (!(hi > lo)) {
        lo -= 0.5;
        hi += 0.5;
    }
    if (axis.log) {
        axis.lo = lo / 1.25;
        axis.hi = hi * 1.25;
    } else {
        const double pad = 0.05 * (hi - lo);
        axis.lo = lo - pad;
        axis.hi = hi + pad;
    }
}

std::vector<double> axis_ticks(const Axis& axis) {
    std::vector<double> ticks;
    if (axis.log) {
        const int klo = static_cast<int>(std::ceil(std::log10(axis.lo) - 1e-9));
        const int khi = static_cast<int>(std::floor(std::log10(axis.hi) + 1e-9));
        for (int k = klo; k <= khi; ++k) ticks.push_back(std::pow(10.0, k));
        if (ticks.size() < 2) {
            ticks.clear();
            ticks.push_back(axis.lo);
            ticks.push_back(axis.hi);
        }
    } else {
        const double span = axis.hi - axis.lo;
        const double raw = span / 5.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double mult : {1.0, 2.0, 5.0, 10.0}) {
            if (mag * mult >= raw) {
                step = mag * mult;
                break;
            }
        }
        const double first = std::ceil(axis.lo / step) * step;
        for (double v = first; v <= axis.hi + 1e-12 * span; v += step) {
            ticks.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
        }
    }
    return ticks;
}

}  // namespace

std::string render_svg(const FigureSpec& spec) {
    Axis ax{spec.log_x};
    Axis ay{spec.log_y};

    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo;
    double y_lo = x_lo;
    double y_hi = -x_lo;
    for (const Series& s : spec.series) {
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!ax.valid(s.x[k]) || !ay.valid(s.y[k])) continue;
            x_lo = std::min(x_lo, s.x[k]);
            x_hi = std::max(x_hi, s.x[k]);
            y_lo = std::min(y_lo, s.y[k]);
            y_hi = std::max(y_hi, s.y[k]);
            if (s.band_lo.size() == s.x.size() && ay.valid(s.band_lo[k])) {
                y_lo = std::min(y_lo, s.band_lo[k]);
            }
            if (s.band_hi.size() == s.x.size() && ay.valid(s.band_hi[k])) {
                y_hi = std::max(y_hi, s.band_hi[k]);
            }
        }
    }
    if (!std::isfinite(x_lo) || !std::isfinite(y_lo)) {
        throw std::runtime_error("render_svg: no finite data points");
    }
    if (std::isfinite(spec.ref_line_y) && ay.valid(spec.ref_line_y)) {
        y_lo = std::min(y_lo, spec.ref_line_y);
        y_hi = std::max(y_hi, spec.ref_line_y);
    }
    fit_axis(ax, x_lo, x_hi);
    fit_axis(ay, y_lo, y_hi);

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + plot_w * ax.unit(v); };
    auto py = [&](double v) { return kTop + plot_h * (1.0 - ay.unit(v)); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << escape_xml(spec.title)
        << "</text>\n";

    // Frame and ticks.
    out << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(plot_w)
        << "\" height=\"" << fmt(plot_h) << "\" fill=\"none\" stroke=\"#444444\"/>\n";
    for (double v : axis_ticks(ax)) {
        if (v < ax.lo || v > ax.hi) continue;
        const double x = px(v);
        out << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(kTop) << "\" x2=\"" << fmt(x)
            << "\" y2=\"" << fmt(kTop + plot_h) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(kTop + plot_h + 18)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt_tick(v) << "</text>\n";
    }
    for (double v : axis_ticks(ay)) {
        if (v < ay.lo || v > ay.hi) continue;
        const double y = py(v);
        out << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(y) << "\" x2=\""
            << fmt(kLeft + plot_w) << "\" y2=\"" << fmt(y) << "\" stroke=\"#dddddd\"/>\n";
        out << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(y + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt_tick(v) << "</text>\n";
    }
    out << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 14)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << escape_xml(spec.x_label) << "</text>\n";
    out << "<text x=\"18\" y=\"" << fmt(kTop + plot_h / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
        << "transform=\"rotate(-90 18 " << fmt(kTop + plot_h / 2) << ")\">"
        << escape_xml(spec.y_label) << "</text>\n";

    if (std::isfinite(spec.ref_line_y) && ay.valid(spec.ref_line_y)) {
        const double y = py(spec.ref_line_y);
        out << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(y) << "\" x2=\""
            << fmt(kLeft + plot_w) << "\" y2=\"" << fmt(y)
            << "\" stroke=\"#888888\" stroke-dasharray=\"6 4\"/>\n";
    }

    // Bands first so every polyline stays visible.
    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const Series& s = spec.series[si];
        const std::string color =
            s.color.empty() ? kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))] : s.color;
        if (s.band_lo.size() != s.x.size() || s.band_hi.size() != s.x.size()) continue;
        std::string pts;
        int used = 0;
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!ax.valid(s.x[k]) || !ay.valid(s.band_hi[k])) continue;
            pts += fmt(px(s.x[k])) + "," + fmt(py(s.band_hi[k])) + " ";
            ++used;
        }
        for (std::size_t k = s.x.size(); k-- > 0;) {
            if (!ax.valid(s.x[k]) || !ay.valid(s.band_lo[k])) continue;
            pts += fmt(px(s.x[k])) + "," + fmt(py(s.band_lo[k])) + " ";
        }
        if (used >= 2) {
            pts.pop_back();
            out << "<polygon points=\"" << pts << "\" fill=\"" << color
                << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
        }
    }

    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const Series& s = spec.series[si];
        const std::string color =
            s.color.empty() ? kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))] : s.color;
        std::string pts;
        int used = 0;
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (!ax.valid(s.x[k]) || !ay.valid(s.y[k])) continue;
            pts += fmt(px(s.x[k])) + "," + fmt(py(s.y[k])) + " ";
            ++used;
        }
        if (used == 0) continue;
        pts.pop_back();
        out << "<polyline points=\"" << pts << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.6\"/>\n";
        // Legend entry.
        const double ly = kTop + 16.0 + 16.0 * static_cast<double>(si);
        out << "<line x1=\"" << fmt(kLeft + plot_w - 130) << "\" y1=\"" << fmt(ly) << "\" x2=\""
            << fmt(kLeft + plot_w - 110) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"1.6\"/>\n";
        out << "<text x=\"" << fmt(kLeft + plot_w - 104) << "\" y=\"" << fmt(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(s.label)
            << "</text>\n";
    }

    out << "</svg>\n";
    return out.str();
}

}  // namespace qtdlab
