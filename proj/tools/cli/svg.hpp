#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace qtdlab {

/// One plotted curve: a polyline, optionally with a shaded band (same length
/// as the vertex arrays) drawn at fill opacity behind the line.
struct Series {
    std::string label;
    std::string color;  // empty picks from the default palette
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> band_lo;
    std::vector<double> band_hi;
};

/// Figure description rendered to a standalone SVG. Rendering is a pure
/// function of this struct: identical specs give identical bytes.
struct FigureSpec {
    std::string kind;  // mse_vs_lr | improvement_vs_updates | error_vs_m | optimal_lr_vs_updates
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    double ref_line_y = std::numeric_limits<double>::quiet_NaN();
    std::vector<Series> series;
};

std::string render_svg(const FigureSpec& spec);

}  // namespace qtdlab
