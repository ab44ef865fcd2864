#pragma once

#include <string>
#include <vector>

namespace kgwave {

/**
 * Minimal static line-plot writer: linear axes, tick labels, optional legend.
 * Output is a self-contained SVG document string.
 */
class SvgPlot {
  public:
    SvgPlot(int width, int height, std::string title, std::string xlabel,
            std::string ylabel);

    /// Polyline through (x[i], y[i]); non-finite points split the line.
    void add_line(const std::vector<double>& x, const std::vector<double>& y,
                  const std::string& color, const std::string& label = "");
    /// Circle markers at (x[i], y[i]).
    void add_markers(const std::vector<double>& x, const std::vector<double>& y,
                     const std::string& color, const std::string& label = "");

    [[nodiscard]] std::string render() const;

    [[nodiscard]] int width() const { return width_; }
    [[nodiscard]] int height() const { return height_; }

    friend std::string svg_panel_row(const std::vector<const SvgPlot*>& panels);

  private:
    void body(std::string& out) const;

    struct Series {
        std::vector<double> x, y;
        std::string color, label;
        bool markers = false;
    };
    int width_, height_;
    std::string title_, xlabel_, ylabel_;
    std::vector<Series> series_;
};

/// Lay several plots out side by side in a single SVG document.
[[nodiscard]] std::string svg_panel_row(const std::vector<const SvgPlot*>& panels);

} // namespace kgwave
