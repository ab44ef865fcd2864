#include "kgwave/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace kgwave {

namespace {

std::string num(double v, const char* fmt = "%.6g") {
    char buf[40];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (const char ch : s) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

/// Round up to a 1/2/5 decade multiple; used for tick spacing.
double nice_step(double span) {
    const double raw = span / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    if (frac <= 1.0) return mag;
    if (frac <= 2.0) return 2.0 * mag;
    if (frac <= 5.0) return 5.0 * mag;
    return 10.0 * mag;
}

} // namespace

SvgPlot::SvgPlot(int width, int height, std::string title, std::string xlabel,
                 std::string ylabel)
    : width_(width), height_(height), title_(std::move(title)),
      xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {
    if (width_ < 200 || height_ < 150)
        throw std::invalid_argument("SvgPlot: canvas too small");
}

void SvgPlot::add_line(const std::vector<double>& x, const std::vector<double>& y,
                       const std::string& color, const std::string& label) {
    if (x.size() != y.size())
        throw std::invalid_argument("SvgPlot: x/y size mismatch");
    series_.push_back({x, y, color, label, false});
}

void SvgPlot::add_markers(const std::vector<double>& x,
                          const std::vector<double>& y, const std::string& color,
                          const std::string& label) {
    if (x.size() != y.size())
        throw std::invalid_argument("SvgPlot: x/y size mismatch");
    series_.push_back({x, y, color, label, true});
}

std::string SvgPlot::render() const {
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(width_) + "\" height=\"" + std::to_string(height_) +
           "\" viewBox=\"0 0 " + std::to_string(width_) + " " +
           std::to_string(height_) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    body(out);
    out += "</svg>\n";
    return out;
}

std::string svg_panel_row(const std::vector<const SvgPlot*>& panels) {
    if (panels.empty())
        throw std::invalid_argument("svg_panel_row: need at least one panel");
    int total_w = 0, max_h = 0;
    for (const SvgPlot* p : panels) {
        total_w += p->width_;
        max_h = std::max(max_h, p->height_);
    }
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           std::to_string(total_w) + "\" height=\"" + std::to_string(max_h) +
           "\" viewBox=\"0 0 " + std::to_string(total_w) + " " +
           std::to_string(max_h) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    int ox = 0;
    for (const SvgPlot* p : panels) {
        out += "<g transform=\"translate(" + std::to_string(ox) + ",0)\">\n";
        p->body(out);
        out += "</g>\n";
        ox += p->width_;
    }
    out += "</svg>\n";
    return out;
}

void SvgPlot::body(std::string& out) const {
    const double ml = 72, mr = 24, mt = 44, mb = 56;
    const double pw = width_ - ml - mr;
    const double ph = height_ - mt - mb;

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
    double y0 = x0, y1 = -x0;
    for (const Series& s : series_)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    if (!(x0 <= x1)) { x0 = 0.0; x1 = 1.0; }
    if (!(y0 <= y1)) { y0 = 0.0; y1 = 1.0; }
    if (x1 - x0 <= 0.0) { x0 -= 0.5; x1 += 0.5; }
    if (y1 - y0 <= 0.0) { y0 -= 0.5; y1 += 0.5; }
    const double xpad = 0.04 * (x1 - x0), ypad = 0.06 * (y1 - y0);
    x0 -= xpad; x1 += xpad; y0 -= ypad; y1 += ypad;

    auto px = [&](double v) { return ml + (v - x0) / (x1 - x0) * pw; };
    auto py = [&](double v) { return mt + (y1 - v) / (y1 - y0) * ph; };

    out += "<text x=\"" + num(width_ / 2.0) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" +
           escape_xml(title_) + "</text>\n";

    // gridlines and ticks
    const double xstep = nice_step(x1 - x0), ystep = nice_step(y1 - y0);
    out += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (double v = std::ceil(x0 / xstep) * xstep; v <= x1 + 1e-12 * xstep;
         v += xstep) {
        const double X = px(v);
        out += "<line x1=\"" + num(X) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(X) +
               "\" y2=\"" + num(mt + ph) + "\" stroke=\"#ddd\"/>\n";
        out += "<text x=\"" + num(X) + "\" y=\"" + num(mt + ph + 16) +
               "\" text-anchor=\"middle\">" + num(v + 0.0) + "</text>\n";
    }
    for (double v = std::ceil(y0 / ystep) * ystep; v <= y1 + 1e-12 * ystep;
         v += ystep) {
        const double Y = py(v);
        out += "<line x1=\"" + num(ml) + "\" y1=\"" + num(Y) + "\" x2=\"" +
               num(ml + pw) + "\" y2=\"" + num(Y) + "\" stroke=\"#ddd\"/>\n";
        out += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(Y + 4) +
               "\" text-anchor=\"end\">" + num(v + 0.0) + "</text>\n";
    }
    out += "</g>\n";
    out += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(pw) +
           "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"#444\"/>\n";
    out += "<text x=\"" + num(ml + pw / 2.0) + "\" y=\"" + num(height_ - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           escape_xml(xlabel_) + "</text>\n";
    out += "<text x=\"18\" y=\"" + num(mt + ph / 2.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " + num(mt + ph / 2.0) + ")\">" +
           escape_xml(ylabel_) + "</text>\n";

    for (const Series& s : series_) {
        if (s.markers) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                out += "<circle cx=\"" + num(px(s.x[i]), "%.2f") + "\" cy=\"" +
                       num(py(s.y[i]), "%.2f") + "\" r=\"3\" fill=\"" + s.color +
                       "\"/>\n";
            }
        } else {
            std::string pts;
            bool open = false;
            auto flush = [&]() {
                if (open && !pts.empty())
                    out += "<polyline points=\"" + pts +
                           "\" fill=\"none\" stroke=\"" + s.color +
                           "\" stroke-width=\"1.5\"/>\n";
                pts.clear();
                open = false;
            };
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                    flush();
                    continue;
                }
                pts += num(px(s.x[i]), "%.2f");
                pts += ',';
                pts += num(py(s.y[i]), "%.2f");
                pts += ' ';
                open = true;
            }
            flush();
        }
    }

    // legend
    double ly = mt + 14;
    for (const Series& s : series_) {
        if (s.label.empty()) continue;
        const double lx = ml + pw - 150;
        out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
               num(lx + 22) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + s.color +
               "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + num(lx + 28) + "\" y=\"" + num(ly) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" +
               escape_xml(s.label) + "</text>\n";
        ly += 16;
    }
}

} // namespace kgwave
