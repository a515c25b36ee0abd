#include "fracid/app/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace fracid::app::svg {

namespace {

constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
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

struct Frame {
    double x0, x1, y0, y1;
    bool log_x;
    double px(double x) const {
        const double u = log_x ? (std::log10(x) - std::log10(x0)) / (std::log10(x1) - std::log10(x0)) : (x - x0) / (x1 - x0);
        return kLeft + u * (kW - kLeft - kRight);
    }
    double py(double y) const { return kH - kBottom - (y - y0) / (y1 - y0) * (kH - kTop - kBottom); }
};

Frame frame_for(const std::vector<Series>& series, bool log_x, bool include_zero) {
    double x0 = INFINITY, x1 = -INFINITY, y0 = include_zero ? 0.0 : INFINITY, y1 = include_zero ? 0.0 : -INFINITY;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || (log_x && s.x[i] <= 0)) continue;
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    }
    if (!std::isfinite(x0)) x0 = 0, x1 = 1;
    if (!std::isfinite(y0)) y0 = 0, y1 = 1;
    if (x1 == x0) x1 = x0 + (log_x ? x0 : 1.0);
    if (y1 == y0) y1 = y0 + 1.0;
    const double pad = 0.05 * (y1 - y0);
    return {x0, x1, y0 - pad, y1 + pad, log_x};
}

std::string header(const std::string& title) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kW) + "\" height=\"" + num(kH) +
           "\" viewBox=\"0 0 " + num(kW) + " " + num(kH) +
           "\" font-family=\"sans-serif\" font-size=\"11\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
           "<text x=\"" + num(kW / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + escape(title) +
           "</text>\n";
}

std::string axes(const Frame& f, const std::string& xlabel, const std::string& ylabel) {
    std::string s;
    const double l = kLeft, r = kW - kRight, t = kTop, b = kH - kBottom;
    s += "<rect x=\"" + num(l) + "\" y=\"" + num(t) + "\" width=\"" + num(r - l) + "\" height=\"" + num(b - t) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double u = i / 4.0;
        const double xv = f.log_x ? std::pow(10.0, std::log10(f.x0) + u * (std::log10(f.x1) - std::log10(f.x0)))
                                  : f.x0 + u * (f.x1 - f.x0);
        const double yv = f.y0 + u * (f.y1 - f.y0);
        s += "<text x=\"" + num(f.px(xv)) + "\" y=\"" + num(b + 15) + "\" text-anchor=\"middle\">" + tick(xv) +
             "</text>\n";
        s += "<text x=\"" + num(l - 5) + "\" y=\"" + num(f.py(yv) + 4) + "\" text-anchor=\"end\">" + tick(yv) +
             "</text>\n";
    }
    s += "<text x=\"" + num((l + r) / 2) + "\" y=\"" + num(kH - 12) + "\" text-anchor=\"middle\">" + escape(xlabel) +
         "</text>\n";
    s += "<text x=\"14\" y=\"" + num((t + b) / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
         num((t + b) / 2) + ")\">" + escape(ylabel) + "</text>\n";
    return s;
}

std::string legend(const std::vector<Series>& series) {
    std::string s;
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].name.empty()) continue;
        const double y = kTop + 14 + 14 * static_cast<double>(i);
        s += "<line x1=\"" + num(kW - kRight - 110) + "\" y1=\"" + num(y - 4) + "\" x2=\"" + num(kW - kRight - 92) +
             "\" y2=\"" + num(y - 4) + "\" stroke=\"" + kPalette[i % 8] + "\" stroke-width=\"2\"/>\n";
        s += "<text x=\"" + num(kW - kRight - 88) + "\" y=\"" + num(y) + "\">" + escape(series[i].name) + "</text>\n";
    }
    return s;
}

} // namespace

std::string line_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Series>& series, bool log_x) {
    const Frame f = frame_for(series, log_x, false);
    std::string s = header(title) + axes(f, xlabel, ylabel);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& sr = series[k];
        std::string pts;
        // thin long series to at most ~2000 vertices
        const std::size_t n = std::min(sr.x.size(), sr.y.size());
        const std::size_t stride = std::max<std::size_t>(1, n / 2000);
        for (std::size_t i = 0; i < n; i += stride) {
            if (!std::isfinite(sr.y[i]) || (log_x && sr.x[i] <= 0)) continue;
            pts += num(f.px(sr.x[i])) + "," + num(f.py(sr.y[i])) + " ";
        }
        if (n > 0 && (n - 1) % stride != 0 && std::isfinite(sr.y[n - 1]))
            pts += num(f.px(sr.x[n - 1])) + "," + num(f.py(sr.y[n - 1])) + " ";
        s += "<polyline fill=\"none\" stroke=\"" + std::string(kPalette[k % 8]) + "\" stroke-width=\"1.5\" points=\"" +
             pts + "\"/>\n";
    }
    return s + legend(series) + "</svg>\n";
}

std::string stem_plot(const std::string& title, const std::string& xlabel, const std::string& ylabel,
                      const std::vector<Series>& series) {
    const Frame f = frame_for(series, false, true);
    std::string s = header(title) + axes(f, xlabel, ylabel);
    s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(f.py(0)) + "\" x2=\"" + num(kW - kRight) + "\" y2=\"" +
         num(f.py(0)) + "\" stroke=\"#888\"/>\n";
    const double dx = series.size() > 1 ? 4.0 : 0.0;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& sr = series[k];
        const double off = (static_cast<double>(k) - (static_cast<double>(series.size()) - 1) / 2) * dx;
        for (std::size_t i = 0; i < sr.x.size() && i < sr.y.size(); ++i) {
            if (!std::isfinite(sr.y[i])) continue;
            const double x = f.px(sr.x[i]) + off;
            s += "<line x1=\"" + num(x) + "\" y1=\"" + num(f.py(0)) + "\" x2=\"" + num(x) + "\" y2=\"" +
                 num(f.py(sr.y[i])) + "\" stroke=\"" + kPalette[k % 8] + "\"/>\n";
            s += "<circle cx=\"" + num(x) + "\" cy=\"" + num(f.py(sr.y[i])) + "\" r=\"3\" fill=\"" + kPalette[k % 8] +
                 "\"/>\n";
        }
    }
    return s + legend(series) + "</svg>\n";
}

std::string pole_zero_map(const std::string& title, const std::vector<std::complex<double>>& poles,
                          const std::vector<std::complex<double>>& zeros, double cone_deg, double sheet_deg) {
    double r = 0.0;
    for (const auto& p : poles) r = std::max(r, std::abs(p));
    for (const auto& z : zeros) r = std::max(r, std::abs(z));
    if (r == 0.0 || !std::isfinite(r)) r = 1.0;
    r *= 1.15;
    const double side = kH - kTop - kBottom;
    const double cx = kW / 2, cy = kTop + side / 2, scale = side / (2 * r);
    auto X = [&](double re) { return cx + re * scale; };
    auto Y = [&](double im) { return cy - im * scale; };
    std::string s = header(title);
    s += "<rect x=\"" + num(cx - side / 2) + "\" y=\"" + num(kTop) + "\" width=\"" + num(side) + "\" height=\"" +
         num(side) + "\" fill=\"none\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + num(X(-r)) + "\" y1=\"" + num(cy) + "\" x2=\"" + num(X(r)) + "\" y2=\"" + num(cy) +
         "\" stroke=\"#888\"/>\n";
    s += "<line x1=\"" + num(cx) + "\" y1=\"" + num(Y(-r)) + "\" x2=\"" + num(cx) + "\" y2=\"" + num(Y(r)) +
         "\" stroke=\"#888\"/>\n";
    auto ray = [&](double deg, const char* colour) {
        const double a = deg * std::numbers::pi / 180.0;
        for (double sign : {1.0, -1.0}) {
            const double ex = r * std::cos(a), ey = sign * r * std::sin(a);
            const double k = std::min(1.0, r / std::max(std::abs(ex), std::abs(ey)));
            s += "<line x1=\"" + num(cx) + "\" y1=\"" + num(cy) + "\" x2=\"" + num(X(ex * k)) + "\" y2=\"" +
                 num(Y(ey * k)) + "\" stroke=\"" + colour + "\" stroke-dasharray=\"4 3\"/>\n";
        }
    };
    ray(cone_deg, "#d62728");
    ray(sheet_deg, "#2ca02c");
    for (const auto& p : poles) {
        const double x = X(p.real()), y = Y(p.imag());
        s += "<path d=\"M" + num(x - 4) + " " + num(y - 4) + " L" + num(x + 4) + " " + num(y + 4) + " M" + num(x - 4) +
             " " + num(y + 4) + " L" + num(x + 4) + " " + num(y - 4) + "\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
    }
    for (const auto& z : zeros)
        s += "<circle cx=\"" + num(X(z.real())) + "\" cy=\"" + num(Y(z.imag())) +
             "\" r=\"4\" fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"1.5\"/>\n";
    s += "<text x=\"" + num(cx + side / 2 + 8) + "\" y=\"" + num(kTop + 12) + "\">x pole</text>\n";
    s += "<text x=\"" + num(cx + side / 2 + 8) + "\" y=\"" + num(kTop + 26) + "\">o zero</text>\n";
    s += "<text x=\"" + num(cx + side / 2 + 8) + "\" y=\"" + num(kTop + 40) + "\" fill=\"#d62728\">stability " +
         tick(cone_deg) + " deg</text>\n";
    s += "<text x=\"" + num(cx + side / 2 + 8) + "\" y=\"" + num(kTop + 54) + "\" fill=\"#2ca02c\">sheet " +
         tick(sheet_deg) + " deg</text>\n";
    return s + "</svg>\n";
}

} // namespace fracid::app::svg
