#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "cli.hpp"
#include "holomorse/error.hpp"

namespace holomorse::cli {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    std::string s = buf;
    if (s == "-0.0000") s = "0.0000";
    return s;
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

}  // namespace

std::string render_svg(const Figure& fig) {
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    bool any = false;
    auto grow = [&](cx z) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return;
        any = true;
        x0 = std::min(x0, z.real());
        x1 = std::max(x1, z.real());
        // svg y points down
        y0 = std::min(y0, -z.imag());
        y1 = std::max(y1, -z.imag());
    };
    std::size_t drawable = 0;
    for (const auto& p : fig.paths) {
        if (p.points.size() >= 2) ++drawable;
        for (cx z : p.points) grow(z);
    }
    for (const auto& m : fig.markers) grow(m.at);
    if (drawable == 0 || !any) raise(ErrorCode::EmptyGeometry, "nothing to draw");

    double w = x1 - x0, h = y1 - y0, span = std::max({w, h, 1e-9});
    if (w < 1e-9 * span) w = span;
    if (h < 1e-9 * span) h = span;
    const double cx0 = 0.5 * (x0 + x1), cy0 = 0.5 * (y0 + y1);
    x0 = cx0 - 0.5 * w * 1.1;
    y0 = cy0 - 0.5 * h * 1.1;
    w *= 1.1;
    h *= 1.1;
    const double stroke = 0.004 * std::max(w, h);

    std::vector<std::string> paths, marks;
    for (const auto& p : fig.paths) {
        if (p.points.size() < 2) continue;
        std::string d;
        for (std::size_t i = 0; i < p.points.size(); ++i) {
            d += i == 0 ? "M" : " L";
            d += fmt(p.points[i].real()) + " " + fmt(-p.points[i].imag());
        }
        if (p.closed) d += " Z";
        std::string cls = p.cls.empty() ? "" : " class=\"" + escape(p.cls) + "\"";
        paths.push_back("<path" + cls + " d=\"" + d + "\" fill=\"none\" stroke=\"black\" stroke-width=\"" +
                        fmt(stroke) + "\"/>");
    }
    for (const auto& m : fig.markers) {
        std::string s = "<circle cx=\"" + fmt(m.at.real()) + "\" cy=\"" + fmt(-m.at.imag()) + "\" r=\"" +
                        fmt(3.0 * stroke) + "\" fill=\"red\"/>";
        if (!m.label.empty())
            s += "<text x=\"" + fmt(m.at.real() + 4.0 * stroke) + "\" y=\"" + fmt(-m.at.imag()) + "\" font-size=\"" +
                 fmt(12.0 * stroke) + "\">" + escape(m.label) + "</text>";
        marks.push_back(s);
    }
    std::sort(paths.begin(), paths.end());
    std::sort(marks.begin(), marks.end());

    std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fmt(x0) + " " + fmt(y0) + " " + fmt(w) + " " +
           fmt(h) + "\">\n";
    for (const auto& p : paths) out += "  " + p + "\n";
    for (const auto& m : marks) out += "  " + m + "\n";
    out += "</svg>\n";
    return out;
}

}  // namespace holomorse::cli
