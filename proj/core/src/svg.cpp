#include "speciso/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace speciso {
namespace {

struct Series {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
    bool markers = false;
    bool dashed = false;
};

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string value_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string render(const std::string& title, const std::string& x_label,
                   const std::string& y_label,
                   const std::vector<Series>& series) {
    const double width = 860, height = 540;
    const double left = 80, right = 24, top = 48, bottom = 56;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    double y_min_pos = x_min;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
            if (y > 0.0) y_min_pos = std::min(y_min_pos, y);
        }

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
        << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"28\" font-family=\"sans-serif\""
        << " font-size=\"16\" text-anchor=\"middle\">" << escape_xml(title)
        << "</text>\n";

    if (!std::isfinite(x_min) || !std::isfinite(y_min)) {
        svg << "<text x=\"" << width / 2 << "\" y=\"" << height / 2
            << "\" font-family=\"sans-serif\" font-size=\"14\""
            << " text-anchor=\"middle\">no finite data</text>\n</svg>\n";
        return svg.str();
    }

    const bool log_y = std::isfinite(y_min_pos) &&
                       y_max / std::max(y_min_pos, 1e-300) > 1e3;
    double lo, hi;
    if (log_y) {
        lo = std::floor(std::log10(y_min_pos));
        hi = std::ceil(std::log10(y_max));
        if (hi <= lo) hi = lo + 1;
    } else {
        const double pad = (y_max - y_min) * 0.06 + 1e-12;
        lo = y_min - pad;
        hi = y_max + pad;
        if (!(y_min < 0.0)) lo = std::max(0.0, lo);
    }
    if (x_max <= x_min) x_max = x_min + 1;

    auto map_x = [&](double x) {
        return left + (x - x_min) / (x_max - x_min) * plot_w;
    };
    auto map_y = [&](double y) {
        const double t = log_y ? (std::log10(y) - lo) / (hi - lo)
                               : (y - lo) / (hi - lo);
        return top + plot_h - t * plot_h;
    };

    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"#444\"/>\n";

    // x ticks: integer-friendly steps
    const double x_span = x_max - x_min;
    double x_step = std::pow(10.0, std::floor(std::log10(x_span / 5.0)));
    while (x_span / x_step > 8.0) x_step *= 2.0;
    for (double x = std::ceil(x_min / x_step) * x_step; x <= x_max + 1e-9;
         x += x_step) {
        const double px = map_x(x);
        svg << "<line x1=\"" << coord(px) << "\" y1=\"" << top + plot_h
            << "\" x2=\"" << coord(px) << "\" y2=\"" << top + plot_h + 5
            << "\" stroke=\"#444\"/>\n";
        svg << "<text x=\"" << coord(px) << "\" y=\"" << top + plot_h + 20
            << "\" font-family=\"sans-serif\" font-size=\"12\""
            << " text-anchor=\"middle\">" << value_label(x) << "</text>\n";
    }
    svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
        << "\" font-family=\"sans-serif\" font-size=\"13\""
        << " text-anchor=\"middle\">" << escape_xml(x_label) << "</text>\n";

    // y ticks
    if (log_y) {
        int decade_step = 1;
        while ((hi - lo) / decade_step > 9) ++decade_step;
        for (double d = lo; d <= hi + 1e-9; d += decade_step) {
            const double py = map_y(std::pow(10.0, d));
            svg << "<line x1=\"" << left << "\" y1=\"" << coord(py)
                << "\" x2=\"" << left + plot_w << "\" y2=\"" << coord(py)
                << "\" stroke=\"#ddd\"/>\n";
            svg << "<text x=\"" << left - 8 << "\" y=\"" << coord(py + 4)
                << "\" font-family=\"sans-serif\" font-size=\"12\""
                << " text-anchor=\"end\">1e" << static_cast<int>(d)
                << "</text>\n";
        }
    } else {
        for (int t = 0; t <= 5; ++t) {
            const double y = lo + (hi - lo) * t / 5.0;
            const double py = map_y(y);
            svg << "<line x1=\"" << left << "\" y1=\"" << coord(py)
                << "\" x2=\"" << left + plot_w << "\" y2=\"" << coord(py)
                << "\" stroke=\"#ddd\"/>\n";
            svg << "<text x=\"" << left - 8 << "\" y=\"" << coord(py + 4)
                << "\" font-family=\"sans-serif\" font-size=\"12\""
                << " text-anchor=\"end\">" << value_label(y) << "</text>\n";
        }
    }
    svg << "<text x=\"18\" y=\"" << top + plot_h / 2
        << "\" font-family=\"sans-serif\" font-size=\"13\""
        << " text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << top + plot_h / 2 << ")\">" << escape_xml(y_label) << "</text>\n";

    for (const auto& s : series) {
        std::ostringstream pts;
        bool any = false;
        for (auto [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (log_y && y <= 0.0) continue;
            pts << coord(map_x(x)) << "," << coord(map_y(y)) << " ";
            any = true;
        }
        if (!any) continue;
        if (s.points.size() > 1)
            svg << "<polyline fill=\"none\" stroke=\"" << s.color
                << "\" stroke-width=\"1.6\""
                << (s.dashed ? " stroke-dasharray=\"6,4\"" : "")
                << " points=\"" << pts.str() << "\"/>\n";
        if (s.markers || s.points.size() == 1)
            for (auto [x, y] : s.points) {
                if (!std::isfinite(x) || !std::isfinite(y)) continue;
                if (log_y && y <= 0.0) continue;
                svg << "<circle cx=\"" << coord(map_x(x)) << "\" cy=\""
                    << coord(map_y(y)) << "\" r=\"2.6\" fill=\"" << s.color
                    << "\"/>\n";
            }
    }

    double legend_y = top + 16;
    for (const auto& s : series) {
        svg << "<line x1=\"" << left + 12 << "\" y1=\"" << legend_y - 4
            << "\" x2=\"" << left + 40 << "\" y2=\"" << legend_y - 4
            << "\" stroke=\"" << s.color << "\" stroke-width=\"2\""
            << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
        svg << "<text x=\"" << left + 46 << "\" y=\"" << legend_y
            << "\" font-family=\"sans-serif\" font-size=\"12\">"
            << escape_xml(s.label) << "</text>\n";
        legend_y += 17;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace

std::string bound_plot_svg(const BoundReport& report) {
    const double area_pow =
        std::pow(report.measures.area, 2.0 / report.n);
    const Constants cs = constants(report.n);

    std::vector<Series> series;
    Series achieved{"achieved lambda_k |S|^(2/n)", "#1f77b4", {}, true, false};
    Series weyl{"Weyl line c_n k^(2/n)", "#7f7f7f", {}, false, true};
    Series eucl{"euclidean bound", "#d62728", {}, false, false};
    Series gen{"curvature bound", "#2ca02c", {}, false, false};
    for (const auto& rec : report.records) {
        achieved.points.emplace_back(rec.k, rec.normalized);
        weyl.points.emplace_back(
            rec.k, cs.weyl_c * std::pow(static_cast<double>(rec.k),
                                        2.0 / report.n));
        eucl.points.emplace_back(rec.k, rec.euclidean);
        gen.points.emplace_back(rec.k, rec.general * area_pow);
    }
    series.push_back(std::move(achieved));
    series.push_back(std::move(weyl));
    series.push_back(std::move(eucl));
    series.push_back(std::move(gen));

    const char* metric_colors[] = {"#9467bd", "#8c564b", "#e377c2",
                                   "#bcbd22", "#17becf"};
    for (std::size_t i = 0; i < report.r0_list.size(); ++i) {
        Series m{"metric bound r0=" + value_label(report.r0_list[i]),
                 metric_colors[i % 5],
                 {},
                 false,
                 false};
        for (const auto& rec : report.records)
            if (i < rec.metric.size())
                m.points.emplace_back(rec.k, rec.metric[i] * area_pow);
        series.push_back(std::move(m));
    }

    for (const auto& rec : report.records)
        if (rec.reilly_chavel) {
            Series rc{"Reilly-Chavel at k=2", "#ff7f0e", {}, true, false};
            rc.points.emplace_back(rec.k, *rec.reilly_chavel);
            series.push_back(std::move(rc));
        }

    return render("eigenvalue bounds: " + report.mesh_tag, "k",
                  "lambda_k |S|^(2/n)", series);
}

std::string torus_plot_svg(const std::vector<TorusRow>& rows) {
    Series lam{"normalized lambda_2", "#1f77b4", {}, true, false};
    Series iso{"isoperimetric ratio", "#d62728", {}, true, false};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        lam.points.emplace_back(static_cast<double>(i + 1),
                                rows[i].normalized_lambda2);
        iso.points.emplace_back(static_cast<double>(i + 1),
                                rows[i].iso_ratio);
    }
    return render("shrinking sphere in a fixed ambient volume", "i",
                  "value", {lam, iso});
}

}  // namespace speciso
