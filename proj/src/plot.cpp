#include "mval/plot.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

namespace mval {

namespace {

constexpr double kWidth = 720, kHeight = 440;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 60;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

double nice_step(double range, int target) {
    const double raw = range / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double f : {1.0, 2.0, 5.0}) {
        if (raw <= f * mag) return f * mag;
    }
    return 10.0 * mag;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
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

}  // namespace

std::string render_svg(const std::vector<CurvePoint>& curve, const std::string& title) {
    if (curve.empty()) throw InvalidArgument("nothing to plot: empty curve list");
    std::vector<std::string> methods;
    for (const auto& p : curve) {
        if (std::find(methods.begin(), methods.end(), p.method) == methods.end()) methods.push_back(p.method);
    }

    double x_max = 0, y_max = 0;
    for (const auto& p : curve) {
        x_max = std::max(x_max, static_cast<double>(p.labels_used));
        y_max = std::max(y_max, p.mean_error);
    }
    const double x_step = nice_step(std::max(x_max, 1.0), 8);
    const double y_step = nice_step(y_max > 0 ? y_max : 1.0, 5);
    x_max = std::ceil(std::max(x_max, 1.0) / x_step) * x_step;
    y_max = std::ceil((y_max > 0 ? y_max : 1.0) / y_step) * y_step;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + x / x_max * pw; };
    auto sy = [&](double y) { return kTop + ph - y / y_max * ph; };

    std::string s = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
        "font-family=\"sans-serif\" font-size=\"12\">\n"
        "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
        kWidth, kHeight);
    if (!title.empty()) {
        s += fmt::format("<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                         kLeft + pw / 2, escape(title));
    }

    s += "<g stroke=\"#ddd\">\n";
    for (double y = y_step; y <= y_max + y_step / 2; y += y_step) {
        s += fmt::format("<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\"/>\n", kLeft, sy(y), kLeft + pw, sy(y));
    }
    s += "</g>\n";
    s += fmt::format(
        "<g stroke=\"black\"><line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\"/>"
        "<line x1=\"{0}\" y1=\"{3}\" x2=\"{0}\" y2=\"{1}\"/></g>\n",
        kLeft, kTop + ph, kLeft + pw, kTop);

    for (double x = 0; x <= x_max + x_step / 2; x += x_step) {
        s += fmt::format("<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", sx(x), kTop + ph + 18, x);
    }
    for (double y = 0; y <= y_max + y_step / 2; y += y_step) {
        s += fmt::format("<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3g}</text>\n", kLeft - 6, sy(y) + 4, y);
    }
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">labels used</text>\n", kLeft + pw / 2,
                     kHeight - 15);
    s += fmt::format(
        "<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">mean error</text>\n",
        kTop + ph / 2);

    for (std::size_t m = 0; m < methods.size(); ++m) {
        const char* color = kColors[m % std::size(kColors)];
        std::string points;
        for (const auto& p : curve) {
            if (p.method != methods[m]) continue;
            if (!points.empty()) points += ' ';
            points += fmt::format("{:.2f},{:.2f}", sx(static_cast<double>(p.labels_used)), sy(p.mean_error));
        }
        s += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", color, points);
        const double ly = kTop + 10 + 20 * static_cast<double>(m);
        s += fmt::format(
            "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>"
            "<text x=\"{4}\" y=\"{5}\">{6}</text>\n",
            kLeft + pw + 15, ly, kLeft + pw + 40, color, kLeft + pw + 46, ly + 4, escape(methods[m]));
    }
    s += "</svg>\n";
    return s;
}

void emit_svg(const std::vector<CurvePoint>& curve, const std::filesystem::path& path, const std::string& title) {
    write_text(path, render_svg(curve, title));
}

}  // namespace mval
