#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "gamma.hpp"

namespace hcurve {

/// Static SVG rendering of a traced set: polylines for the arcs, crosses for
/// hard edges, circles for soft edges, optional dots for extra point clouds.
/// Axis limits fit the edges with a 20% margin; output formatting is fixed so
/// identical inputs give byte-identical files.
class SvgPlot {
public:
    SvgPlot(double width = 640.0, double height = 640.0) : w_(width), h_(height) {}

    void add_arc(const std::vector<cplx>& pts) { arcs_.push_back(pts); }
    void add_hard_edge(cplx e) { hard_.push_back(e); }
    void add_soft_edge(cplx e) { soft_.push_back(e); }
    void add_dot(cplx p) { dots_.push_back(p); }

    void add(const GammaSet& gs) {
        for (const GammaArc& a : gs.arcs) add_arc(a.points);
        for (cplx e : gs.hard_edges) add_hard_edge(e);
        for (cplx e : gs.soft_edges) add_soft_edge(e);
    }

    std::string render() const {
        double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
        auto grow = [&](cplx p) {
            x0 = std::min(x0, p.real());
            x1 = std::max(x1, p.real());
            y0 = std::min(y0, p.imag());
            y1 = std::max(y1, p.imag());
        };
        for (cplx e : hard_) grow(e);
        for (cplx e : soft_) grow(e);
        if (hard_.empty() && soft_.empty()) {
            for (const auto& a : arcs_)
                for (cplx p : a) grow(p);
            for (cplx p : dots_) grow(p);
        }
        if (!(x1 >= x0)) {
            x0 = y0 = -1.0;
            x1 = y1 = 1.0;
        }
        double mx = 0.2 * std::max(x1 - x0, 1e-9), my = 0.2 * std::max(y1 - y0, 1e-9);
        // keep the viewport square in data units so both axes share one scale
        double span = std::max(x1 - x0 + 2 * mx, y1 - y0 + 2 * my);
        double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
        x0 = cx - span / 2;
        y0 = cy - span / 2;
        double sx = w_ / span, sy = h_ / span;

        auto X = [&](double x) { return (x - x0) * sx; };
        auto Y = [&](double y) { return h_ - (y - y0) * sy; };
        auto num = [](double v) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.3f", v);
            return std::string(buf);
        };

        std::string out;
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w_) + "\" height=\"" +
               num(h_) + "\" viewBox=\"0 0 " + num(w_) + " " + num(h_) + "\">\n";
        out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        for (const auto& a : arcs_) {
            if (a.size() < 2) continue;
            out += "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.2\" points=\"";
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (i) out += " ";
                out += num(X(a[i].real())) + "," + num(Y(a[i].imag()));
            }
            out += "\"/>\n";
        }
        double r = 0.011 * w_;
        for (cplx e : hard_) {
            double x = X(e.real()), y = Y(e.imag());
            out += "<path stroke=\"#b03030\" stroke-width=\"1.6\" d=\"M" + num(x - r) + " " +
                   num(y - r) + " L" + num(x + r) + " " + num(y + r) + " M" + num(x - r) + " " +
                   num(y + r) + " L" + num(x + r) + " " + num(y - r) + "\"/>\n";
        }
        for (cplx e : soft_) {
            out += "<circle cx=\"" + num(X(e.real())) + "\" cy=\"" + num(Y(e.imag())) +
                   "\" r=\"" + num(r) + "\" fill=\"none\" stroke=\"#2e8b57\" stroke-width=\"1.6\"/>\n";
        }
        for (cplx p : dots_) {
            out += "<circle cx=\"" + num(X(p.real())) + "\" cy=\"" + num(Y(p.imag())) +
                   "\" r=\"2.0\" fill=\"#555555\"/>\n";
        }
        out += "</svg>\n";
        return out;
    }

    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Error("SvgPlot: cannot open " + path);
        f << render();
    }

private:
    double w_, h_;
    std::vector<std::vector<cplx>> arcs_;
    std::vector<cplx> hard_, soft_, dots_;
};

} // namespace hcurve
