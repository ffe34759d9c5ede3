#include "troppca/render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include <json.hpp>

#include "troppca/error.hpp"
#include "troppca/simd/kernels.hpp"

namespace troppca {

ColorMode parse_color_mode(std::string_view text) {
    if (text == "topology" || text == "by-topology") return ColorMode::by_topology;
    if (text == "group" || text == "by-group") return ColorMode::by_group;
    if (text == "percentile" || text == "lower-percentile-black") return ColorMode::lower_percentile_black;
    throw InvalidInput("unknown colour mode '" + std::string(text) + "'");
}

void RenderSpec::validate() const {
    if (!(percentile > 0.0 && percentile < 100.0)) throw InvalidInput("percentile must lie strictly between 0 and 100");
    if (width < 200 || height < 150) throw InvalidInput("canvas must be at least 200x150 pixels");
}

FitFile read_fit_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
    }
    FitFile f;
    try {
        f.m = j.at("m").get<int>();
        if (j.contains("labels")) f.labels = j.at("labels").get<std::vector<std::string>>();
        for (const auto& v : j.at("vertex_vectors")) f.vertices.emplace_back(v.get<std::vector<double>>());
        if (j.contains("projections")) {
            for (const auto& v : j.at("projections")) f.projections.emplace_back(v.get<std::vector<double>>());
        }
        if (j.contains("lambdas")) f.lambdas = j.at("lambdas").get<std::vector<std::vector<double>>>();
        if (j.contains("groups")) f.groups = j.at("groups").get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("unexpected fit JSON layout: ") + e.what(), 0);
    } catch (const InvalidInput& e) {
        throw ParseError(std::string("fit JSON holds an invalid point: ") + e.what(), 0);
    }
    if (f.vertices.empty()) throw ParseError("fit JSON has no vertices", 0);
    if (f.lambdas.size() != f.projections.size()) throw ParseError("fit JSON: lambdas and projections differ in length", 0);
    if (!f.groups.empty() && f.groups.size() != f.projections.size()) {
        throw ParseError("fit JSON: groups and projections differ in length", 0);
    }
    return f;
}

std::pair<double, double> plane_coords(const std::vector<double>& lambdas) {
    if (lambdas.size() != 3) throw NumericError("render requires 3 vertices");
    return {(lambdas[1] - lambdas[0]) + 0.0, (lambdas[2] - lambdas[0]) + 0.0};
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#17becf", "#bcbd22", "#7f7f7f"};
constexpr const char* kBlack = "#000000";

std::string fixed3(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x + 0.0, std::chars_format::fixed, 3);
    std::string s(buf, r.ptr);
    if (s == "-0.000") s = "0.000";
    return s;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::vector<TopologyClass> classify_topologies(const FitFile& fit, double percentile, std::vector<std::size_t>& index) {
    std::map<TreeTopology, std::size_t> counts;
    std::vector<TreeTopology> per_point;
    for (const auto& p : fit.projections) {
        per_point.push_back(topology_of(p, fit.m));
        ++counts[per_point.back()];
    }
    std::vector<TopologyClass> classes;
    for (const auto& [t, c] : counts) classes.push_back({t, c, false, ""});
    std::stable_sort(classes.begin(), classes.end(),
                     [](const TopologyClass& a, const TopologyClass& b) { return a.count > b.count; });

    // Rarest first: black while the running total stays within the percentile.
    const double limit = percentile / 100.0 * static_cast<double>(fit.projections.size());
    std::size_t running = 0;
    for (auto it = classes.rbegin(); it != classes.rend(); ++it) {
        running += it->count;
        if (static_cast<double>(running) > limit) break;
        it->black = true;
    }
    std::size_t next = 0;
    for (auto& c : classes) {
        c.color = c.black ? kBlack : kPalette[next++ % std::size(kPalette)];
    }

    index.clear();
    for (const auto& t : per_point) {
        for (std::size_t k = 0; k < classes.size(); ++k) {
            if (classes[k].topology == t) {
                index.push_back(k);
                break;
            }
        }
    }
    return classes;
}

std::string render_svg(const FitFile& fit, const RenderSpec& spec) {
    spec.validate();
    if (fit.vertices.size() != 3) throw NumericError("render requires 3 vertices");
    if (spec.mode == ColorMode::by_group && fit.groups.empty()) {
        throw InvalidInput("by-group colouring needs group labels in the fit file");
    }

    std::vector<std::pair<double, double>> pts;
    for (const auto& l : fit.lambdas) pts.push_back(plane_coords(l));
    std::vector<std::pair<double, double>> verts;
    for (const auto& v : fit.vertices) {
        std::vector<double> l;
        for (const auto& w : fit.vertices) l.push_back(simd::min_diff(v.coords(), w.coords()));
        verts.push_back(plane_coords(l));
    }

    std::vector<std::string> colors(pts.size(), kPalette[0]);
    std::vector<std::pair<std::string, std::string>> legend;  // colour, text
    if (spec.mode == ColorMode::by_group) {
        std::map<int, std::size_t> seen;
        for (int g : fit.groups) seen.emplace(g, seen.size());
        for (std::size_t i = 0; i < pts.size(); ++i) colors[i] = kPalette[seen[fit.groups[i]] % std::size(kPalette)];
        for (const auto& [g, k] : seen) legend.emplace_back(kPalette[k % std::size(kPalette)], "group " + std::to_string(g));
    } else {
        std::vector<std::size_t> index;
        auto classes = classify_topologies(fit, spec.percentile, index);
        if (spec.mode == ColorMode::lower_percentile_black) {
            for (auto& c : classes) c.color = c.black ? kBlack : kPalette[0];
        }
        for (std::size_t i = 0; i < pts.size(); ++i) colors[i] = classes[index[i]].color;
        for (const auto& c : classes) {
            legend.emplace_back(c.color, topology_newick(c.topology, fit.labels) + " (" + std::to_string(c.count) + ")");
        }
    }

    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    bool first = true;
    auto extend = [&](const std::pair<double, double>& p) {
        if (first) {
            xmin = xmax = p.first;
            ymin = ymax = p.second;
            first = false;
        }
        xmin = std::min(xmin, p.first);
        xmax = std::max(xmax, p.first);
        ymin = std::min(ymin, p.second);
        ymax = std::max(ymax, p.second);
    };
    for (const auto& p : pts) extend(p);
    for (const auto& p : verts) extend(p);

    const double legend_w = 0.3 * spec.width;
    const double margin = 30.0;
    const double plot_w = spec.width - legend_w - 2 * margin;
    const double plot_h = spec.height - 2 * margin;
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
    const double scale = std::min(plot_w, plot_h) / span;
    auto sx = [&](double x) { return margin + (x - xmin) * scale + (plot_w - (xmax - xmin) * scale) / 2; };
    auto sy = [&](double y) { return spec.height - margin - (y - ymin) * scale - (plot_h - (ymax - ymin) * scale) / 2; };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) + "\" height=\"" +
         std::to_string(spec.height) + "\" viewBox=\"0 0 " + std::to_string(spec.width) + " " +
         std::to_string(spec.height) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(spec.width) + "\" height=\"" + std::to_string(spec.height) +
         "\" fill=\"#ffffff\"/>\n";
    s += "<g id=\"hull\" fill=\"none\" stroke=\"#bbbbbb\">\n";
    for (std::size_t a = 0; a < 3; ++a) {
        const auto& p = verts[a];
        const auto& q = verts[(a + 1) % 3];
        s += "<line x1=\"" + fixed3(sx(p.first)) + "\" y1=\"" + fixed3(sy(p.second)) + "\" x2=\"" + fixed3(sx(q.first)) +
             "\" y2=\"" + fixed3(sy(q.second)) + "\"/>\n";
    }
    s += "</g>\n<g id=\"points\">\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        s += "<circle cx=\"" + fixed3(sx(pts[i].first)) + "\" cy=\"" + fixed3(sy(pts[i].second)) +
             "\" r=\"4\" fill=\"" + colors[i] + "\" fill-opacity=\"0.8\"/>\n";
    }
    s += "</g>\n<g id=\"vertices\" font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t k = 0; k < 3; ++k) {
        const double x = sx(verts[k].first), y = sy(verts[k].second);
        s += "<rect x=\"" + fixed3(x - 5) + "\" y=\"" + fixed3(y - 5) +
             "\" width=\"10\" height=\"10\" fill=\"none\" stroke=\"#000000\"/>\n";
        s += "<text x=\"" + fixed3(x + 8) + "\" y=\"" + fixed3(y - 8) + "\">V" + std::to_string(k + 1) + "</text>\n";
    }
    s += "</g>\n<g id=\"legend\" font-family=\"sans-serif\" font-size=\"11\">\n";
    const double lx = spec.width - legend_w + 10;
    double ly = margin;
    for (const auto& [color, text] : legend) {
        s += "<circle cx=\"" + fixed3(lx) + "\" cy=\"" + fixed3(ly) + "\" r=\"4\" fill=\"" + color + "\"/>\n";
        s += "<text x=\"" + fixed3(lx + 10) + "\" y=\"" + fixed3(ly + 4) + "\">" + xml_escape(text) + "</text>\n";
        ly += 16;
    }
    s += "</g>\n</svg>\n";
    return s;
}

}  // namespace troppca
