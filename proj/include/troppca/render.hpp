#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "troppca/tropical.hpp"
#include "troppca/ultrametric.hpp"

namespace troppca {

enum class ColorMode { by_topology, by_group, lower_percentile_black };

/// Accepts "topology", "group", "percentile" and the by-/lower- long forms.
ColorMode parse_color_mode(std::string_view text);

struct RenderSpec {
    int width = 640;
    int height = 480;
    ColorMode mode = ColorMode::by_topology;
    double percentile = 5.0;  // rarest topologies covering this share of points are drawn black

    /// Throws InvalidInput unless 0 < percentile < 100 and the canvas is at
    /// least 200x150.
    void validate() const;
};

/// The parts of a fit JSON document the renderer and the stats/project
/// commands need.
struct FitFile {
    int m = 0;
    std::vector<std::string> labels;
    std::vector<TropicalPoint> vertices;
    std::vector<TropicalPoint> projections;
    std::vector<std::vector<double>> lambdas;
    std::vector<int> groups;
};

/// Throws ParseError on malformed JSON or missing fields.
FitFile read_fit_json(const std::string& text);

/// Planar position (lambda_2 - lambda_1, lambda_3 - lambda_1).
std::pair<double, double> plane_coords(const std::vector<double>& lambdas);

struct TopologyClass {
    TreeTopology topology;
    std::size_t count = 0;
    bool black = false;
    std::string color;
};

/// Distinct topologies of the projected points, most frequent first (ties by
/// topology order), with colours assigned. Classes are marked black in
/// ascending-frequency order while their cumulative count stays within
/// percentile% of the points. `index[i]` is the class of projection i.
std::vector<TopologyClass> classify_topologies(const FitFile& fit, double percentile, std::vector<std::size_t>& index);

/// SVG scatter of the projections. Throws NumericError("render requires 3
/// vertices") unless the fit has s = 3, InvalidInput for by-group mode
/// without group labels.
std::string render_svg(const FitFile& fit, const RenderSpec& spec);

}  // namespace troppca
