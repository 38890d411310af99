#pragma once

#include "lswarm/arena/arena.hpp"
#include "lswarm/expio/config.hpp"
#include "lswarm/expio/table.hpp"

#include <string>
#include <utility>
#include <vector>

namespace lswarm::expio {

enum class Stroke { solid, dashed, dotted };

struct Series {
    std::string label;
    std::string color;
    Stroke stroke = Stroke::solid;
    std::vector<std::pair<double, double>> points;
};

struct LinePlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<Series> series;
    std::vector<double> markers; // vertical lines, e.g. task drifts
};

/// Static SVG document.
std::string render_svg(const LinePlot& plot);

/// SVG colour for a palette colour name.
std::string svg_color(std::string_view name);

/// Current-task best fitness as solid lines coloured by task, previous-task
/// retention dashed (population best) and dotted (current champion), with
/// a marker at every drift.
LinePlot fitness_plot(const CsvTable& fitness, const CsvTable& retention, const ExperimentConfig& cfg);

/// `species_count` has columns generation, alive_species.
LinePlot species_count_plot(const CsvTable& species_count, const ExperimentConfig& cfg);

/// One horizontal bar per species from creation to extinction.
std::string lifespan_svg(const CsvTable& species, std::size_t total_generations);

/// Top-down arena snapshot: drop zone, free boxes, agents with headings.
std::string arena_frame_svg(const arena::ArenaState& state, const arena::ArenaConfig& config);

} // namespace lswarm::expio
