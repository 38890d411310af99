#include "lswarm/expio/plot.hpp"

#include "lswarm/common/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace lswarm::expio {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 170.0; // legend column
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(std::string_view s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '&':
            out += "&amp;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

// Round step for roughly `n` ticks over `span`.
double tick_step(double span, int n)
{
    const double raw = span / n;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) {
            return m * mag;
        }
    }
    return 10.0 * mag;
}

std::string dash_of(Stroke s)
{
    switch (s) {
    case Stroke::dashed:
        return " stroke-dasharray=\"8 5\"";
    case Stroke::dotted:
        return " stroke-dasharray=\"2 4\"";
    case Stroke::solid:
        break;
    }
    return "";
}

std::string task_color(const ExperimentConfig& cfg, int task_id)
{
    if (task_id >= 0 && static_cast<std::size_t>(task_id) < cfg.tasks.size()) {
        return svg_color(cfg.tasks[static_cast<std::size_t>(task_id)].target);
    }
    return "black";
}

std::vector<double> drift_generations(const ExperimentConfig& cfg)
{
    std::vector<double> out;
    for (std::size_t i = 1; i < cfg.schedule.size(); ++i) {
        out.push_back(static_cast<double>(i * cfg.generations_per_task));
    }
    return out;
}

} // namespace

std::string svg_color(std::string_view name)
{
    static const std::map<std::string_view, std::string_view> overrides{{"yellow", "gold"}};
    const auto it = overrides.find(name);
    return std::string(it == overrides.end() ? name : it->second);
}

std::string render_svg(const LinePlot& plot)
{
    double x0 = std::numeric_limits<double>::infinity();
    double x1 = -x0;
    double y0 = x0;
    double y1 = -x0;
    for (const auto& s : plot.series) {
        for (const auto& [x, y] : s.points) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    }
    for (double m : plot.markers) {
        x0 = std::min(x0, m);
        x1 = std::max(x1, m);
    }
    if (!std::isfinite(x0)) {
        x0 = 0.0;
        x1 = 1.0;
    }
    if (!std::isfinite(y0)) {
        y0 = 0.0;
        y1 = 1.0;
    }
    if (x1 == x0) {
        x1 = x0 + 1.0;
    }
    if (y1 == y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double ypad = 0.05 * (y1 - y0);
    y0 -= ypad;
    y1 += ypad;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return kTop + (y1 - y) / (y1 - y0) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" << escape(plot.title)
      << "</text>\n";

    const double xs = tick_step(x1 - x0, 8);
    for (double t = std::ceil(x0 / xs) * xs; t <= x1 + 1e-9; t += xs) {
        o << "<line x1=\"" << num(sx(t)) << "\" y1=\"" << kTop + ph << "\" x2=\"" << num(sx(t)) << "\" y2=\""
          << kTop + ph + 5 << "\" stroke=\"black\"/>";
        o << "<text x=\"" << num(sx(t)) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">" << num(t)
          << "</text>\n";
    }
    const double ys = tick_step(y1 - y0, 6);
    for (double t = std::ceil(y0 / ys) * ys; t <= y1 + 1e-9; t += ys) {
        o << "<line x1=\"" << kLeft << "\" y1=\"" << num(sy(t)) << "\" x2=\"" << kLeft + pw << "\" y2=\"" << num(sy(t))
          << "\" stroke=\"#e4e4e4\"/>";
        o << "<text x=\"" << kLeft - 8 << "\" y=\"" << num(sy(t) + 4) << "\" text-anchor=\"end\">" << num(t)
          << "</text>\n";
    }
    o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 14 << "\" text-anchor=\"middle\">"
      << escape(plot.x_label) << "</text>\n";
    o << "<text transform=\"translate(18 " << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(plot.y_label) << "</text>\n";

    for (double m : plot.markers) {
        o << "<line x1=\"" << num(sx(m)) << "\" y1=\"" << kTop << "\" x2=\"" << num(sx(m)) << "\" y2=\"" << kTop + ph
          << "\" stroke=\"grey\" stroke-dasharray=\"3 3\"/>\n";
    }
    for (const auto& s : plot.series) {
        if (s.points.empty()) {
            continue;
        }
        o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.8\"" << dash_of(s.stroke)
          << " points=\"";
        for (std::size_t i = 0; i < s.points.size(); ++i) {
            o << (i ? " " : "") << num(sx(s.points[i].first)) << ',' << num(sy(s.points[i].second));
        }
        o << "\"/>\n";
    }

    // Legend: one entry per distinct label.
    std::vector<const Series*> legend;
    for (const auto& s : plot.series) {
        if (!s.label.empty() && std::none_of(legend.begin(), legend.end(),
                                             [&](const Series* l) { return l->label == s.label; })) {
            legend.push_back(&s);
        }
    }
    double ly = kTop + 10;
    for (const Series* s : legend) {
        const double lx = kLeft + pw + 14;
        o << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 26 << "\" y2=\"" << ly << "\" stroke=\""
          << s->color << "\" stroke-width=\"1.8\"" << dash_of(s->stroke) << "/>";
        o << "<text x=\"" << lx + 32 << "\" y=\"" << ly + 4 << "\">" << escape(s->label) << "</text>\n";
        ly += 18;
    }
    o << "</svg>\n";
    return o.str();
}

LinePlot fitness_plot(const CsvTable& fitness, const CsvTable& retention, const ExperimentConfig& cfg)
{
    LinePlot plot{"Best fitness on current and previous tasks", "generation", "fitness", {}, drift_generations(cfg)};

    const auto gen = fitness.numbers("generation");
    const auto task = fitness.numbers("task_id");
    const auto best = fitness.numbers("best_fitness");
    for (std::size_t i = 0; i < gen.size(); ++i) {
        const int id = static_cast<int>(task[i]);
        // A new solid segment starts at every drift.
        if (plot.series.empty() || i == 0 || task[i] != task[i - 1]) {
            const std::string name = cfg.tasks.at(static_cast<std::size_t>(id)).target;
            plot.series.push_back({name + " (current)", task_color(cfg, id), Stroke::solid, {}});
        }
        plot.series.back().points.emplace_back(gen[i], best[i]);
    }

    const auto rgen = retention.numbers("generation");
    const auto rtask = retention.numbers("eval_task_id");
    const auto rpop = retention.numbers("r_pop");
    const auto rtop = retention.numbers("r_top");
    std::map<int, std::pair<Series, Series>> by_task;
    for (std::size_t i = 0; i < rgen.size(); ++i) {
        const int id = static_cast<int>(rtask[i]);
        auto [it, fresh] = by_task.try_emplace(id);
        if (fresh) {
            const std::string name = cfg.tasks.at(static_cast<std::size_t>(id)).target;
            it->second.first = {name + " R^pop", task_color(cfg, id), Stroke::dashed, {}};
            it->second.second = {name + " R^top", task_color(cfg, id), Stroke::dotted, {}};
        }
        it->second.first.points.emplace_back(rgen[i], rpop[i]);
        it->second.second.points.emplace_back(rgen[i], rtop[i]);
    }
    for (auto& [id, pair] : by_task) {
        plot.series.push_back(std::move(pair.first));
        plot.series.push_back(std::move(pair.second));
    }
    return plot;
}

LinePlot species_count_plot(const CsvTable& species_count, const ExperimentConfig& cfg)
{
    LinePlot plot{"Alive species", "generation", "species", {}, drift_generations(cfg)};
    Series s{"alive species", "black", Stroke::solid, {}};
    const auto gen = species_count.numbers("generation");
    const auto alive = species_count.numbers("alive_species");
    for (std::size_t i = 0; i < gen.size(); ++i) {
        s.points.emplace_back(gen[i], alive[i]);
    }
    plot.series.push_back(std::move(s));
    return plot;
}

std::string lifespan_svg(const CsvTable& species, std::size_t total_generations)
{
    const std::size_t id_col = species.column("species_id");
    const std::size_t created_col = species.column("created_at");
    const std::size_t extinct_col = species.column("extinct_at");
    const double end = static_cast<double>(std::max<std::size_t>(total_generations, 1));
    const double row_h = 10.0;
    const double height = kTop + kBottom + row_h * static_cast<double>(std::max<std::size_t>(species.rows.size(), 1));
    const double pw = kWidth - kLeft - 40.0;
    auto sx = [&](double g) { return kLeft + g / end * pw; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">Species lifespans</text>\n";
    for (std::size_t r = 0; r < species.rows.size(); ++r) {
        const auto& row = species.rows[r];
        const double created = parse_double(row[created_col]);
        const bool alive = row[extinct_col].empty() || row[extinct_col] == "none";
        const double extinct = alive ? end : parse_double(row[extinct_col]);
        const double y = kTop + row_h * static_cast<double>(r);
        o << "<rect x=\"" << num(sx(created)) << "\" y=\"" << num(y) << "\" width=\""
          << num(std::max(1.0, sx(extinct) - sx(created))) << "\" height=\"" << row_h - 2
          << "\" fill=\"steelblue\"><title>species " << escape(row[id_col]) << "</title></rect>\n";
    }
    const double axis_y = height - kBottom + 6;
    o << "<line x1=\"" << kLeft << "\" y1=\"" << axis_y << "\" x2=\"" << kLeft + pw << "\" y2=\"" << axis_y
      << "\" stroke=\"black\"/>\n";
    const double step = tick_step(end, 8);
    for (double t = 0.0; t <= end + 1e-9; t += step) {
        o << "<text x=\"" << num(sx(t)) << "\" y=\"" << axis_y + 16 << "\" text-anchor=\"middle\">" << num(t)
          << "</text>\n";
    }
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << height - 8 << "\" text-anchor=\"middle\">generation</text>\n";
    o << "</svg>\n";
    return o.str();
}

std::string arena_frame_svg(const arena::ArenaState& state, const arena::ArenaConfig& config)
{
    constexpr double kScale = 24.0; // pixels per unit
    const double side = config.size * kScale;
    // Arena y grows upwards; SVG y grows downwards.
    auto px = [&](double x) { return num(x * kScale); };
    auto py = [&](double y) { return num(side - y * kScale); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << side << "\" height=\"" << side + 24
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"" << side << "\" height=\"" << side << "\" fill=\"white\" stroke=\"black\"/>\n";
    o << "<rect x=\"0\" y=\"0\" width=\"" << side << "\" height=\"" << num(config.drop_zone_depth * kScale)
      << "\" fill=\"#d8f0d8\"/>\n";
    const double half = config.sensitivity * kScale / 2.0;
    for (const auto& box : state.boxes) {
        if (box.status != arena::BoxStatus::free) {
            continue;
        }
        o << "<rect x=\"" << num(box.position.x * kScale - half) << "\" y=\"" << num(side - box.position.y * kScale - half)
          << "\" width=\"" << num(2 * half) << "\" height=\"" << num(2 * half) << "\" fill=\""
          << svg_color(state.task.palette.at(box.color)) << "\" stroke=\"black\" stroke-width=\"0.5\"/>\n";
    }
    const double r = 0.5 * kScale;
    for (const auto& agent : state.agents) {
        const auto& p = agent.pose.position;
        const std::string fill =
            agent.carrying ? svg_color(state.task.palette.at(state.boxes[*agent.carrying].color)) : "#cccccc";
        o << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y) << "\" r=\"" << num(r) << "\" fill=\"" << fill
          << "\" stroke=\"black\"/>";
        o << "<line x1=\"" << px(p.x) << "\" y1=\"" << py(p.y) << "\" x2=\""
          << px(p.x + 0.5 * std::cos(agent.pose.heading)) << "\" y2=\"" << py(p.y + 0.5 * std::sin(agent.pose.heading))
          << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    }
    o << "<text x=\"4\" y=\"" << side + 17 << "\">step " << state.step << "  retrieved " << state.retrieves
      << "  target " << escape(state.task.name()) << "</text>\n";
    o << "</svg>\n";
    return o.str();
}

} // namespace lswarm::expio
