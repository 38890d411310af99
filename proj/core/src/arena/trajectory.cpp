#include "lswarm/arena/trajectory.hpp"

#include "lswarm/common/error.hpp"
#include "lswarm/common/numfmt.hpp"

#include <fstream>
#include <sstream>

namespace lswarm::arena {

void TrajectoryLog::record(const ArenaState& state, const StepOutcome& outcome)
{
    for (std::size_t a = 0; a < state.agents.size(); ++a) {
        const Agent& agent = state.agents[a];
        TrajectoryRecord r;
        r.step = state.step;
        r.agent = a;
        r.x = agent.pose.position.x;
        r.y = agent.pose.position.y;
        r.heading = agent.pose.heading;
        if (agent.carrying) {
            r.carrying = state.task.palette.at(state.boxes.at(*agent.carrying).color);
        }
        for (const Event& e : outcome.events) {
            if (e.agent == a) {
                r.event = std::string(to_string(e.kind));
            }
        }
        records_.push_back(std::move(r));
    }
}

void TrajectoryLog::write(std::ostream& out) const
{
    out << "step,agent_id,x,y,heading,carrying,event\n";
    for (const auto& r : records_) {
        out << r.step << ',' << r.agent << ',' << format_double(r.x) << ',' << format_double(r.y) << ','
            << format_double(r.heading) << ',' << r.carrying << ',' << r.event << '\n';
    }
}

void TrajectoryLog::save(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write trajectory log " + path.string());
    }
    write(out);
}

TrajectoryLog TrajectoryLog::read(std::istream& in)
{
    TrajectoryLog log;
    std::string line;
    if (!std::getline(in, line) || trim(line) != "step,agent_id,x,y,heading,carrying,event") {
        throw FormatError("trajectory log: missing header");
    }
    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::istringstream is(line);
        for (std::string cell; std::getline(is, cell, ',');) {
            f.push_back(cell);
        }
        if (f.size() != 7) {
            throw FormatError("trajectory log: expected 7 fields in '" + line + "'");
        }
        TrajectoryRecord r;
        r.step = static_cast<std::size_t>(parse_int(f[0]));
        r.agent = static_cast<std::size_t>(parse_int(f[1]));
        r.x = parse_double(f[2]);
        r.y = parse_double(f[3]);
        r.heading = parse_double(f[4]);
        r.carrying = std::string(trim(f[5]));
        r.event = std::string(trim(f[6]));
        log.records_.push_back(std::move(r));
    }
    return log;
}

TrajectoryLog TrajectoryLog::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot read trajectory log " + path.string());
    }
    return read(in);
}

} // namespace lswarm::arena
