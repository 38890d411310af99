#pragma once

#include "lswarm/arena/arena.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace lswarm::arena {

/// One line of a trajectory log: an agent's pose after a step and the
/// event it triggered, if any.
struct TrajectoryRecord {
    std::size_t step = 0;
    std::size_t agent = 0;
    double x = 0.0;
    double y = 0.0;
    double heading = 0.0;
    std::string carrying = "none"; // colour name or "none"
    std::string event = "none";    // EventKind name or "none"

    friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

class TrajectoryLog {
public:
    /// Appends one record per agent for the state reached by `outcome`.
    void record(const ArenaState& state, const StepOutcome& outcome);

    [[nodiscard]] const std::vector<TrajectoryRecord>& records() const noexcept { return records_; }

    /// CSV with header `step,agent_id,x,y,heading,carrying,event`.
    void write(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;
    static TrajectoryLog read(std::istream& in);
    static TrajectoryLog load(const std::filesystem::path& path);

private:
    std::vector<TrajectoryRecord> records_;
};

} // namespace lswarm::arena
