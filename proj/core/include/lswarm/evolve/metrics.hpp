#pragma once

#include "lswarm/neat/population.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <vector>

namespace lswarm::evolve {

struct FitnessRow {
    std::size_t generation = 0;
    int task_id = 0;
    double best_fitness = 0.0; // C: best raw fitness on the current task
    double mean_fitness = 0.0;
    std::size_t n_species = 0;

    friend bool operator==(const FitnessRow&, const FitnessRow&) = default;
};

struct RetentionRow {
    std::size_t generation = 0;
    int eval_task_id = 0;
    double r_pop = 0.0; // best previous-task fitness in the population
    double r_top = 0.0; // previous-task fitness of the current-task champion

    friend bool operator==(const RetentionRow&, const RetentionRow&) = default;
};

struct ForgettingRow {
    std::size_t boundary_generation = 0;
    int task_id = 0;
    double f_pop = 0.0;
    double f_top = 0.0;

    friend bool operator==(const ForgettingRow&, const ForgettingRow&) = default;
};

struct CensusRow {
    std::size_t generation = 0;
    std::vector<neat::SpeciesId> alive;
    std::vector<std::size_t> sizes; // parallel to alive
    std::vector<neat::SpeciesId> created;
    std::vector<neat::SpeciesId> extinct;

    friend bool operator==(const CensusRow&, const CensusRow&) = default;
};

/// Mean genetic distance of the population to the regularization reference.
struct ReferenceRow {
    std::size_t generation = 0;
    double mean_distance = 0.0;

    friend bool operator==(const ReferenceRow&, const ReferenceRow&) = default;
};

struct SpeciesLifespan {
    neat::SpeciesId species_id = 0;
    std::size_t created_at = 0;
    std::optional<std::size_t> extinct_at;
    std::size_t peak_size = 0;

    friend bool operator==(const SpeciesLifespan&, const SpeciesLifespan&) = default;
};

/// F = C(previous population) - R(current population).
constexpr double forgetting(double previous_best, double retention) noexcept { return previous_best - retention; }

/// Builds species lifespans from per-generation census snapshots.
class SpeciesTracker {
public:
    /// Species present for the first time are created at `generation`;
    /// species seen before but absent now went extinct at `generation`.
    /// Returns the (created, extinct) id lists.
    std::pair<std::vector<neat::SpeciesId>, std::vector<neat::SpeciesId>>
    observe(std::size_t generation, const std::map<neat::SpeciesId, std::size_t>& alive_sizes);

    [[nodiscard]] std::vector<SpeciesLifespan> lifespans() const;
    [[nodiscard]] std::size_t alive_count() const noexcept;

    static SpeciesTracker restore(const std::vector<SpeciesLifespan>& rows);

private:
    std::map<neat::SpeciesId, SpeciesLifespan> rows_;
};

std::map<neat::SpeciesId, std::size_t> census_of(const neat::Population& pop);

struct LifelongMetrics {
    std::vector<FitnessRow> fitness;
    std::vector<RetentionRow> retention;
    std::vector<ForgettingRow> forgetting;
    std::vector<CensusRow> census;
    std::vector<ReferenceRow> reference;
    std::vector<SpeciesLifespan> species;

    friend bool operator==(const LifelongMetrics&, const LifelongMetrics&) = default;
};

// CSV files and their fixed column order:
//   fitness.csv    generation,task_id,best_fitness,mean_fitness,n_species
//   retention.csv  generation,eval_task_id,r_pop,r_top
//   forgetting.csv boundary_generation,task_id,f_pop,f_top
//   species.csv    species_id,created_at,extinct_at,peak_size
//   census.csv     generation,alive,sizes,created,extinct   (ids ';'-separated)
//   reference.csv  generation,mean_distance
void write_metrics(const std::filesystem::path& dir, const LifelongMetrics& metrics);
LifelongMetrics read_metrics(const std::filesystem::path& dir);

} // namespace lswarm::evolve
