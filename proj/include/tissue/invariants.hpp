/// @file invariants.hpp
/// @brief Seeded self-test battery of structural properties, and the random
/// generators it shares with the tests.
#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tissue/grid.hpp"
#include "tissue/stationary.hpp"

namespace tissue {

/// Uniform values in [-1, 1] on every cell.
[[nodiscard]] ScalarField random_cells(const GridSpec& g, std::mt19937_64& rng);

/// Uniform values in [-1, 1] on interior faces, zero on the walls.
[[nodiscard]] VectorField random_interior_faces(const GridSpec& g, std::mt19937_64& rng);

/// Each cell independently outside, tissue 1 or tissue 2 with equal odds (no margin).
[[nodiscard]] DomainPartition random_partition(const GridSpec& g, std::mt19937_64& rng);

struct InvariantResult {
    std::string name;
    int trials = 0;
    int failures = 0;
    std::string first_failure;  ///< description of the first failing trial

    [[nodiscard]] bool passed() const { return failures == 0; }
};

/// Runs every property with generators seeded from `seed`. Deterministic for a fixed seed.
[[nodiscard]] std::vector<InvariantResult> run_invariant_battery(std::uint64_t seed);

}  // namespace tissue
