#ifndef MODESHIFT_DATASET_HPP
#define MODESHIFT_DATASET_HPP

#include <string>
#include <vector>

#include "modeshift/types.hpp"

namespace modeshift {

struct IndividualBlock {
    std::string id;
    std::vector<std::size_t> rows;  // indices into Dataset::rows, sorted by task_index
};

/// Observations grouped by individual in first-appearance order. Rows
/// within an individual are kept sorted by task index so likelihoods are
/// invariant to input row order.
struct Dataset {
    std::vector<ChoiceObservation> rows;
    std::vector<IndividualBlock> individuals;

    std::size_t n_rows() const { return rows.size(); }
    std::size_t n_individuals() const { return individuals.size(); }

    /// Regroup rows (used after filtering or synthetic construction).
    static Dataset from_rows(std::vector<ChoiceObservation> rows);

    /// Subset by individual indices, preserving order.
    Dataset subset(const std::vector<std::size_t>& individual_idx) const;
};

/// Columns of the observation CSV, in canonical order.
const std::vector<std::string>& observation_csv_columns();

/// Load observations, validate invariants, and fill per-mode costs from
/// the cost book. Strict mode enforces the stated-preference availability
/// structure (both autonomous options plus exactly one conventional mode).
Dataset load_observations(const std::string& path, const CostBook& book = CostBook{});
Dataset parse_observations(const std::string& csv_text, const std::string& origin,
                           const CostBook& book = CostBook{});

/// Write observations in the canonical schema (used by fixtures).
std::string observations_to_csv(const Dataset& data);

}  // namespace modeshift

#endif
