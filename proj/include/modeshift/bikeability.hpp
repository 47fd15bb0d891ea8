#ifndef MODESHIFT_BIKEABILITY_HPP
#define MODESHIFT_BIKEABILITY_HPP

#include <optional>
#include <string>
#include <vector>

#include "modeshift/likelihood.hpp"
#include "modeshift/params.hpp"
#include "modeshift/types.hpp"

namespace modeshift {

/// One trip evaluated for perceived bikeability. Car is the reference
/// mode and work the reference purpose; time is in scaled hours.
struct BikeabilityRecord {
    Mode mode = Mode::Car;
    double time_h = 0.0;
    bool work_trip = false;
    bool leisure_trip = false;
    bool errands_trip = false;
    bool full_time = false;
    bool woman = false;
    bool older = false;
    bool student = false;
    bool higher_ed = false;
    bool children = false;
    bool harsh_winter = false;
    std::optional<bool> bikeable;  // label; absent when scoring only
};

struct BikeabilityData {
    std::vector<BikeabilityRecord> records;
};

/// Columns of the bikeability CSV, in canonical order.
const std::vector<std::string>& bikeability_csv_columns();

BikeabilityData load_bikeability(const std::string& path, bool require_label);
BikeabilityData parse_bikeability(const std::string& csv_text, const std::string& origin,
                                  bool require_label);

/// Reference coefficient estimates for the bikeability model, shipped so
/// reference populations can be filtered without re-estimating.
ParameterSet bikeability_reference_params();

/// Linear utility of perceiving the trip as bikeable.
double bikeability_utility(const BikeabilityRecord& rec, const ParameterSet& params);

/// logistic(V).
double bikeability_prob(const BikeabilityRecord& rec, const ParameterSet& params);

/// Probability at or above the threshold counts as bikeable.
bool classify(const BikeabilityRecord& rec, const ParameterSet& params, double threshold = 0.5);

/// Binary-logit likelihood over labeled records; each record is its own
/// cluster for the robust covariance.
class BinaryLikelihood : public LogLikelihood {
  public:
    BinaryLikelihood(const BikeabilityData& data, ParameterSet params);

    const ParameterSet& parameter_template() const override { return tmpl_; }
    std::size_t n_obs() const override { return data_.records.size(); }
    std::size_t n_clusters() const override { return data_.records.size(); }
    double null_loglik() const override;
    double eval(const std::vector<double>& w, std::vector<double>* grad,
                std::vector<double>* scores) const override;

  private:
    const BikeabilityData& data_;
    ParameterSet tmpl_;
    std::vector<std::size_t> free_idx_;
};

}  // namespace modeshift

#endif
