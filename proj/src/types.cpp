#include "modeshift/types.hpp"

#include <bit>

namespace modeshift {

const char* mode_name(Mode m) { return kModeNames[static_cast<int>(m)]; }

Mode mode_from_index(int idx) {
    if (idx < 0 || idx >= kNumModes) {
        throw std::domain_error("mode index out of range: " + std::to_string(idx));
    }
    return static_cast<Mode>(idx);
}

Availability Availability::all() {
    Availability a;
    a.mask_ = 0x7f;
    return a;
}

Availability Availability::of(std::initializer_list<Mode> modes) {
    Availability a;
    for (Mode m : modes) a.add(m);
    return a;
}

int Availability::count() const { return std::popcount(static_cast<unsigned>(mask_)); }

void TripAttributes::validate() const {
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0.0)) throw std::domain_error(std::string(name) + " must be >= 0");
    };
    nonneg(walk_time_h, "walk_time_h");
    nonneg(bike_time_h, "bike_time_h");
    nonneg(car_time_h, "car_time_h");
    nonneg(transit_time_h, "transit_time_h");
    nonneg(abpt_bike_time_h, "abpt_bike_time_h");
    nonneg(abpt_total_time_h, "abpt_total_time_h");
    nonneg(taxi_wait_h, "taxi_wait_h");
    if (abpt_bike_time_h > abpt_total_time_h) {
        throw std::domain_error("abpt_bike_time_h exceeds abpt_total_time_h");
    }
    if (!(distance_mi >= 0.1 && distance_mi <= 30.0)) {
        throw std::domain_error("distance_mi outside the 0.1..30 ingestion range");
    }
}

void Sociodemographics::validate() const {
    int purposes = (work_trip ? 1 : 0) + (leisure_trip ? 1 : 0) + (errands_trip ? 1 : 0);
    if (purposes > 1) throw std::domain_error("trip purpose flags are mutually exclusive");
}

void CostBook::validate() const {
    if (car_usd_per_mile < 0 || pt_usd_per_trip < 0 || taxi_fixed_usd < 0 ||
        taxi_usd_per_mile < 0 || taxi_usd_per_min < 0) {
        throw std::domain_error("cost book entries must be >= 0");
    }
}

Mode ChoiceObservation::origin_mode() const {
    for (int m = 0; m < static_cast<int>(Mode::Ab); ++m) {
        if (availability.has(static_cast<Mode>(m))) return static_cast<Mode>(m);
    }
    throw DataError("observation has no conventional mode in its availability set");
}

}  // namespace modeshift
