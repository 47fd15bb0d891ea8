#ifndef MODESHIFT_TYPES_HPP
#define MODESHIFT_TYPES_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace modeshift {

inline constexpr const char* kVersion = "0.1.0";

/// Travel alternatives. Index values are stable across all serialization.
enum class Mode : int {
    Walk = 0,
    Bike = 1,
    Car = 2,
    Transit = 3,
    Taxi = 4,
    Ab = 5,    // shared autonomous bicycle
    Abpt = 6,  // autonomous bicycle combined with public transit
};

inline constexpr int kNumModes = 7;

inline constexpr std::array<const char*, kNumModes> kModeNames = {
    "walk", "bike", "car", "transit", "taxi", "ab", "abpt"};

const char* mode_name(Mode m);
Mode mode_from_index(int idx);  // throws std::domain_error outside 0..6

/// Bitmask over Mode indices.
class Availability {
  public:
    Availability() = default;
    static Availability all();
    static Availability of(std::initializer_list<Mode> modes);

    void add(Mode m) { mask_ |= bit(m); }
    void remove(Mode m) { mask_ &= ~bit(m); }
    bool has(Mode m) const { return (mask_ & bit(m)) != 0; }
    int count() const;
    bool empty() const { return mask_ == 0; }
    std::uint8_t raw() const { return mask_; }

    bool operator==(const Availability&) const = default;

  private:
    static std::uint8_t bit(Mode m) { return static_cast<std::uint8_t>(1u << static_cast<int>(m)); }
    std::uint8_t mask_ = 0;
};

/// Trip-level travel times and distance. Times are stored in hours
/// (scaled at ingestion), distance in miles.
struct TripAttributes {
    double walk_time_h = 0.0;
    double bike_time_h = 0.0;
    double car_time_h = 0.0;
    double transit_time_h = 0.0;
    double abpt_bike_time_h = 0.0;
    double abpt_total_time_h = 0.0;
    double distance_mi = 0.0;
    double taxi_wait_h = 0.0;
    bool pt_short_wait = false;  // usual transit wait under 10 minutes

    void validate() const;  // throws std::domain_error on violated bounds
};

/// Respondent dummies used across the choice, structural, and
/// bikeability specifications.
struct Sociodemographics {
    bool high_income = false;
    bool low_income = false;
    bool full_time = false;
    bool higher_ed = false;
    bool children = false;
    bool car_owner = false;
    bool white = false;
    bool woman = false;
    bool older = false;
    bool young = false;
    bool student = false;
    bool hot_summer = false;
    bool harsh_winter = false;
    bool work_trip = false;
    bool leisure_trip = false;
    bool errands_trip = false;

    void validate() const;  // purpose flags mutually exclusive
};

/// Unit-cost assumptions for the conventional modes. All overridable.
struct CostBook {
    double car_usd_per_mile = 0.72;
    double pt_usd_per_trip = 1.5;
    double taxi_fixed_usd = 1.23;
    double taxi_usd_per_mile = 0.97;
    double taxi_usd_per_min = 0.28;

    void validate() const;  // all entries >= 0
};

/// One stated-preference task: the trip, the respondent, the scenario
/// attributes shown, and the recorded choice. Immutable after ingestion.
struct ChoiceObservation {
    std::string individual_id;
    int task_index = 1;  // 1..6
    TripAttributes attributes;
    Sociodemographics socio;
    double ab_cost_rate = 0.0;  // USD per riding minute
    double ab_wait_h = 0.0;     // autonomous-bicycle wait, hours
    Availability availability;
    Mode chosen = Mode::Car;
    int indicator_i10 = 0;  // Likert 1..5; 0 = missing
    int indicator_i11 = 0;
    double weight = 1.0;

    // Per-mode out-of-pocket cost in USD, filled at ingestion from the
    // cost book and the task's ab_cost_rate.
    std::array<double, kNumModes> costs_usd{};

    /// The single conventional mode in the availability set.
    Mode origin_mode() const;
};

// Error taxonomy. Data errors map to CLI exit code 2, config errors to 3.
class DataError : public std::runtime_error {
  public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kMilesToKm = 1.60934;

}  // namespace modeshift

#endif
