#ifndef MODESHIFT_UTILITY_HPP
#define MODESHIFT_UTILITY_HPP

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "modeshift/params.hpp"
#include "modeshift/types.hpp"

namespace modeshift {

/// Coefficients entering the seven mode utilities. Enum order defines the
/// layout of coefficient snapshots used by the likelihood hot path.
enum class Coef : int {
    AscWalk,
    AscBike,
    AscCar,
    AscPt,
    AscTaxi,
    AscAb,
    AscAbpt,
    Cost,
    Time,
    ActiveTime,
    Wait,
    PtShortWait,
    CarOwner,
    Children,
    Errands,
    FullTime,
    HigherEd,
    HighIncome,
    HotSummer,
    Leisure,
    Older,
    White,
    Work,
    Count,
};

inline constexpr int kNumCoefs = static_cast<int>(Coef::Count);

/// Canonical parameter name for each coefficient (ASC_walk, B_cost, ...).
const char* coef_param_name(Coef c);

/// Per-alternative regressors referenced by the utility expressions.
enum class Reg : int {
    One,
    CostScaled,  // mode-specific out-of-pocket cost, tens of USD
    WalkTimeH,
    BikeTimeH,
    CarTimeH,
    TransitTimeH,
    AbptBikeTimeH,
    AbptPtTimeH,  // total minus bike legs
    AbWaitH,
    TaxiWaitH,
    PtShortWait,
    CarOwner,
    Children,
    Errands,
    FullTime,
    HigherEd,
    HighIncome,
    HotSummer,
    Leisure,
    Older,
    White,
    Work,
};

struct UtilityTerm {
    Coef coef;
    double sign;  // +1 or -1, exactly as the specification is written
    Reg reg;
};

/// Terms of V0..V6, one list per mode.
std::span<const UtilityTerm> utility_terms(Mode m);

/// Regressor value for one observation/alternative.
double regressor_value(const ChoiceObservation& obs, Reg reg, Mode mode);

/// Minutes to hours and USD to tens of USD (the model's scaling
/// conventions, applied at ingestion).
struct ScaledInputs {
    double hours;
    double cost_tens_usd;
};
ScaledInputs scale_inputs(double raw_minutes, double raw_usd);

/// Out-of-pocket cost per mode in USD for one trip under a cost book and
/// an autonomous-bicycle per-minute rate. Walk and personal bike are free.
std::array<double, kNumModes> mode_costs(const TripAttributes& attrs, const CostBook& book,
                                         double ab_cost_rate);

/// Flat coefficient snapshot resolved from a ParameterSet once, then
/// reused across rows.
struct UtilityCoeffs {
    std::array<double, kNumCoefs> value{};
    static UtilityCoeffs from(const ParameterSet& params);
};

/// V0..V6 for one observation. Unavailable alternatives are nullopt; the
/// latent-variable effect (0 for models without one) enters the two
/// autonomous-bicycle utilities only.
std::array<std::optional<double>, kNumModes> assemble_utilities(const ChoiceObservation& obs,
                                                                const UtilityCoeffs& coeffs,
                                                                double lv_effect);
std::array<std::optional<double>, kNumModes> assemble_utilities(const ChoiceObservation& obs,
                                                                const ParameterSet& params,
                                                                double lv_effect);

}  // namespace modeshift

#endif
