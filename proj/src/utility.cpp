#include "modeshift/utility.hpp"

#include <cmath>

namespace modeshift {

namespace {

constexpr const char* kCoefNames[kNumCoefs] = {
    "ASC_walk",   "ASC_bike",     "ASC_car",    "ASC_pt",     "ASC_taxi",    "ASC_ab",
    "ASC_abpt",   "B_cost",       "B_time",     "B_activetime", "B_wait",    "B_ptshortwait",
    "B_carowner", "B_children",   "B_errands",  "B_fulltime", "B_higher_ed", "B_highincome",
    "B_hotsummer", "B_leisure",   "B_older",    "B_white",    "B_work",
};

// V0..V6 term lists, signs exactly as specified.
const std::vector<UtilityTerm> kWalkTerms = {
    {Coef::AscWalk, +1, Reg::One},        {Coef::ActiveTime, +1, Reg::WalkTimeH},
    {Coef::White, +1, Reg::White},        {Coef::HigherEd, +1, Reg::HigherEd},
    {Coef::Children, -1, Reg::Children},  {Coef::HotSummer, -1, Reg::HotSummer},
};

const std::vector<UtilityTerm> kBikeTerms = {
    {Coef::AscBike, +1, Reg::One},          {Coef::ActiveTime, +1, Reg::BikeTimeH},
    {Coef::CarOwner, -1, Reg::CarOwner},    {Coef::HighIncome, -1, Reg::HighIncome},
    {Coef::FullTime, -1, Reg::FullTime},    {Coef::HigherEd, +1, Reg::HigherEd},
    {Coef::Leisure, -1, Reg::Leisure},      {Coef::Work, +1, Reg::Work},
};

const std::vector<UtilityTerm> kCarTerms = {
    {Coef::AscCar, +1, Reg::One},        {Coef::Cost, +1, Reg::CostScaled},
    {Coef::Time, +1, Reg::CarTimeH},     {Coef::CarOwner, +1, Reg::CarOwner},
    {Coef::White, -1, Reg::White},       {Coef::Older, +1, Reg::Older},
    {Coef::Leisure, -1, Reg::Leisure},   {Coef::Work, -1, Reg::Work},
    {Coef::Errands, +1, Reg::Errands},
};

const std::vector<UtilityTerm> kTransitTerms = {
    {Coef::AscPt, +1, Reg::One},           {Coef::Cost, +1, Reg::CostScaled},
    {Coef::Time, +1, Reg::TransitTimeH},   {Coef::FullTime, +1, Reg::FullTime},
    {Coef::HigherEd, +1, Reg::HigherEd},   {Coef::Children, -1, Reg::Children},
    {Coef::Leisure, -1, Reg::Leisure},     {Coef::Work, +1, Reg::Work},
    {Coef::HotSummer, -1, Reg::HotSummer}, {Coef::PtShortWait, +1, Reg::PtShortWait},
};

const std::vector<UtilityTerm> kTaxiTerms = {
    {Coef::AscTaxi, +1, Reg::One},           {Coef::Cost, +1, Reg::CostScaled},
    {Coef::Time, +1, Reg::CarTimeH},         {Coef::Wait, +1, Reg::TaxiWaitH},
    {Coef::HighIncome, +1, Reg::HighIncome}, {Coef::Leisure, +1, Reg::Leisure},
    {Coef::HotSummer, +1, Reg::HotSummer},
};

const std::vector<UtilityTerm> kAbTerms = {
    {Coef::AscAb, +1, Reg::One},         {Coef::Cost, +1, Reg::CostScaled},
    {Coef::ActiveTime, +1, Reg::BikeTimeH}, {Coef::Wait, +1, Reg::AbWaitH},
    {Coef::FullTime, -1, Reg::FullTime}, {Coef::Older, -1, Reg::Older},
    {Coef::HigherEd, -1, Reg::HigherEd}, {Coef::Work, -1, Reg::Work},
};

const std::vector<UtilityTerm> kAbptTerms = {
    {Coef::AscAbpt, +1, Reg::One},           {Coef::Cost, +1, Reg::CostScaled},
    {Coef::ActiveTime, +1, Reg::AbptBikeTimeH}, {Coef::Time, +1, Reg::AbptPtTimeH},
    {Coef::Wait, +1, Reg::AbWaitH},          {Coef::CarOwner, -1, Reg::CarOwner},
    {Coef::HigherEd, -1, Reg::HigherEd},     {Coef::HotSummer, +1, Reg::HotSummer},
    {Coef::PtShortWait, +1, Reg::PtShortWait},
};

const std::vector<UtilityTerm>* kTermsByMode[kNumModes] = {
    &kWalkTerms, &kBikeTerms, &kCarTerms, &kTransitTerms, &kTaxiTerms, &kAbTerms, &kAbptTerms,
};

}  // namespace

const char* coef_param_name(Coef c) { return kCoefNames[static_cast<int>(c)]; }

std::span<const UtilityTerm> utility_terms(Mode m) { return *kTermsByMode[static_cast<int>(m)]; }

double regressor_value(const ChoiceObservation& obs, Reg reg, Mode mode) {
    const TripAttributes& a = obs.attributes;
    const Sociodemographics& s = obs.socio;
    switch (reg) {
        case Reg::One: return 1.0;
        case Reg::CostScaled: return obs.costs_usd[static_cast<int>(mode)] / 10.0;
        case Reg::WalkTimeH: return a.walk_time_h;
        case Reg::BikeTimeH: return a.bike_time_h;
        case Reg::CarTimeH: return a.car_time_h;
        case Reg::TransitTimeH: return a.transit_time_h;
        case Reg::AbptBikeTimeH: return a.abpt_bike_time_h;
        case Reg::AbptPtTimeH: return a.abpt_total_time_h - a.abpt_bike_time_h;
        case Reg::AbWaitH: return obs.ab_wait_h;
        case Reg::TaxiWaitH: return a.taxi_wait_h;
        case Reg::PtShortWait: return a.pt_short_wait ? 1.0 : 0.0;
        case Reg::CarOwner: return s.car_owner ? 1.0 : 0.0;
        case Reg::Children: return s.children ? 1.0 : 0.0;
        case Reg::Errands: return s.errands_trip ? 1.0 : 0.0;
        case Reg::FullTime: return s.full_time ? 1.0 : 0.0;
        case Reg::HigherEd: return s.higher_ed ? 1.0 : 0.0;
        case Reg::HighIncome: return s.high_income ? 1.0 : 0.0;
        case Reg::HotSummer: return s.hot_summer ? 1.0 : 0.0;
        case Reg::Leisure: return s.leisure_trip ? 1.0 : 0.0;
        case Reg::Older: return s.older ? 1.0 : 0.0;
        case Reg::White: return s.white ? 1.0 : 0.0;
        case Reg::Work: return s.work_trip ? 1.0 : 0.0;
    }
    throw std::logic_error("unhandled regressor");
}

ScaledInputs scale_inputs(double raw_minutes, double raw_usd) {
    if (!(raw_minutes >= 0.0) || !std::isfinite(raw_minutes)) {
        throw std::domain_error("minutes must be finite and >= 0");
    }
    if (!(raw_usd >= 0.0) || !std::isfinite(raw_usd)) {
        throw std::domain_error("cost must be finite and >= 0");
    }
    return ScaledInputs{raw_minutes / 60.0, raw_usd / 10.0};
}

std::array<double, kNumModes> mode_costs(const TripAttributes& attrs, const CostBook& book,
                                         double ab_cost_rate) {
    if (!(ab_cost_rate >= 0.0)) throw std::domain_error("ab_cost_rate must be >= 0");
    book.validate();
    std::array<double, kNumModes> c{};
    c[static_cast<int>(Mode::Walk)] = 0.0;
    c[static_cast<int>(Mode::Bike)] = 0.0;
    c[static_cast<int>(Mode::Car)] = attrs.distance_mi * book.car_usd_per_mile;
    c[static_cast<int>(Mode::Transit)] = book.pt_usd_per_trip;
    c[static_cast<int>(Mode::Taxi)] = book.taxi_fixed_usd +
                                      book.taxi_usd_per_mile * attrs.distance_mi +
                                      book.taxi_usd_per_min * attrs.car_time_h * 60.0;
    c[static_cast<int>(Mode::Ab)] = ab_cost_rate * attrs.bike_time_h * 60.0;
    c[static_cast<int>(Mode::Abpt)] =
        ab_cost_rate * attrs.abpt_bike_time_h * 60.0 + book.pt_usd_per_trip;
    return c;
}

UtilityCoeffs UtilityCoeffs::from(const ParameterSet& params) {
    UtilityCoeffs c;
    for (int i = 0; i < kNumCoefs; ++i) c.value[i] = params.get(kCoefNames[i]);
    return c;
}

std::array<std::optional<double>, kNumModes> assemble_utilities(const ChoiceObservation& obs,
                                                                const UtilityCoeffs& coeffs,
                                                                double lv_effect) {
    std::array<std::optional<double>, kNumModes> v{};
    for (int m = 0; m < kNumModes; ++m) {
        Mode mode = static_cast<Mode>(m);
        if (!obs.availability.has(mode)) continue;
        double u = 0.0;
        for (const UtilityTerm& t : utility_terms(mode)) {
            u += t.sign * coeffs.value[static_cast<int>(t.coef)] * regressor_value(obs, t.reg, mode);
        }
        if (mode == Mode::Ab || mode == Mode::Abpt) u += lv_effect;
        v[m] = u;
    }
    return v;
}

std::array<std::optional<double>, kNumModes> assemble_utilities(const ChoiceObservation& obs,
                                                                const ParameterSet& params,
                                                                double lv_effect) {
    return assemble_utilities(obs, UtilityCoeffs::from(params), lv_effect);
}

}  // namespace modeshift
