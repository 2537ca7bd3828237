#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sirpinn/losses.hpp"
#include "sirpinn/sir_model.hpp"

namespace sirpinn {

/// Scaled training observations on the unit time interval.
struct ObservationSet {
    enum class Cadence { daily, weekly };

    std::vector<double> times_scaled;       // strictly increasing, in [0, 1]
    std::vector<double> infections_scaled;  // reported infected or daily new infections
    std::vector<double> hosp_scaled;        // daily hospitalizations (may be empty)
    ScalingConstants scales;
    Cadence cadence = Cadence::daily;
    bool infections_are_daily = false;  // daily new infections instead of prevalence

    std::size_t size() const { return times_scaled.size(); }
    bool has_hosp() const { return !hosp_scaled.empty(); }
};

/// Scale raw day-indexed series into training variables. Times must lie
/// within the scenario window.
ObservationSet scale_time_and_counts(const std::vector<double>& times_days,
                                     const std::vector<double>& infections,
                                     const std::vector<double>& hospitalizations,
                                     const ModelParams& params, const ScalingConstants& scales);

/// Independent Poisson draw around each mean; deterministic in the seed.
std::vector<double> gen_poisson_obs(const std::vector<double>& means, std::uint64_t seed);

/// Mean + zero-centered Gaussian with std = cv * mean, rounded to the nearest
/// integer, negatives clamped to zero.
std::vector<double> gen_gaussian_obs(const std::vector<double>& means, double cv,
                                     std::uint64_t seed);

/// Every 7th sample starting from the first; daily input only.
ObservationSet subsample_weekly(const ObservationSet& daily);

/// Ingest a surveillance CSV `date,new_cases,new_hospitalizations` with
/// contiguous ISO dates. New cases are corrected by the reporting ratio and
/// the count scales are set to the maxima of the corrected series.
ObservationSet load_surveillance_csv(const std::string& path, double alpha_r,
                                     const ModelParams& params);

/// Number of data rows a surveillance file holds (window length in days).
std::size_t surveillance_csv_days(const std::string& path);

}  // namespace sirpinn
