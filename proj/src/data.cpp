#include "sirpinn/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "sirpinn/csv.hpp"
#include "sirpinn/errors.hpp"
#include "sirpinn/rng.hpp"

namespace sirpinn {

ObservationSet scale_time_and_counts(const std::vector<double>& times_days,
                                     const std::vector<double>& infections,
                                     const std::vector<double>& hospitalizations,
                                     const ModelParams& params, const ScalingConstants& scales) {
    if (!infections.empty() && infections.size() != times_days.size()) {
        throw LengthMismatch("infection series length differs from time series");
    }
    if (!hospitalizations.empty() && hospitalizations.size() != times_days.size()) {
        throw LengthMismatch("hospitalization series length differs from time series");
    }
    ObservationSet obs;
    obs.scales = scales;
    obs.times_scaled.reserve(times_days.size());
    const double window = params.window();
    for (double t : times_days) {
        if (t < params.t_start || t > params.t_end) {
            throw OutOfWindow("observation time outside the scenario window");
        }
        obs.times_scaled.push_back((t - params.t_start) / window);
    }
    for (double v : infections) obs.infections_scaled.push_back(v / scales.count_scale);
    for (double v : hospitalizations) obs.hosp_scaled.push_back(v / scales.hosp_scale);
    return obs;
}

std::vector<double> gen_poisson_obs(const std::vector<double>& means, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(means.size());
    for (double m : means) out.push_back(static_cast<double>(rng.poisson(m)));
    return out;
}

std::vector<double> gen_gaussian_obs(const std::vector<double>& means, double cv,
                                     std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> out;
    out.reserve(means.size());
    for (double m : means) {
        if (m < 0.0) throw NegativeMean("gaussian observation mean must be >= 0");
        const double noisy = std::round(m + cv * m * rng.normal());
        out.push_back(std::max(0.0, noisy));
    }
    return out;
}

ObservationSet subsample_weekly(const ObservationSet& daily) {
    if (daily.cadence != ObservationSet::Cadence::daily) {
        throw WrongCadence("weekly subsampling expects a daily observation set");
    }
    ObservationSet weekly;
    weekly.scales = daily.scales;
    weekly.cadence = ObservationSet::Cadence::weekly;
    weekly.infections_are_daily = daily.infections_are_daily;
    for (std::size_t i = 0; i < daily.size(); i += 7) {
        weekly.times_scaled.push_back(daily.times_scaled[i]);
        if (!daily.infections_scaled.empty()) {
            weekly.infections_scaled.push_back(daily.infections_scaled[i]);
        }
        if (!daily.hosp_scaled.empty()) weekly.hosp_scaled.push_back(daily.hosp_scaled[i]);
    }
    return weekly;
}

namespace {

long iso_date_to_serial(const std::string& iso) {
    int y = 0, m = 0, d = 0;
    if (std::sscanf(iso.c_str(), "%d-%d-%d", &y, &m, &d) != 3) {
        throw NonContiguousDates("cannot parse ISO date: '" + iso + "'");
    }
    // days since civil epoch (Howard Hinnant's algorithm)
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

}  // namespace

ObservationSet load_surveillance_csv(const std::string& path, double alpha_r,
                                     const ModelParams& params) {
    CsvTable table = read_csv(path);
    const int date_col = table.column("date");
    const int case_col = table.column("new_cases");
    const int hosp_col = table.column("new_hospitalizations");
    if (date_col < 0 || case_col < 0 || hosp_col < 0) {
        throw MissingColumn("surveillance CSV needs date,new_cases,new_hospitalizations: " + path);
    }
    std::vector<double> cases, hosp;
    long prev_serial = 0;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const long serial = iso_date_to_serial(table.rows[r][static_cast<std::size_t>(date_col)]);
        if (r > 0 && serial != prev_serial + 1) {
            throw NonContiguousDates("surveillance dates must be contiguous daily");
        }
        prev_serial = serial;
        const double c = table.number(r, case_col);
        const double h = table.number(r, hosp_col);
        if (c < 0.0 || h < 0.0) throw NegativeCount("negative count in surveillance CSV");
        cases.push_back(c * alpha_r);
        hosp.push_back(h);
    }
    if (cases.empty()) throw Error("surveillance CSV has no data rows: " + path);

    ScalingConstants scales;
    scales.count_scale = *std::max_element(cases.begin(), cases.end());
    scales.hosp_scale = *std::max_element(hosp.begin(), hosp.end());
    if (scales.count_scale <= 0.0 || scales.hosp_scale <= 0.0) {
        throw Error("surveillance series are identically zero; cannot scale");
    }

    std::vector<double> days(cases.size());
    for (std::size_t i = 0; i < days.size(); ++i) days[i] = static_cast<double>(i);
    ObservationSet obs = scale_time_and_counts(days, cases, hosp, params, scales);
    obs.infections_are_daily = true;
    return obs;
}

std::size_t surveillance_csv_days(const std::string& path) {
    return read_csv(path).rows.size();
}

}  // namespace sirpinn
