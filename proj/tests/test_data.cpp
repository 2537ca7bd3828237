#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "sirpinn/data.hpp"
#include "sirpinn/errors.hpp"

using namespace sirpinn;

namespace {

ModelParams window90() {
    ModelParams p;
    p.t_end = 90.0;
    return p;
}

std::string write_temp(const std::string& name, const std::string& content) {
    const std::string path = std::string("/tmp/") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("time and count scaling endpoints") {
    const auto p = window90();
    ScalingConstants sc;
    const auto obs = scale_time_and_counts({0.0, 45.0, 90.0}, {250000.0, 500.0, 0.0},
                                           {500.0, 100.0, 0.0}, p, sc);
    CHECK(obs.times_scaled.front() == 0.0);
    CHECK(obs.times_scaled.back() == 1.0);
    CHECK(obs.times_scaled[1] == doctest::Approx(0.5));
    CHECK(obs.infections_scaled[0] == doctest::Approx(2.5));
    CHECK(obs.hosp_scaled[0] == doctest::Approx(0.5));
    CHECK_THROWS_AS(scale_time_and_counts({91.0}, {1.0}, {}, p, sc), OutOfWindow);
}

TEST_CASE("scaling round trip recovers raw counts") {
    const auto p = window90();
    ScalingConstants sc;
    const std::vector<double> raw = {1.0, 17.0, 123456.0, 9.9e6};
    const auto obs = scale_time_and_counts({0.0, 1.0, 2.0, 3.0}, raw, {}, p, sc);
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const double back = obs.infections_scaled[k] * sc.count_scale;
        CHECK(std::abs(back - raw[k]) <= 1e-12 * raw[k]);
    }
}

TEST_CASE("poisson observations: determinism and degenerate mean") {
    const std::vector<double> means = {0.0, 3.0, 120.0, 4.5e4};
    const auto a = gen_poisson_obs(means, 99);
    const auto b = gen_poisson_obs(means, 99);
    CHECK(a == b);
    CHECK(a[0] == 0.0);
    const auto c = gen_poisson_obs(means, 100);
    CHECK(a != c);
    CHECK_THROWS_AS(gen_poisson_obs({-1.0}, 5), NegativeMean);
}

TEST_CASE("poisson observations match the distribution moments") {
    const std::size_t n = 100000;
    for (double mean : {100.0, 2000.0}) {
        const std::vector<double> means(n, mean);
        const auto draws = gen_poisson_obs(means, 4242);
        double sum = 0.0, sumsq = 0.0;
        for (double d : draws) {
            sum += d;
            sumsq += d * d;
        }
        const double m = sum / static_cast<double>(n);
        const double var = sumsq / static_cast<double>(n) - m * m;
        // 5 standard errors
        CHECK(std::abs(m - mean) <= 5.0 * std::sqrt(mean / static_cast<double>(n)));
        CHECK(std::abs(var - mean) <= 5.0 * mean * std::sqrt(2.0 / static_cast<double>(n)));
    }
    // spec'd coarse bands at mean 100
    const auto draws = gen_poisson_obs(std::vector<double>(100000, 100.0), 7);
    double sum = 0.0, sumsq = 0.0;
    for (double d : draws) {
        sum += d;
        sumsq += d * d;
    }
    const double m = sum / 1e5;
    CHECK(std::abs(m - 100.0) <= 1.0);
    CHECK(std::abs((sumsq / 1e5 - m * m) - 100.0) <= 5.0);
}

TEST_CASE("poisson large-mean normal approximation keeps moments") {
    const std::size_t n = 100000;
    const double mean = 2e7;  // rounded-normal regime
    const auto draws = gen_poisson_obs(std::vector<double>(n, mean), 11);
    double sum = 0.0, sumsq = 0.0;
    for (double d : draws) {
        sum += d;
        sumsq += d * d;
    }
    const double m = sum / static_cast<double>(n);
    const double var = sumsq / static_cast<double>(n) - m * m;
    CHECK(std::abs(m - mean) <= 5.0 * std::sqrt(mean / static_cast<double>(n)));
    CHECK(std::abs(var - mean) <= 5.0 * mean * std::sqrt(2.0 / static_cast<double>(n)));
}

TEST_CASE("gaussian observations: moments, rounding, clamping") {
    CHECK(gen_gaussian_obs(std::vector<double>(100, 0.0), 0.4, 3) ==
          std::vector<double>(100, 0.0));

    const std::size_t n = 100000;
    const auto draws = gen_gaussian_obs(std::vector<double>(n, 1000.0), 0.4, 321);
    double sum = 0.0, sumsq = 0.0;
    for (double d : draws) {
        CHECK(d == std::round(d));
        sum += d;
        sumsq += d * d;
    }
    const double m = sum / static_cast<double>(n);
    const double sd = std::sqrt(sumsq / static_cast<double>(n) - m * m);
    CHECK(std::abs(sd - 400.0) <= 10.0);

    const auto small = gen_gaussian_obs(std::vector<double>(5000, 1.0), 0.4, 77);
    for (double d : small) CHECK(d >= 0.0);
}

TEST_CASE("weekly subsampling of a 90-day series") {
    const auto p = window90();
    ScalingConstants sc;
    std::vector<double> days(90), infections(90);
    for (int d = 0; d < 90; ++d) {
        days[static_cast<std::size_t>(d)] = d;
        infections[static_cast<std::size_t>(d)] = 100.0 + d;
    }
    const auto daily = scale_time_and_counts(days, infections, {}, p, sc);
    const auto weekly = subsample_weekly(daily);
    REQUIRE(weekly.size() == 13);
    CHECK(weekly.cadence == ObservationSet::Cadence::weekly);
    for (std::size_t k = 0; k < 13; ++k) {
        CHECK(weekly.times_scaled[k] == doctest::Approx(7.0 * static_cast<double>(k) / 90.0));
        CHECK(weekly.infections_scaled[k] ==
              doctest::Approx((100.0 + 7.0 * static_cast<double>(k)) / sc.count_scale));
    }
    CHECK_THROWS_AS(subsample_weekly(weekly), WrongCadence);
}

TEST_CASE("surveillance CSV ingestion") {
    std::string csv = "date,new_cases,new_hospitalizations\n";
    // Feb 21 2020 through May 20 2020 inclusive: 90 contiguous days
    int y = 2020, mo = 2, d = 21;
    const auto days_in = [](int yy, int mm) {
        static const int t[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        if (mm == 2 && (yy % 4 == 0 && (yy % 100 != 0 || yy % 400 == 0))) return 29;
        return t[mm - 1];
    };
    int rows = 0;
    char buf[64];
    while (!(y == 2020 && mo == 5 && d == 21)) {
        const int cases = 100 + rows;
        const int hosp = 10 + rows % 7;
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d,%d,%d\n", y, mo, d, cases, hosp);
        csv += buf;
        ++rows;
        if (++d > days_in(y, mo)) {
            d = 1;
            if (++mo > 12) {
                mo = 1;
                ++y;
            }
        }
    }
    REQUIRE(rows == 90);
    const auto path = write_temp("sirpinn_surv.csv", csv);
    CHECK(surveillance_csv_days(path) == 90);

    auto p = window90();
    const auto obs = load_surveillance_csv(path, 6.0, p);
    REQUIRE(obs.size() == 90);
    CHECK(obs.infections_are_daily);
    // alpha correction: first row 100 -> 600
    const double max_corrected = (100.0 + 89.0) * 6.0;
    CHECK(obs.scales.count_scale == doctest::Approx(max_corrected));
    CHECK(obs.infections_scaled[0] == doctest::Approx(600.0 / max_corrected));
    // the max row scales to exactly one
    CHECK(obs.infections_scaled[89] == doctest::Approx(1.0));
    CHECK(obs.hosp_scaled[0] == doctest::Approx(10.0 / 16.0));

    const auto bad_col = write_temp("sirpinn_badcol.csv", "date,cases\n2020-01-01,5\n");
    CHECK_THROWS_AS(load_surveillance_csv(bad_col, 6.0, p), MissingColumn);
    const auto gap = write_temp("sirpinn_gap.csv",
                                "date,new_cases,new_hospitalizations\n"
                                "2020-01-01,5,1\n2020-01-03,6,1\n");
    CHECK_THROWS_AS(load_surveillance_csv(gap, 6.0, p), NonContiguousDates);
    const auto neg = write_temp("sirpinn_neg.csv",
                                "date,new_cases,new_hospitalizations\n2020-01-01,-5,1\n");
    CHECK_THROWS_AS(load_surveillance_csv(neg, 6.0, p), NegativeCount);
}
