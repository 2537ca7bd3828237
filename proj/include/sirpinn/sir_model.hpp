#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "sirpinn/rate_function.hpp"

namespace sirpinn {

/// Fixed epidemiological constants of a scenario.
struct ModelParams {
    double population = 56e6;   // N
    double removal_rate = 0.2;  // delta [1/day]
    double initial_infected = 1.0;
    double t_start = 0.0;
    double t_end = 90.0;

    double window() const { return t_end - t_start; }
    void validate() const;
};

/// Time-indexed compartment values on a uniform grid.
struct EpidemicTrajectory {
    std::vector<double> times;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> states;  // states[k] = values of labels[k]

    std::size_t size() const { return times.size(); }
    const std::vector<double>& series(const std::string& label) const;

    /// Values of one compartment sampled at integer-day offsets from t_start.
    std::vector<double> at_days(const std::string& label, std::size_t n_days) const;

    void to_csv(const std::string& path) const;
};

// Right-hand sides. All are pure functions of their inputs.

/// Classic SIR: state (S, I, R), returns (dS, dI, dR). Components sum to 0.
std::array<double, 3> sir_rhs(const std::array<double, 3>& state, double beta,
                              const ModelParams& params);

/// Reproduction-number form: dI/dt for a single infected compartment.
double reduced_rhs(double infected, double rt, const ModelParams& params);

/// Hospitalization form: state (Sigma_H, I, S), returns derivatives.
/// With cumulative_infections the third component tracks Sigma_I instead
/// of S and flips sign.
std::array<double, 3> hosp_rhs(const std::array<double, 3>& state, double rt,
                               double sigma, const ModelParams& params,
                               bool cumulative_infections = false);

/// Classic fixed-step RK4 over a strictly increasing uniform grid.
/// rhs(t, y) -> dy/dt. Throws StepTooLarge when any state grows past
/// 10x the population bound, NonFiniteState on NaN/Inf.
using OdeRhs = std::function<std::vector<double>(double, const std::vector<double>&)>;
EpidemicTrajectory integrate_rk4(const OdeRhs& rhs, std::vector<double> initial_state,
                                 const std::vector<double>& grid,
                                 std::vector<std::string> labels, double magnitude_bound);

/// Uniform grid helper: n_steps+1 points covering [t0, tf].
std::vector<double> uniform_grid(double t0, double tf, std::size_t n_steps);

// Reference-trajectory generators used both for synthetic data and as test
// oracles. Integration step is 0.1 day.

EpidemicTrajectory simulate_sir(const RateFunction& beta, const ModelParams& params,
                                double step = 0.1);
EpidemicTrajectory simulate_reduced(const RateFunction& rt, const ModelParams& params,
                                    double step = 0.1);
EpidemicTrajectory simulate_hosp(const RateFunction& rt, const RateFunction& sigma,
                                 const ModelParams& params, bool cumulative_infections = false,
                                 double step = 0.1);

/// Effective reproduction number beta/delta * S/N.
double effective_R(double beta, double delta, double susceptible, double population);

}  // namespace sirpinn
