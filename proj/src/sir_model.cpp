#include "sirpinn/sir_model.hpp"

#include <cmath>
#include <cstddef>

#include "sirpinn/csv.hpp"
#include "sirpinn/errors.hpp"

namespace sirpinn {

void ModelParams::validate() const {
    if (!(population > 0.0)) throw ConfigError("population must be positive");
    if (!(removal_rate > 0.0)) throw ConfigError("removal rate must be positive");
    if (!(initial_infected > 0.0 && initial_infected < population)) {
        throw ConfigError("initial infected must lie in (0, N)");
    }
    if (!(t_end > t_start)) throw ConfigError("time window must have t_end > t_start");
}

const std::vector<double>& EpidemicTrajectory::series(const std::string& label) const {
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] == label) return states[k];
    }
    throw Error("no compartment labelled '" + label + "' in trajectory");
}

std::vector<double> EpidemicTrajectory::at_days(const std::string& label,
                                                std::size_t n_days) const {
    const auto& values = series(label);
    const double dt = times[1] - times[0];
    std::vector<double> out(n_days);
    for (std::size_t d = 0; d < n_days; ++d) {
        const auto i = static_cast<std::size_t>(std::llround(static_cast<double>(d) / dt));
        if (i >= values.size()) throw OutOfWindow("day index beyond trajectory grid");
        out[d] = values[i];
    }
    return out;
}

void EpidemicTrajectory::to_csv(const std::string& path) const {
    std::vector<std::string> header = {"t_days"};
    header.insert(header.end(), labels.begin(), labels.end());
    std::vector<std::vector<double>> cols;
    cols.push_back(times);
    for (const auto& s : states) cols.push_back(s);
    write_csv(path, header, cols);
}

std::array<double, 3> sir_rhs(const std::array<double, 3>& state, double beta,
                              const ModelParams& params) {
    const double s = state[0], i = state[1];
    const double infection = beta / params.population * i * s;
    const double removal = params.removal_rate * i;
    return {-infection, infection - removal, removal};
}

double reduced_rhs(double infected, double rt, const ModelParams& params) {
    return params.removal_rate * (rt - 1.0) * infected;
}

std::array<double, 3> hosp_rhs(const std::array<double, 3>& state, double rt, double sigma,
                               const ModelParams& params, bool cumulative_infections) {
    const double i = state[1];
    const double delta = params.removal_rate;
    const double third = delta * rt * i;
    return {delta * sigma * i, delta * (rt - 1.0) * i,
            cumulative_infections ? third : -third};
}

std::vector<double> uniform_grid(double t0, double tf, std::size_t n_steps) {
    std::vector<double> grid(n_steps + 1);
    const double h = (tf - t0) / static_cast<double>(n_steps);
    for (std::size_t i = 0; i <= n_steps; ++i) grid[i] = t0 + h * static_cast<double>(i);
    grid.back() = tf;
    return grid;
}

EpidemicTrajectory integrate_rk4(const OdeRhs& rhs, std::vector<double> initial_state,
                                 const std::vector<double>& grid,
                                 std::vector<std::string> labels, double magnitude_bound) {
    if (grid.size() < 2) throw ConfigError("integration grid needs at least two points");
    const std::size_t dim = initial_state.size();
    EpidemicTrajectory traj;
    traj.times = grid;
    traj.labels = std::move(labels);
    traj.states.assign(dim, std::vector<double>(grid.size()));

    std::vector<double> y = std::move(initial_state);
    std::vector<double> k1, k2, k3, k4, tmp(dim);
    const auto record = [&](std::size_t idx) {
        for (std::size_t d = 0; d < dim; ++d) {
            const double v = y[d];
            if (!std::isfinite(v)) throw NonFiniteState("non-finite state during integration");
            if (std::abs(v) > magnitude_bound) {
                throw StepTooLarge("state magnitude exceeds bound; integration diverging");
            }
            traj.states[d][idx] = v;
        }
    };
    record(0);
    for (std::size_t n = 0; n + 1 < grid.size(); ++n) {
        const double t = grid[n];
        const double h = grid[n + 1] - grid[n];
        k1 = rhs(t, y);
        for (std::size_t d = 0; d < dim; ++d) tmp[d] = y[d] + 0.5 * h * k1[d];
        k2 = rhs(t + 0.5 * h, tmp);
        for (std::size_t d = 0; d < dim; ++d) tmp[d] = y[d] + 0.5 * h * k2[d];
        k3 = rhs(t + 0.5 * h, tmp);
        for (std::size_t d = 0; d < dim; ++d) tmp[d] = y[d] + h * k3[d];
        k4 = rhs(t + h, tmp);
        for (std::size_t d = 0; d < dim; ++d) {
            y[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
        }
        record(n + 1);
    }
    return traj;
}

namespace {

std::size_t steps_for(const ModelParams& params, double step) {
    return static_cast<std::size_t>(std::llround(params.window() / step));
}

}  // namespace

EpidemicTrajectory simulate_sir(const RateFunction& beta, const ModelParams& params,
                                double step) {
    params.validate();
    const auto rhs = [&](double t, const std::vector<double>& y) {
        const auto d = sir_rhs({y[0], y[1], y[2]}, beta(t), params);
        return std::vector<double>{d[0], d[1], d[2]};
    };
    const auto grid = uniform_grid(params.t_start, params.t_end, steps_for(params, step));
    return integrate_rk4(rhs,
                         {params.population - params.initial_infected, params.initial_infected, 0.0},
                         grid, {"S", "I", "R"}, 10.0 * params.population);
}

EpidemicTrajectory simulate_reduced(const RateFunction& rt, const ModelParams& params,
                                    double step) {
    params.validate();
    const auto rhs = [&](double t, const std::vector<double>& y) {
        return std::vector<double>{reduced_rhs(y[0], rt(t), params)};
    };
    const auto grid = uniform_grid(params.t_start, params.t_end, steps_for(params, step));
    return integrate_rk4(rhs, {params.initial_infected}, grid, {"I"}, 10.0 * params.population);
}

EpidemicTrajectory simulate_hosp(const RateFunction& rt, const RateFunction& sigma,
                                 const ModelParams& params, bool cumulative_infections,
                                 double step) {
    params.validate();
    const auto rhs = [&](double t, const std::vector<double>& y) {
        const auto d = hosp_rhs({y[0], y[1], y[2]}, rt(t), sigma(t), params, cumulative_infections);
        return std::vector<double>{d[0], d[1], d[2]};
    };
    const auto grid = uniform_grid(params.t_start, params.t_end, steps_for(params, step));
    const double third0 = cumulative_infections ? 0.0 : params.population - params.initial_infected;
    return integrate_rk4(rhs, {0.0, params.initial_infected, third0}, grid,
                         {"Sigma_H", "I", cumulative_infections ? "Sigma_I" : "S"},
                         10.0 * params.population);
}

double effective_R(double beta, double delta, double susceptible, double population) {
    if (delta == 0.0) throw DivisionByZero("effective_R: removal rate is zero");
    return beta / delta * susceptible / population;
}

}  // namespace sirpinn
