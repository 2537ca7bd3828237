#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vendor_json.hpp"

namespace sirpinn {

/// Time-dependent scalar coefficient: transmission rate, reproduction number
/// or hospitalization fraction. Piecewise tables interpolate linearly between
/// knots and extend with constant values outside the knot range.
class RateFunction {
public:
    enum class Kind { constant, piecewise, two_wave };

    /// Two Gaussian bumps on a baseline; the default shape used by the
    /// synthetic time-dependent transmission scenarios.
    struct TwoWave {
        double base = 0.1;
        double amp1 = 0.6, center1 = 15.0, width1 = 18.0;
        double amp2 = 0.22, center2 = 70.0, width2 = 12.0;
    };

    RateFunction() : kind_(Kind::constant), value_(0.0) {}

    static RateFunction constant(double value);
    static RateFunction piecewise(std::vector<std::pair<double, double>> knots);
    static RateFunction two_wave(const TwoWave& shape);

    /// Load a two-column CSV `t_days,value` (header required, t strictly
    /// increasing) as a piecewise-linear table.
    static RateFunction from_csv(const std::string& path);

    double operator()(double t) const;

    Kind kind() const { return kind_; }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

    /// Replace values on [0, t_clamp] with the value at t_clamp.
    RateFunction clamped_before(double t_clamp) const;

    /// True when the function is finite and within [lo, hi] on a fine grid
    /// over [t0, tf].
    bool within(double lo, double hi, double t0, double tf) const;

    nlohmann::json to_json() const;
    static RateFunction from_json(const nlohmann::json& j);

private:
    Kind kind_;
    double value_ = 0.0;
    std::vector<std::pair<double, double>> knots_;
    TwoWave wave_;
};

}  // namespace sirpinn
