#include "sirpinn/rate_function.hpp"

#include <algorithm>
#include <cmath>

#include "sirpinn/csv.hpp"
#include "sirpinn/errors.hpp"

namespace sirpinn {

RateFunction RateFunction::constant(double value) {
    RateFunction f;
    f.kind_ = Kind::constant;
    f.value_ = value;
    return f;
}

RateFunction RateFunction::piecewise(std::vector<std::pair<double, double>> knots) {
    if (knots.empty()) throw ConfigError("piecewise rate function needs at least one knot");
    for (std::size_t i = 1; i < knots.size(); ++i) {
        if (knots[i].first <= knots[i - 1].first) {
            throw ConfigError("piecewise knot times must be strictly increasing");
        }
    }
    RateFunction f;
    f.kind_ = Kind::piecewise;
    f.knots_ = std::move(knots);
    return f;
}

RateFunction RateFunction::two_wave(const TwoWave& shape) {
    RateFunction f;
    f.kind_ = Kind::two_wave;
    f.wave_ = shape;
    return f;
}

RateFunction RateFunction::from_csv(const std::string& path) {
    CsvTable table = read_csv(path);
    const int tc = table.column("t_days");
    const int vc = table.column("value");
    if (tc < 0 || vc < 0) throw MissingColumn("rate CSV needs columns t_days,value: " + path);
    std::vector<std::pair<double, double>> knots;
    knots.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        knots.emplace_back(table.number(r, tc), table.number(r, vc));
    }
    return piecewise(std::move(knots));
}

double RateFunction::operator()(double t) const {
    switch (kind_) {
        case Kind::constant:
            return value_;
        case Kind::two_wave: {
            const auto bump = [t](double a, double c, double w) {
                const double z = (t - c) / w;
                return a * std::exp(-z * z);
            };
            return wave_.base + bump(wave_.amp1, wave_.center1, wave_.width1) +
                   bump(wave_.amp2, wave_.center2, wave_.width2);
        }
        case Kind::piecewise: {
            if (t <= knots_.front().first) return knots_.front().second;
            if (t >= knots_.back().first) return knots_.back().second;
            auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                                       [](double v, const auto& k) { return v < k.first; });
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            const double w = (t - lo.first) / (hi.first - lo.first);
            return lo.second + w * (hi.second - lo.second);
        }
    }
    return value_;
}

RateFunction RateFunction::clamped_before(double t_clamp) const {
    if (kind_ != Kind::piecewise) {
        throw ConfigError("clamped_before applies to piecewise rate functions only");
    }
    const double hold = (*this)(t_clamp);
    std::vector<std::pair<double, double>> knots;
    knots.emplace_back(std::min(knots_.front().first, 0.0), hold);
    knots.emplace_back(t_clamp, hold);
    for (const auto& k : knots_) {
        if (k.first > t_clamp) knots.push_back(k);
    }
    return piecewise(std::move(knots));
}

bool RateFunction::within(double lo, double hi, double t0, double tf) const {
    const int n = 2000;
    for (int i = 0; i <= n; ++i) {
        const double t = t0 + (tf - t0) * static_cast<double>(i) / n;
        const double v = (*this)(t);
        if (!std::isfinite(v) || v < lo || v > hi) return false;
    }
    return true;
}

nlohmann::json RateFunction::to_json() const {
    switch (kind_) {
        case Kind::constant:
            return {{"kind", "constant"}, {"value", value_}};
        case Kind::two_wave:
            return {{"kind", "two_wave"},
                    {"base", wave_.base},
                    {"amp1", wave_.amp1},
                    {"center1", wave_.center1},
                    {"width1", wave_.width1},
                    {"amp2", wave_.amp2},
                    {"center2", wave_.center2},
                    {"width2", wave_.width2}};
        case Kind::piecewise: {
            nlohmann::json knots = nlohmann::json::array();
            for (const auto& k : knots_) knots.push_back({k.first, k.second});
            return {{"kind", "piecewise"}, {"knots", knots}};
        }
    }
    return {};
}

RateFunction RateFunction::from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return constant(j.at("value").get<double>());
    if (kind == "two_wave") {
        TwoWave w;
        w.base = j.at("base").get<double>();
        w.amp1 = j.at("amp1").get<double>();
        w.center1 = j.at("center1").get<double>();
        w.width1 = j.at("width1").get<double>();
        w.amp2 = j.at("amp2").get<double>();
        w.center2 = j.at("center2").get<double>();
        w.width2 = j.at("width2").get<double>();
        return two_wave(w);
    }
    if (kind == "piecewise") {
        std::vector<std::pair<double, double>> knots;
        for (const auto& k : j.at("knots")) {
            knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
        }
        return piecewise(std::move(knots));
    }
    throw ConfigError("unknown rate function kind: " + kind);
}

}  // namespace sirpinn
