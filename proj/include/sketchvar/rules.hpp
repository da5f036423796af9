#pragma once

#include <cmath>
#include <string>

#include "sketchvar/common.hpp"

namespace sketchvar {

/// Sketch-dimension schedules m(n). The named presets cover the rates used
/// by the experiment sweeps: fixed m, ceil(c log n), ceil(c sqrt(log n)) and
/// ceil(c n^expo).
struct GrowthRule {
    enum class Kind { constant, ceil_c_log, ceil_c_sqrt_log, ceil_c_pow };
    Kind kind = Kind::constant;
    double c = 1.0;
    double expo = 0.2;

    Eigen::Index eval(Eigen::Index n) const {
        require(n >= 1, errc::invalid_argument, "rule argument n must be >= 1");
        const double nd = static_cast<double>(n);
        double v = 0.0;
        switch (kind) {
            case Kind::constant: v = c; break;
            case Kind::ceil_c_log: v = std::ceil(c * std::log(nd)); break;
            case Kind::ceil_c_sqrt_log: v = std::ceil(c * std::sqrt(std::log(nd))); break;
            case Kind::ceil_c_pow: v = std::ceil(c * std::pow(nd, expo)); break;
        }
        return std::max<Eigen::Index>(1, static_cast<Eigen::Index>(v));
    }

    static GrowthRule constant(double m) { return {Kind::constant, m, 0.0}; }
    static GrowthRule ceil_c_log(double c) { return {Kind::ceil_c_log, c, 0.0}; }
    static GrowthRule ceil_c_sqrt_log(double c) { return {Kind::ceil_c_sqrt_log, c, 0.0}; }
    static GrowthRule ceil_c_pow(double c, double expo) { return {Kind::ceil_c_pow, c, expo}; }
};

/// Regularization schedules lambda(n).
struct LambdaRule {
    enum class Kind { constant, pow_n, sqrt_log_over_n, log_pow_over_n };
    Kind kind = Kind::constant;
    double value = 0.1;  // constant
    double expo = -0.8;  // pow_n: n^expo
    double p = 2.0;      // log_pow_over_n: (log n)^{1/p} / n

    double eval(Eigen::Index n) const {
        require(n >= 1, errc::invalid_argument, "rule argument n must be >= 1");
        const double nd = static_cast<double>(n);
        double v = 0.0;
        switch (kind) {
            case Kind::constant: v = value; break;
            case Kind::pow_n: v = std::pow(nd, expo); break;
            case Kind::sqrt_log_over_n: v = std::sqrt(std::log(nd)) / nd; break;
            case Kind::log_pow_over_n: v = std::pow(std::log(nd), 1.0 / p) / nd; break;
        }
        require(v > 0.0 && std::isfinite(v), errc::invalid_argument,
                "lambda rule must produce a positive value (n too small?)");
        return v;
    }

    static LambdaRule constant(double v) { return {Kind::constant, v, 0.0, 0.0}; }
    static LambdaRule pow_n(double expo) { return {Kind::pow_n, 0.0, expo, 0.0}; }
    static LambdaRule sqrt_log_over_n() { return {Kind::sqrt_log_over_n, 0.0, 0.0, 0.0}; }
    static LambdaRule log_pow_over_n(double p) { return {Kind::log_pow_over_n, 0.0, 0.0, p}; }
};

}  // namespace sketchvar
