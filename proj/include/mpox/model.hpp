#pragma once

// Drift and diffusion of the two-host (human/rodent) monkeypox SDE.
//
// State ordering is fixed throughout the library:
//   0 S_h, 1 I_h, 2 Q_h, 3 R_h, 4 S_r, 5 I_r
// Noise sources are numbered 1..8 in the model and stored 0..7.

#include <mpox/errors.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <utility>

namespace mpox {

inline constexpr int kStateDim = 6;
inline constexpr int kNoiseDim = 8;
inline constexpr double kDefaultGuardEps = 1e-12;

enum Compartment : int { S_h = 0, I_h = 1, Q_h = 2, R_h = 3, S_r = 4, I_r = 5 };

inline constexpr std::array<std::string_view, kStateDim> kCompartmentNames = {
    "S_h", "I_h", "Q_h", "R_h", "S_r", "I_r"};

template <typename Scalar>
using StateT = Eigen::Matrix<Scalar, kStateDim, 1>;
template <typename Scalar>
using DriftT = Eigen::Matrix<Scalar, kStateDim, 1>;
template <typename Scalar>
using DiffusionT = Eigen::Matrix<Scalar, kStateDim, kNoiseDim>;
template <typename Scalar>
using NoiseVectorT = Eigen::Matrix<Scalar, kNoiseDim, 1>;

using State = StateT<double>;
using Drift = DriftT<double>;
using Diffusion = DiffusionT<double>;
using NoiseVector = NoiseVectorT<double>;

// Returns the index for a compartment name, or -1.
inline int compartment_index(std::string_view name) {
    for (int i = 0; i < kStateDim; ++i)
        if (kCompartmentNames[i] == name) return i;
    return -1;
}

/// Epidemiological rate constants. `theta_q` is the quarantine/treatment
/// effectiveness (distinct from the recruitment rates theta_h, theta_r).
template <typename Scalar>
struct ParamsT {
    Scalar theta_h{};
    Scalar p{};
    Scalar eta1{};
    Scalar eta2{};
    Scalar eta3{};
    Scalar mu_h{};
    Scalar delta_h{};
    Scalar zeta{};
    Scalar gamma_h{};
    Scalar theta_q{};
    Scalar theta_r{};
    Scalar mu_r{};
    Scalar delta_r{};

    bool operator==(const ParamsT&) const = default;
};

using Params = ParamsT<double>;

template <typename Scalar>
using ParamField = std::pair<std::string_view, Scalar ParamsT<Scalar>::*>;

/// Field table in canonical order, shared by schedules and config I/O.
template <typename Scalar = double>
constexpr std::array<ParamField<Scalar>, 13> param_fields() {
    using P = ParamsT<Scalar>;
    return {{{"theta_h", &P::theta_h},
             {"p", &P::p},
             {"eta1", &P::eta1},
             {"eta2", &P::eta2},
             {"eta3", &P::eta3},
             {"mu_h", &P::mu_h},
             {"delta_h", &P::delta_h},
             {"zeta", &P::zeta},
             {"gamma_h", &P::gamma_h},
             {"theta_q", &P::theta_q},
             {"theta_r", &P::theta_r},
             {"mu_r", &P::mu_r},
             {"delta_r", &P::delta_r}}};
}

/// Diffusion intensities sigma_1..sigma_8 (stored at indices 0..7).
template <typename Scalar>
struct NoiseIntensitiesT {
    NoiseVectorT<Scalar> sigma = NoiseVectorT<Scalar>::Zero();

    Scalar operator[](int source) const { return sigma(source); }
    bool operator==(const NoiseIntensitiesT& other) const { return sigma == other.sigma; }
};

using NoiseIntensities = NoiseIntensitiesT<double>;

template <typename Scalar>
void validate(const ParamsT<Scalar>& params) {
    for (const auto& [name, field] : param_fields<Scalar>()) {
        const Scalar v = params.*field;
        if (!(v >= Scalar(0)) || !std::isfinite(static_cast<double>(v)))
            throw ValidationError(std::string(name) + " must be a finite rate >= 0");
    }
    if (params.p > Scalar(1)) throw ValidationError("p must lie in [0,1]");
    if (params.theta_q > Scalar(1)) throw ValidationError("theta_q must lie in [0,1]");
}

template <typename Scalar>
void validate(const NoiseIntensitiesT<Scalar>& noise) {
    for (int i = 0; i < kNoiseDim; ++i) {
        const Scalar v = noise.sigma(i);
        if (!(v >= Scalar(0)) || !std::isfinite(static_cast<double>(v)))
            throw ValidationError("sigma" + std::to_string(i + 1) + " must be finite and >= 0");
    }
}

template <typename Scalar>
void validate(const StateT<Scalar>& state) {
    for (int i = 0; i < kStateDim; ++i) {
        if (!(state(i) >= Scalar(0)) || !std::isfinite(static_cast<double>(state(i))))
            throw ValidationError(std::string(kCompartmentNames[i]) + " must be finite and >= 0");
    }
}

template <typename Derived>
typename Derived::Scalar human_total(const Eigen::MatrixBase<Derived>& x) {
    return x(S_h) + x(I_h) + x(Q_h) + x(R_h);
}

template <typename Derived>
typename Derived::Scalar rodent_total(const Eigen::MatrixBase<Derived>& x) {
    return x(S_r) + x(I_r);
}

namespace detail {

template <typename Scalar>
void check_denominators(const StateT<Scalar>& x, Scalar guard_eps) {
    if (human_total(x) < guard_eps)
        throw DomainError("human population N_h fell below the guard threshold");
    if (rodent_total(x) < guard_eps && x(I_r) > Scalar(0))
        throw DomainError("rodent population N_r fell below the guard threshold with I_r > 0");
}

// eta3 * S_r * I_r / N_r, taken as zero when the rodent population is empty.
template <typename Scalar>
Scalar rodent_incidence(const StateT<Scalar>& x, Scalar eta3, Scalar guard_eps) {
    const Scalar n_r = rodent_total(x);
    if (n_r < guard_eps) return Scalar(0);
    return eta3 * x(S_r) * x(I_r) / n_r;
}

} // namespace detail

/// Deterministic rates of the six compartments.
/// Throws DomainError if N_h < guard_eps, or N_r < guard_eps while I_r > 0.
template <typename Scalar>
DriftT<Scalar> drift(const StateT<Scalar>& x, const ParamsT<Scalar>& k,
                     Scalar guard_eps = Scalar(kDefaultGuardEps)) {
    detail::check_denominators(x, guard_eps);
    const Scalar n_h = human_total(x);
    const Scalar force = (Scalar(1) - k.p) * (k.eta1 * x(I_r) + k.eta2 * x(I_h)) / n_h;
    const Scalar human_incidence = force * x(S_h);
    const Scalar rodent_incidence = detail::rodent_incidence(x, k.eta3, guard_eps);

    DriftT<Scalar> f;
    f(S_h) = k.theta_h - human_incidence - k.mu_h * x(S_h);
    f(I_h) = human_incidence - (k.mu_h + k.delta_h + k.zeta) * x(I_h);
    f(Q_h) = k.zeta * x(I_h) - (k.mu_h + k.gamma_h + (Scalar(1) - k.theta_q) * k.delta_h) * x(Q_h);
    f(R_h) = k.gamma_h * x(Q_h) - k.mu_h * x(R_h);
    f(S_r) = k.theta_r - rodent_incidence - k.mu_r * x(S_r);
    f(I_r) = rodent_incidence - (k.mu_r + k.delta_r) * x(I_r);
    return f;
}

/// 6x8 noise coefficient matrix; column j multiplies dB_{j+1}.
/// The human-to-human term (column 1) is stored once and negated, so the
/// S_h and I_h entries are exact negatives of each other. The rodent-to-human
/// term (column 0) enters S_h only.
template <typename Scalar>
DiffusionT<Scalar> diffusion(const StateT<Scalar>& x, const ParamsT<Scalar>& k,
                             const NoiseIntensitiesT<Scalar>& noise,
                             Scalar guard_eps = Scalar(kDefaultGuardEps)) {
    detail::check_denominators(x, guard_eps);
    const Scalar n_h = human_total(x);
    const Scalar damp = Scalar(1) - k.p;

    DiffusionT<Scalar> g = DiffusionT<Scalar>::Zero();
    g(S_h, 0) = -damp * noise[0] * x(I_r) * x(S_h) / n_h;
    const Scalar human_term = damp * noise[1] * x(I_h) * x(S_h) / n_h;
    g(S_h, 1) = -human_term;
    g(I_h, 1) = human_term;
    g(S_h, 2) = noise[2] * x(S_h);
    g(I_h, 3) = noise[3] * x(I_h);
    g(Q_h, 4) = noise[4] * x(Q_h);
    g(R_h, 5) = noise[5] * x(R_h);
    g(S_r, 6) = noise[6] * x(S_r);
    g(I_r, 7) = noise[7] * x(I_r);
    return g;
}

struct HostRatioReport {
    double max_ratio = 0.0;
    bool satisfied = false;
};

/// Checks N_r <= kbar * N_h along a sampled trajectory.
inline HostRatioReport check_hr(std::span<const State> states, double kbar) {
    if (states.empty()) throw InsufficientData("check_hr needs a nonempty path");
    HostRatioReport report;
    for (const auto& x : states) {
        const double n_h = human_total(x);
        if (n_h <= 0.0) throw DomainError("check_hr: N_h = 0 along the path");
        report.max_ratio = std::max(report.max_ratio, rodent_total(x) / n_h);
    }
    report.satisfied = report.max_ratio <= kbar;
    return report;
}

} // namespace mpox
