#include "stefanlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace stefanlab {

const char* to_string(RunStatus status) {
    switch (status) {
        case RunStatus::ReachedHorizon: return "ReachedHorizon";
        case RunStatus::BlowUpDetected: return "BlowUpDetected";
        case RunStatus::DecayCertified: return "DecayCertified";
        case RunStatus::NumericalFailure: return "NumericalFailure";
    }
    return "Unknown";
}

double energy(std::span<const double> v, double s, double p) {
    const std::size_t n = v.size() - 1;
    const double h = 1.0 / static_cast<double>(n);
    // du/dx = (1/s) dv/dy: centered interior, 3-point one-sided at the boundaries.
    auto dvdy = [&](std::size_t j) {
        if (j == 0) return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
        if (j == n) return (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
        return (v[j + 1] - v[j - 1]) / (2.0 * h);
    };
    double acc = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
        const double g = dvdy(j) / s;
        acc += ((j == 0 || j == n) ? 0.5 : 1.0) * g * g;
    }
    const double grad_sq = acc * h * s;
    return 0.5 * grad_sq - std::pow(v[0], p + 1.0) / (p + 1.0);
}

double mass_balance_residual(const Trajectory& traj, std::size_t k) {
    const DiagnosticsRecord& r = traj.records.at(k);
    return std::abs(r.l1 - traj.phi_l1 - traj.spec.s0 + r.s - r.flux_integral);
}

std::optional<double> energy_identity_residual(const Trajectory& traj, std::size_t k1,
                                               std::size_t k2) {
    if (k1 > k2 || k2 >= traj.checkpoints.size()) return std::nullopt;
    const Checkpoint& a = traj.checkpoints[k1];
    const Checkpoint& b = traj.checkpoints[k2];
    const double e1 = energy(a.v, a.s, traj.spec.p);
    const double e2 = energy(b.v, b.s, traj.spec.p);
    const double lhs = (b.dissipation - a.dissipation) + 0.5 * (b.sdot3_integral - a.sdot3_integral);
    return std::abs(lhs - (e1 - e2));
}

double energy_lower_bound(double l1, double s) {
    if (l1 <= 0.0) return 0.0;
    const double denom = s + l1;
    return (std::numbers::pi * std::numbers::pi / 256.0) * l1 * l1 * l1 / (denom * denom * denom * denom);
}

double energy_lower_bound(const DiagnosticsRecord& record) {
    return energy_lower_bound(record.l1, record.s);
}

BlowupCriterion blowup_criterion(double s0, const InitialProfile& profile, double p) {
    BlowupCriterion out;
    // E(s0, phi) from the exact pw-linear representation.
    double grad_sq = 0.0;
    for (std::size_t i = 1; i < profile.x.size(); ++i) {
        const double slope = (profile.phi[i] - profile.phi[i - 1]) / (profile.x[i] - profile.x[i - 1]);
        grad_sq += slope * slope * (profile.x[i] - profile.x[i - 1]);
    }
    out.energy = 0.5 * grad_sq - std::pow(profile.phi.front(), p + 1.0) / (p + 1.0);
    out.threshold = energy_lower_bound(profile.l1_norm(), s0);
    out.margin = out.threshold - out.energy;
    out.predicts_blowup = out.energy < out.threshold;
    return out;
}

bool decay_certificate(double linf, double s, double p) {
    const double delta = 1.25 * std::min(1.0 / 24.0, std::pow(2.0, -(p + 2.0) / (p - 1.0)));
    return linf <= delta * std::min(1.0, std::pow(s, -1.0 / (p - 1.0)));
}

bool decay_certificate(const DiagnosticsRecord& record, double p) {
    return decay_certificate(record.linf, record.s, p);
}

std::optional<RescaledProfile> rescaled_profile(const Trajectory& traj, double t_hat, double M,
                                                double p) {
    const Checkpoint* cp = nullptr;
    for (const Checkpoint& c : traj.checkpoints)
        if (std::abs(c.t - t_hat) <= 1e-9 * std::max(1.0, t_hat)) cp = &c;
    if (!cp) return std::nullopt;
    RescaledProfile out;
    out.lambda = std::pow(M, -(p - 1.0));
    const std::size_t n = cp->v.size() - 1;
    const double pref = std::pow(out.lambda, 1.0 / (p - 1.0));
    const std::size_t count = 201;
    const double y_max = cp->s / out.lambda;
    for (std::size_t i = 0; i < count; ++i) {
        const double y = y_max * static_cast<double>(i) / static_cast<double>(count - 1);
        const double x = out.lambda * y;
        // linear interpolation on the immobilized grid
        const double yj = x / cp->s * static_cast<double>(n);
        const std::size_t j = std::min(static_cast<std::size_t>(yj), n - 1);
        const double w = yj - static_cast<double>(j);
        const double u = (1.0 - w) * cp->v[j] + w * cp->v[j + 1];
        out.y.push_back(y);
        out.value.push_back(pref * u);
    }
    return out;
}

}  // namespace stefanlab
