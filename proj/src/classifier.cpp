#include "stefanlab/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace stefanlab {

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::ExponentialDecay: return "ExponentialDecay";
        case Verdict::SlowDecay: return "SlowDecay";
        case Verdict::BlowUp: return "BlowUp";
        case Verdict::Undetermined: return "Undetermined";
    }
    return "Unknown";
}

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
    double slope_stderr = 0.0;
    bool ok = false;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit f;
    const std::size_t n = x.size();
    if (n < 2) return f;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.rms = std::sqrt(ss / n);
    if (n > 2) f.slope_stderr = std::sqrt(ss / (n - 2) / (denom / n));
    f.ok = true;
    return f;
}

}  // namespace

BlowupFit estimate_blowup(const Trajectory& traj, double p) {
    BlowupFit fit;
    std::vector<const DiagnosticsRecord*> tail;
    for (const auto& r : traj.records)
        if (r.u0 >= 10.0) tail.push_back(&r);
    if (tail.size() < 20) {
        fit.note = "fewer than 20 records with u0 >= 10";
        return fit;
    }
    for (std::size_t i = 1; i < tail.size(); ++i)
        if (tail[i]->u0 < tail[i - 1]->u0) {
            fit.note = "non-monotone tail";
            return fit;
        }
    const double t_first = tail.front()->t;
    const double t_last = tail.back()->t;
    const double span = std::max(t_last - t_first, 1e-300);

    auto sse = [&](double T) {
        std::vector<double> xs, ys;
        xs.reserve(tail.size());
        ys.reserve(tail.size());
        for (const auto* r : tail) {
            xs.push_back(-std::log(T - r->t));
            ys.push_back(std::log(r->u0));
        }
        const LineFit f = fit_line(xs, ys);
        return std::make_pair(f.rms * f.rms * xs.size(), f);
    };

    // Outer golden-section on the blow-up time, inner linear least squares.
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = t_last * (1.0 + 4.0 * std::numeric_limits<double>::epsilon()) + 1e-300;
    double b = t_last + 0.1 * span;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = sse(c).first, fd = sse(d).first;
    for (int it = 0; it < 300 && (b - a) > 1e-15 * std::max(t_last, 1.0); ++it) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = sse(c).first;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = sse(d).first;
        }
    }
    const double T_hat = 0.5 * (a + b);
    const auto [s, lf] = sse(T_hat);
    fit.ok = lf.ok;
    fit.t_blowup = T_hat;
    fit.exponent = lf.slope;
    fit.exponent_ratio = lf.slope / (1.0 / (2.0 * (p - 1.0)));
    fit.fit_residual = lf.rms;
    return fit;
}

GrowthFit fit_growth_exponent(const Trajectory& traj) {
    GrowthFit fit;
    if (traj.records.empty()) {
        fit.note = "empty trajectory";
        return fit;
    }
    const double s0 = traj.spec.s0;
    const DiagnosticsRecord& last = traj.records.back();
    if (last.s < 3.0 * s0) {
        fit.note = "insufficient front growth";
        return fit;
    }
    const double t_end = last.t;
    std::vector<double> xs, ys;
    const DiagnosticsRecord* first_in_decade = nullptr;
    for (const auto& r : traj.records) {
        if (r.t >= 0.1 * t_end && r.t > 0.0) {
            if (!first_in_decade) first_in_decade = &r;
            xs.push_back(std::log(r.t));
            ys.push_back(std::log(r.s));
        }
    }
    const LineFit f = fit_line(xs, ys);
    if (!f.ok) {
        fit.note = "degenerate fit window";
        return fit;
    }
    fit.ok = true;
    fit.beta = f.slope;
    fit.beta_stderr = f.slope_stderr;
    fit.flux_ratio_end = last.flux_integral > 0.0 ? last.s / last.flux_integral : 0.0;
    fit.flux_ratio_begin = (first_in_decade && first_in_decade->flux_integral > 0.0)
                               ? first_in_decade->s / first_in_decade->flux_integral
                               : 0.0;
    return fit;
}

ClassificationReport classify(const Trajectory& traj, const ClassifierRules& rules) {
    ClassificationReport rep;
    rep.certificate_time = traj.certificate_time;
    const auto& recs = traj.records;
    if (traj.status == RunStatus::NumericalFailure) {
        rep.flags.push_back("numerical failure");
        return rep;
    }
    if (traj.status == RunStatus::BlowUpDetected) {
        rep.verdict = Verdict::BlowUp;
        BlowupFit fit = estimate_blowup(traj, traj.spec.p);
        if (!fit.ok) rep.flags.push_back("blow-up fit failed: " + fit.note);
        rep.blowup = fit;
        return rep;
    }
    if (traj.certificate_time || traj.status == RunStatus::DecayCertified) {
        rep.verdict = Verdict::ExponentialDecay;
        rep.front_limit = recs.empty() ? traj.spec.s0 : recs.back().s;
        return rep;
    }
    if (recs.size() < rules.min_records) {
        rep.flags.push_back("too-short trajectory");
        return rep;
    }

    const std::size_t half = recs.size() / 2;
    std::vector<double> ts, logs;
    bool positive = true;
    for (std::size_t i = half; i < recs.size(); ++i) {
        if (recs[i].u0 <= 0.0) {
            positive = false;
            break;
        }
        ts.push_back(recs[i].t);
        logs.push_back(std::log(recs[i].u0));
    }
    LineFit decay_fit;
    if (positive) decay_fit = fit_line(ts, logs);

    const double s_half = recs[half].s;
    const double s_end = recs.back().s;
    const double front_increase = (s_end - s_half) / s_half;
    const double rate_min = rules.rate_min / (traj.spec.s0 * traj.spec.s0);

    const bool certified = traj.certificate_time.has_value() ||
                           traj.status == RunStatus::DecayCertified;
    const bool fast_fit = decay_fit.ok && decay_fit.slope <= -rate_min &&
                          front_increase <= rules.front_plateau_tol;
    if (certified || fast_fit) {
        rep.verdict = Verdict::ExponentialDecay;
        if (decay_fit.ok && decay_fit.slope < 0.0) rep.decay_rate = -decay_fit.slope;
        rep.front_limit = s_end;
        return rep;
    }
    const bool u0_decreasing = recs.back().u0 < recs[half].u0;
    if (u0_decreasing && front_increase >= rules.front_growth_min) {
        rep.verdict = Verdict::SlowDecay;
        GrowthFit fit = fit_growth_exponent(traj);
        if (!fit.ok) rep.flags.push_back("growth fit: " + fit.note);
        rep.growth = fit;
        return rep;
    }
    rep.flags.push_back("no rule matched at this horizon");
    return rep;
}

BisectResult bisect_predicate(const std::function<bool(double)>& blows_up, double lambda_lo,
                              double lambda_hi, double tol) {
    if (!(lambda_lo < lambda_hi)) throw bad_bracket_error("bisect: lambda_lo must be < lambda_hi");
    BisectResult out;
    if (blows_up(lambda_lo)) throw bad_bracket_error("bisect: lower endpoint already blows up");
    if (!blows_up(lambda_hi)) throw bad_bracket_error("bisect: upper endpoint does not blow up");
    out.lambda_lo = lambda_lo;
    out.lambda_hi = lambda_hi;
    while (out.lambda_hi - out.lambda_lo > tol) {
        const double mid = 0.5 * (out.lambda_lo + out.lambda_hi);
        (blows_up(mid) ? out.lambda_hi : out.lambda_lo) = mid;
    }
    return out;
}

BisectResult bisect_lambda(const ProblemSpec& spec_template, const NumericsConfig& numerics,
                           const ClassifierRules& rules, double lambda_lo, double lambda_hi,
                           double tol) {
    std::vector<std::pair<double, Verdict>> log;
    std::vector<std::string> flags;
    auto blows_up = [&](double lambda) {
        ProblemSpec spec = spec_template;
        spec.lambda = lambda;
        const Trajectory traj = run(spec, numerics);
        const ClassificationReport rep = classify(traj, rules);
        log.emplace_back(lambda, rep.verdict);
        if (rep.verdict == Verdict::Undetermined)
            flags.push_back("undetermined verdict at lambda=" + std::to_string(lambda) +
                            " treated as non-blow-up (horizon may be too short)");
        return rep.verdict == Verdict::BlowUp;
    };
    BisectResult out = bisect_predicate(blows_up, lambda_lo, lambda_hi, tol);
    out.log = std::move(log);
    out.flags = std::move(flags);
    return out;
}

LowerBracket bracket_lambda_lower(const ProblemSpec& spec_template,
                                  const NumericsConfig& numerics, const ClassifierRules& rules,
                                  const std::vector<double>& lambda_grid) {
    LowerBracket out;
    for (double lambda : lambda_grid) {
        ProblemSpec spec = spec_template;
        spec.lambda = lambda;
        const Trajectory traj = run(spec, numerics);
        const ClassificationReport rep = classify(traj, rules);
        out.log.emplace_back(lambda, rep.verdict);
        if (rep.certificate_time) {
            if (!out.certified_decay_max || lambda > *out.certified_decay_max)
                out.certified_decay_max = lambda;
        }
        if (rep.verdict == Verdict::SlowDecay) {
            if (!out.slow_decay_min || lambda < *out.slow_decay_min)
                out.slow_decay_min = lambda;
        }
    }
    out.computable = out.certified_decay_max.has_value();
    if (!out.computable) out.flags.push_back("no certified-decay runs on the grid");
    if (!out.slow_decay_min) out.flags.push_back("one-sided: no SlowDecay run observed");
    // Certified lambdas must form a down-closed set (comparison principle).
    if (out.certified_decay_max) {
        for (const auto& [lambda, verdict] : out.log)
            if (lambda < *out.certified_decay_max && verdict == Verdict::BlowUp)
                out.flags.push_back("monotonicity violation at lambda=" + std::to_string(lambda));
    }
    return out;
}

OrderingReport compare_runs(const Trajectory& traj_small, const Trajectory& traj_big,
                            double eps_ord) {
    OrderingReport rep;
    for (const Checkpoint& a : traj_small.checkpoints) {
        const Checkpoint* b = nullptr;
        for (const Checkpoint& c : traj_big.checkpoints)
            if (std::abs(c.t - a.t) <= 1e-9 * std::max(1.0, a.t)) b = &c;
        if (!b) continue;
        ++rep.common_checkpoints;
        const double viol_s = a.s - b->s;
        if (viol_s > rep.max_violation_s) {
            rep.max_violation_s = viol_s;
            rep.violation_time = a.t;
        }
        const std::size_t n_a = a.v.size() - 1;
        const std::size_t n_b = b->v.size() - 1;
        for (std::size_t j = 0; j <= n_a; ++j) {
            const double x = a.s * static_cast<double>(j) / static_cast<double>(n_a);
            // interpolate the dominating run at the same physical location
            const double yb = x / b->s * static_cast<double>(n_b);
            const std::size_t k = std::min(static_cast<std::size_t>(yb), n_b - 1);
            const double w = yb - static_cast<double>(k);
            const double ub = (1.0 - w) * b->v[k] + w * b->v[k + 1];
            const double viol = a.v[j] - ub;
            if (viol > rep.max_violation_u) {
                rep.max_violation_u = viol;
                rep.violation_time = a.t;
                rep.violation_x = x;
            }
        }
    }
    rep.computable = rep.common_checkpoints > 0;
    rep.ordered = rep.computable && rep.max_violation_s <= eps_ord && rep.max_violation_u <= eps_ord;
    return rep;
}

}  // namespace stefanlab
