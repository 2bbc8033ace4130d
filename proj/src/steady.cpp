#include "omrouter/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace omrouter {

namespace {

using C = Constants;

struct Balance
{
    double stiffness = 0; // m w_m^2
    double force1 = 0;    // hbar g1 |eps_l|^2
    double force2 = 0;    // hbar g2 |eps_p|^2
    double width1 = 0;    // 2 kappa1
    double width2 = 0;    // 2 kappa2
    double g1 = 0;
    double g2 = 0;
    double delta_a = 0;
    double delta_c = 0;

    explicit Balance(const SystemParams &p)
    {
        const double el = optical_drive(p);
        const double ep = microwave_drive(p);
        stiffness = p.mass * p.omega_m * p.omega_m;
        force1 = C::hbar * p.g1 * el * el;
        force2 = C::hbar * p.g2 * ep * ep;
        width1 = 2 * p.kappa1;
        width2 = 2 * p.kappa2;
        g1 = p.g1;
        g2 = p.g2;
        delta_a = p.delta_a;
        delta_c = p.delta_c;
    }

    double operator()(double q) const
    {
        const double d1 = delta_a + g1 * q;
        const double d2 = delta_c - g2 * q;
        return stiffness * q - force2 / (width2 * width2 + d2 * d2) + force1 / (width1 * width1 + d1 * d1);
    }

    // Every root satisfies |q| <= max net radiation force / stiffness.
    double bound() const
    {
        return (force1 / (width1 * width1) + force2 / (width2 * width2)) / stiffness;
    }
};

// Log-spaced points on both sides of a resonance center so that narrow
// Lorentzian features are resolved regardless of the coarse grid spacing.
void add_resonance_samples(std::vector<double> &samples, double center, double half_width, double bracket,
                           int per_decade)
{
    if (!(half_width > 0) || !std::isfinite(center) || !std::isfinite(half_width))
        return;
    const double reach = std::abs(center) + bracket;
    const int lo = -3 * per_decade;
    const int hi = static_cast<int>(std::ceil(std::log10(reach / half_width) * per_decade)) + 1;
    if (std::abs(center) <= bracket)
        samples.push_back(center);
    for (int k = lo; k <= hi; ++k) {
        const double offset = half_width * std::pow(10.0, static_cast<double>(k) / per_decade);
        for (double q : {center - offset, center + offset})
            if (std::abs(q) <= bracket)
                samples.push_back(q);
    }
}

double bisect(const Balance &f, double lo, double hi, double f_lo, double tolerance)
{
    // Invariant: f(lo) and f(hi) have opposite signs.
    double f_hi = f(hi);
    while (true) {
        const double mid = (lo + hi) / 2;
        if (mid <= std::min(lo, hi) || mid >= std::max(lo, hi) || std::abs(hi - lo) <= tolerance)
            break;
        const double fm = f(mid);
        if (fm == 0)
            return mid;
        if ((fm < 0) == (f_lo < 0)) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
            f_hi = fm;
        }
    }
    if (std::abs(f_lo) == std::abs(f_hi))
        return (lo + hi) / 2;
    return std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
}

SystemParams scaled_drive(const SystemParams &p, double s)
{
    SystemParams out = p;
    out.power_l = p.power_l * s;
    out.power_p = p.power_p * s;
    return out;
}

// Index of the root nearest `target`; sets `ambiguous` if the runner-up is
// equally close within `tolerance`.
std::size_t nearest_root(const std::vector<double> &roots, double target, double tolerance, bool &ambiguous)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < roots.size(); ++i)
        if (std::abs(roots[i] - target) < std::abs(roots[best] - target))
            best = i;
    const double best_dist = std::abs(roots[best] - target);
    for (std::size_t i = 0; i < roots.size(); ++i)
        if (i != best && std::abs(std::abs(roots[i] - target) - best_dist) < tolerance)
            ambiguous = true;
    return best;
}

SteadyState finalize(const SystemParams &params, const std::vector<double> &roots, std::size_t index,
                     bool ambiguous, const SteadyOptions &options)
{
    SteadyState state = steady_state_at(params, roots[index]);
    state.branch_index = static_cast<int>(index);
    state.root_count = static_cast<int>(roots.size());
    state.tracking_ambiguous = ambiguous;
    if (!(state.residual <= options.residual_tolerance))
        throw ConvergenceError("steady state residual " + std::to_string(state.residual) + " exceeds tolerance " +
                               std::to_string(options.residual_tolerance));
    return state;
}

} // namespace

double displacement_balance(const SystemParams &params, double q)
{
    return Balance(params)(q);
}

std::vector<double> enumerate_branches(const SystemParams &params, const SteadyOptions &options)
{
    params.validate();
    if (options.scan_samples < 3)
        throw InvalidParameter("enumerate_branches: scan_samples must be at least 3");
    const Balance f(params);
    const double raw_bound = f.bound();
    if (!std::isfinite(raw_bound))
        throw InvalidParameter("enumerate_branches: radiation force bound is not finite");
    if (raw_bound == 0)
        return {0.0};

    const double bracket = raw_bound * 1.01;
    std::vector<double> samples;
    const int half = options.scan_samples / 2;
    samples.reserve(static_cast<std::size_t>(2 * half + 1));
    // Built from the positive half and mirrored so the grid is exactly symmetric.
    for (int i = 0; i <= half; ++i) {
        const double q = bracket * static_cast<double>(i) / half;
        samples.push_back(q);
        samples.push_back(-q);
    }
    if (f.force1 > 0 && f.g1 > 0)
        add_resonance_samples(samples, -f.delta_a / f.g1, f.width1 / f.g1, bracket, options.samples_per_decade);
    if (f.force2 > 0 && f.g2 > 0)
        add_resonance_samples(samples, f.delta_c / f.g2, f.width2 / f.g2, bracket, options.samples_per_decade);
    std::sort(samples.begin(), samples.end());
    samples.erase(std::unique(samples.begin(), samples.end()), samples.end());

    std::vector<double> roots;
    double prev_q = samples.front();
    double prev_f = f(prev_q);
    if (prev_f == 0)
        roots.push_back(prev_q);
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const double q = samples[i];
        const double fq = f(q);
        if (fq == 0) {
            roots.push_back(q);
        } else if (prev_f != 0 && (fq < 0) != (prev_f < 0)) {
            roots.push_back(bisect(f, prev_q, q, prev_f, options.bisection_tolerance));
        }
        prev_q = q;
        prev_f = fq;
    }
    if (roots.empty())
        throw InternalError("enumerate_branches: no sign change inside the force bracket");
    return roots;
}

SteadyState steady_state_at(const SystemParams &params, double q_s)
{
    const auto det = effective_detunings(params, q_s);
    SteadyState s;
    s.q_s = q_s;
    s.p_s = 0.0;
    s.delta1 = det.delta1;
    s.delta2 = det.delta2;
    s.a_s = optical_drive(params) / std::complex<double>(2 * params.kappa1, det.delta1);
    s.c_s = microwave_drive(params) / std::complex<double>(2 * params.kappa2, det.delta2);
    s.residual = steady_residual(params, s);
    return s;
}

SteadyState solve_steady_state(const SystemParams &params, const SteadyOptions &options)
{
    const std::vector<double> roots = enumerate_branches(params, options);
    bool ambiguous = false;
    std::size_t index = 0;
    switch (options.policy) {
    case BranchPolicy::Lowest:
        index = 0;
        break;
    case BranchPolicy::Highest:
        index = roots.size() - 1;
        break;
    case BranchPolicy::ZeroPowerConnected: {
        if (options.ramp_steps < 1)
            throw InvalidParameter("solve_steady_state: ramp_steps must be positive");
        double tracked = 0.0;
        for (int step = 1; step < options.ramp_steps; ++step) {
            const double s = static_cast<double>(step) / options.ramp_steps;
            const auto partial = enumerate_branches(scaled_drive(params, s), options);
            tracked = partial[nearest_root(partial, tracked, options.ambiguity_tolerance, ambiguous)];
        }
        index = nearest_root(roots, tracked, options.ambiguity_tolerance, ambiguous);
        break;
    }
    }
    return finalize(params, roots, index, ambiguous, options);
}

SteadyState solve_steady_state_near(const SystemParams &params, double previous_q, const SteadyOptions &options)
{
    const std::vector<double> roots = enumerate_branches(params, options);
    bool ambiguous = false;
    const std::size_t index = nearest_root(roots, previous_q, options.ambiguity_tolerance, ambiguous);
    return finalize(params, roots, index, ambiguous, options);
}

double steady_residual(const SystemParams &params, const SteadyState &state)
{
    constexpr double floor = 1e-30;
    const auto det = effective_detunings(params, state.q_s);
    const std::complex<double> a_rhs = optical_drive(params) / std::complex<double>(2 * params.kappa1, det.delta1);
    const std::complex<double> c_rhs =
        microwave_drive(params) / std::complex<double>(2 * params.kappa2, det.delta2);

    const double stiffness = params.mass * params.omega_m * params.omega_m;
    const double push = C::hbar * params.g2 * std::norm(state.c_s) / stiffness;
    const double pull = C::hbar * params.g1 * std::norm(state.a_s) / stiffness;
    const double q_rhs = push - pull;
    // The right-hand side is a difference; its gross magnitude is the scale.
    const double q_scale = std::max({std::abs(state.q_s), std::abs(q_rhs), push + pull});

    const double rq = std::abs(state.q_s - q_rhs) / (q_scale + floor);
    const double ra = std::abs(state.a_s - a_rhs) / (std::max(std::abs(state.a_s), std::abs(a_rhs)) + floor);
    const double rc = std::abs(state.c_s - c_rhs) / (std::max(std::abs(state.c_s), std::abs(c_rhs)) + floor);
    return std::max({rq, ra, rc});
}

} // namespace omrouter
