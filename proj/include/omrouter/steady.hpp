#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "omrouter/model.hpp"

namespace omrouter {

/// Mean-field fixed point of the driven system.
template <typename Scalar>
struct BasicSteadyState
{
    Scalar q_s{};                  ///< static displacement (m)
    Scalar p_s{};                  ///< static momentum, always zero
    std::complex<Scalar> a_s{};    ///< optical amplitude
    std::complex<Scalar> c_s{};    ///< microwave amplitude
    Scalar delta1{};               ///< effective optical detuning
    Scalar delta2{};               ///< effective microwave detuning
    Scalar residual{};             ///< relative fixed-point residual
    int branch_index = 0;          ///< position of q_s in the ascending root list
    int root_count = 1;            ///< number of coexisting fixed points
    bool tracking_ambiguous = false; ///< two candidate roots were equidistant while ramping

    bool multistable() const { return root_count > 1; }

    template <typename Other>
    BasicSteadyState<Other> cast() const
    {
        BasicSteadyState<Other> out;
        out.q_s = Other(q_s);
        out.p_s = Other(p_s);
        out.a_s = std::complex<Other>(Other(a_s.real()), Other(a_s.imag()));
        out.c_s = std::complex<Other>(Other(c_s.real()), Other(c_s.imag()));
        out.delta1 = Other(delta1);
        out.delta2 = Other(delta2);
        out.residual = Other(residual);
        out.branch_index = branch_index;
        out.root_count = root_count;
        out.tracking_ambiguous = tracking_ambiguous;
        return out;
    }
};

using SteadyState = BasicSteadyState<double>;

enum class BranchPolicy
{
    ZeroPowerConnected, ///< follow the root continuously from zero drive
    Lowest,             ///< most negative displacement
    Highest             ///< most positive displacement
};

struct SteadyOptions
{
    int scan_samples = 20001;          ///< uniform samples over the bracket
    int samples_per_decade = 100;      ///< log-spaced samples around each cavity resonance
    int ramp_steps = 10;               ///< power ramp 0, 1/n, ..., 1 for branch tracking
    double bisection_tolerance = 0.0;  ///< absolute |dq| (m); 0 bisects to machine precision
    double residual_tolerance = 1e-10;
    double ambiguity_tolerance = 1e-15; ///< m
    BranchPolicy policy = BranchPolicy::ZeroPowerConnected;

    bool operator==(const SteadyOptions &) const = default;
};

/// Force balance whose zeros are the steady displacements:
/// F(q) = m w_m^2 q - hbar g2 |c_s(q)|^2 + hbar g1 |a_s(q)|^2 (newtons).
double displacement_balance(const SystemParams &params, double q);

/// All real roots of displacement_balance(), ascending.
std::vector<double> enumerate_branches(const SystemParams &params, const SteadyOptions &options = {});

/// Full steady state at a given displacement; residual filled in, no tolerance check.
SteadyState steady_state_at(const SystemParams &params, double q_s);

/// Fixed point selected by options.policy. Throws ConvergenceError when the
/// residual exceeds options.residual_tolerance.
SteadyState solve_steady_state(const SystemParams &params, const SteadyOptions &options = {});

/// Fixed point nearest a previously selected displacement (used by sweeps to
/// continue a branch from one parameter point to the next).
SteadyState solve_steady_state_near(const SystemParams &params, double previous_q,
                                    const SteadyOptions &options = {});

/// Max relative mismatch over the three fixed-point relations (q_s, a_s, c_s).
double steady_residual(const SystemParams &params, const SteadyState &state);

} // namespace omrouter
