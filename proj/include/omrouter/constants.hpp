#pragma once

#include <numbers>

namespace omrouter {

// CODATA 2018 values; h and k_B are exact in the 2019 SI.
template <typename Scalar>
struct PhysicalConstants
{
    static constexpr Scalar planck = Scalar(6.62607015e-34L);
    static constexpr Scalar hbar = planck / (Scalar(2) * std::numbers::pi_v<Scalar>);
    static constexpr Scalar k_B = Scalar(1.380649e-23L);
};

using Constants = PhysicalConstants<double>;

template <typename Scalar>
constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;

} // namespace omrouter
