#pragma once

// Umbrella header.

#include "truncft/errors.hpp"
#include "truncft/experiments.hpp"
#include "truncft/fft.hpp"
#include "truncft/harmonic.hpp"
#include "truncft/io.hpp"
#include "truncft/rng.hpp"
#include "truncft/signals.hpp"
#include "truncft/spectrum.hpp"
#include "truncft/stability.hpp"
#include "truncft/svg.hpp"
#include "truncft/transform.hpp"

namespace truncft {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace truncft
