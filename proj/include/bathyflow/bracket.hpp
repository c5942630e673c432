#pragma once

#include <map>

#include "bathyflow/sampled.hpp"

namespace bathyflow {

/// A finite-support sequence of coefficient functions, indexed by the
/// cross-channel mode number.
using CoeffSeq = std::map<int, SampledCoefficient>;

/// [f,g]_m = sum_l l * (f_l g'_{m-l} - g_l f'_{m-l}), the convolution over the
/// finite supports. Both inputs must carry derivative samples.
SampledCoefficient bracket_mode(const CoeffSeq& f, const CoeffSeq& g, int m);

/// All target modes with non-empty support overlap.
CoeffSeq bracket(const CoeffSeq& f, const CoeffSeq& g);

}  // namespace bathyflow
