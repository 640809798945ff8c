#pragma once

#include "rofdist/common.hpp"

namespace rofdist::dft {

/// Transforms indexed by the baseband grid frequencies f_k = (k - K/2)*B/K.
///
///   forward:  X_k = sum_n x_n exp(-j 2 pi f_k n Ts)        (Ts = 1/B)
///   inverse:  x_n = (1/K) sum_k X_k exp(+j 2 pi f_k n Ts)
///
/// Since f_k n Ts = (k - K/2) n / K, both reduce to the standard DFT of the
/// (-1)^n-modulated sequence; K must be even for the modulation to be
/// K-periodic. Power-of-two lengths go through a radix-2 FFT, other even
/// lengths through direct evaluation.
cvec forward(const cvec& time_samples);
cvec inverse(const cvec& freq_bins);

/// Standard-kernel DFT pair (bin k <-> exp(-j 2 pi n k / K)), any length.
/// Used internally for circular convolution, where bin labeling cancels.
cvec forward_std(const cvec& x);
cvec inverse_std(const cvec& x);

/// Allocation-free variants for hot loops; power-of-two lengths only.
void forward_std_inplace(cvec& x);
void inverse_std_inplace(cvec& x);

/// Circular convolution of x with taps (taps.size() <= x.size()).
cvec convolve_circular(const cvec& x, const cvec& taps);

/// Full linear convolution, output length x.size() + taps.size() - 1.
cvec convolve_linear(const cvec& x, const cvec& taps);

}  // namespace rofdist::dft
