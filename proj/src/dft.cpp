#include "rofdist/dft.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace rofdist::dft {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

struct Plan {
  std::size_t n = 0;
  std::vector<std::size_t> bitrev;
  cvec twiddles;  // exp(-j 2 pi k / n) for k < n/2

  explicit Plan(std::size_t size) : n(size), bitrev(size) {
    std::size_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < log2n; ++b) r |= ((i >> b) & 1) << (log2n - 1 - b);
      bitrev[i] = r;
    }
    twiddles.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
      const double phi = -2.0 * pi * static_cast<double>(k) / static_cast<double>(n);
      twiddles[k] = {std::cos(phi), std::sin(phi)};
    }
  }
};

const Plan& plan_for(std::size_t n) {
  static thread_local std::unordered_map<std::size_t, Plan> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, Plan(n)).first;
  return it->second;
}

// In-place radix-2 DIT FFT with the standard e^{-j2pi nk/N} kernel.
void fft_pow2(cvec& x) {
  const Plan& plan = plan_for(x.size());
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = plan.bitrev[i];
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n / len;
    for (std::size_t base = 0; base < n; base += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const cplx w = plan.twiddles[k * stride];
        const cplx odd = x[base + k + half] * w;
        const cplx even = x[base + k];
        x[base + k] = even + odd;
        x[base + k + half] = even - odd;
      }
    }
  }
}

cvec dft_direct(const cvec& x, double sign) {
  const std::size_t n = x.size();
  cvec out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m < n; ++m) {
      const double phi = sign * 2.0 * pi * static_cast<double>(k * m % n) / static_cast<double>(n);
      acc += x[m] * cplx{std::cos(phi), std::sin(phi)};
    }
    out[k] = acc;
  }
  return out;
}

// Multiply each sample by (-1)^n; maps the half-band-offset kernel onto the
// standard one. Valid only for even lengths.
void alternate_sign(cvec& x) {
  for (std::size_t n = 1; n < x.size(); n += 2) x[n] = -x[n];
}

}  // namespace

cvec forward_std(const cvec& x) {
  if (x.empty()) return {};
  if (is_pow2(x.size())) {
    cvec out = x;
    fft_pow2(out);
    return out;
  }
  return dft_direct(x, -1.0);
}

cvec inverse_std(const cvec& x) {
  if (x.empty()) return {};
  const double scale = 1.0 / static_cast<double>(x.size());
  cvec out;
  if (is_pow2(x.size())) {
    out = x;
    for (auto& v : out) v = std::conj(v);
    fft_pow2(out);
    for (auto& v : out) v = std::conj(v) * scale;
  } else {
    out = dft_direct(x, 1.0);
    for (auto& v : out) v *= scale;
  }
  return out;
}

void forward_std_inplace(cvec& x) {
  if (!is_pow2(x.size())) throw std::invalid_argument("forward_std_inplace: length must be a power of two");
  fft_pow2(x);
}

void inverse_std_inplace(cvec& x) {
  if (!is_pow2(x.size())) throw std::invalid_argument("inverse_std_inplace: length must be a power of two");
  const double scale = 1.0 / static_cast<double>(x.size());
  for (auto& v : x) v = std::conj(v);
  fft_pow2(x);
  for (auto& v : x) v = std::conj(v) * scale;
}

cvec forward(const cvec& time_samples) {
  if (time_samples.size() % 2 != 0)
    throw std::invalid_argument("dft::forward: length must be even");
  cvec x = time_samples;
  alternate_sign(x);
  return forward_std(x);
}

cvec inverse(const cvec& freq_bins) {
  if (freq_bins.size() % 2 != 0)
    throw std::invalid_argument("dft::inverse: length must be even");
  cvec x = inverse_std(freq_bins);
  alternate_sign(x);
  return x;
}

cvec convolve_circular(const cvec& x, const cvec& taps) {
  const std::size_t n = x.size();
  const std::size_t len = taps.size();
  if (len > n) throw std::invalid_argument("convolve_circular: more taps than samples");
  // direct form for short filters, transform pair otherwise
  if (!is_pow2(n) || len <= 16) {
    cvec out(n);
    for (std::size_t i = 0; i < n; ++i) {
      cplx acc{0.0, 0.0};
      for (std::size_t l = 0; l < len; ++l) {
        const std::size_t idx = (i + n - l) % n;
        acc += taps[l] * x[idx];
      }
      out[i] = acc;
    }
    return out;
  }
  cvec padded(n, cplx{0.0, 0.0});
  std::copy(taps.begin(), taps.end(), padded.begin());
  cvec xf = forward_std(x);
  const cvec tf = forward_std(padded);
  for (std::size_t k = 0; k < n; ++k) xf[k] *= tf[k];
  return inverse_std(xf);
}

cvec convolve_linear(const cvec& x, const cvec& taps) {
  if (x.empty() || taps.empty()) return {};
  cvec out(x.size() + taps.size() - 1, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t l = 0; l < taps.size(); ++l) out[i + l] += x[i] * taps[l];
  return out;
}

}  // namespace rofdist::dft
