#pragma once

#include <complex>
#include <vector>

namespace rofdist {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using dvec = std::vector<double>;

inline constexpr double pi = 3.14159265358979323846;

/// 10^(db/20), the amplitude scale of a gain given in decibels.
inline double amplitude_from_db(double db) { return std::pow(10.0, db / 20.0); }

inline double db_from_amplitude(double amplitude) { return 20.0 * std::log10(amplitude); }

}  // namespace rofdist
