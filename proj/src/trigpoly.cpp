#include "conormal/trigpoly.hpp"

namespace conormal {

CurveSeries curve_series_from_samples(const VecXc& samples, Real length,
                                      long long m_max) {
  const long long n = samples.size();
  if (2 * m_max >= n)
    throw AliasingError("curve_series_from_samples: 2*m_max must be < N");
  CurveSeries out;
  out.length = length;
  for (long long m = -m_max; m <= m_max; ++m) {
    Complex c{0, 0};
    for (long long j = 0; j < n; ++j)
      c += samples[j] * std::exp(-kI * (kTwoPi * m * j / Real(n)));
    c /= Real(n);
    if (std::abs(c) > 1e-300) out.add(m, c);
  }
  return out;
}

}  // namespace conormal
