#pragma once

#include <complex>

namespace kzwork {

struct AiryValues {
  std::complex<double> ai, aip, bi, bip;
  double rel_error = 0.0;  // estimated worst relative error of the four values
};

// Ai, Ai', Bi, Bi' for complex argument. Maclaurin series for |z| <= 4, asymptotic
// expansions for |z| >= 9. Up to 5.5 the series is kept unless its error estimate
// exceeds 1e-13; beyond that the branch with the smaller estimate wins. Throws
// PrecisionLoss when the estimate exceeds 1e-8.
AiryValues airy(std::complex<double> z);

// Same evaluation forced onto one branch; exposed for testing the crossover.
AiryValues airy_series(std::complex<double> z);
AiryValues airy_asymptotic(std::complex<double> z);

}  // namespace kzwork
