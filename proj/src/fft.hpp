#pragma once

#include <complex>

namespace sphframe::detail {

/// out_k = sum_p in_p exp(sign * 2 pi i k p / n); sign is -1 (forward) or +1 (backward).
/// Plans are created once per (n, sign) and shared; execution is thread-safe.
void dft(int n, int sign, const std::complex<double>* in, std::complex<double>* out);

}  // namespace sphframe::detail
