#pragma once

#include <cstddef>
#include <vector>

#include "h2beta/fft.hpp"

namespace h2beta {

// Truncated power-series arithmetic on coefficient vectors c[0..M].
// Products are exact for indices <= M: entry m of a*b only involves factor
// entries <= m, so dropping the tail above M never feeds back below it.

/// (a*b) truncated to degree M (result has size M+1, padded with zeros).
std::vector<cplx> truncated_mul(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                std::size_t M);

/// base^n truncated to degree M by binary powering, one truncation per multiply.
std::vector<cplx> truncated_pow(const std::vector<cplx>& base, long n, std::size_t M);

}  // namespace h2beta
