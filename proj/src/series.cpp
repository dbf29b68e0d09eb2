#include "h2beta/series.hpp"

#include <algorithm>
#include <stdexcept>

namespace h2beta {

std::vector<cplx> truncated_mul(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                std::size_t M) {
  std::vector<cplx> out(M + 1, cplx(0.0, 0.0));
  const std::size_t na = std::min(a.size(), M + 1);
  for (std::size_t i = 0; i < na; ++i) {
    const cplx ai = a[i];
    if (ai == cplx(0.0, 0.0)) continue;
    const std::size_t nb = std::min(b.size(), M + 1 - i);
    for (std::size_t j = 0; j < nb; ++j) out[i + j] += ai * b[j];
  }
  return out;
}

std::vector<cplx> truncated_pow(const std::vector<cplx>& base, long n, std::size_t M) {
  if (n < 0) throw std::invalid_argument("truncated_pow: negative power");
  std::vector<cplx> result(M + 1, cplx(0.0, 0.0));
  result[0] = 1.0;
  if (n == 0) return result;
  std::vector<cplx> sq(base.begin(), base.begin() + std::min(base.size(), M + 1));
  sq.resize(M + 1, cplx(0.0, 0.0));
  long e = n;
  while (e > 0) {
    if (e & 1) result = truncated_mul(result, sq, M);
    e >>= 1;
    if (e > 0) sq = truncated_mul(sq, sq, M);
  }
  return result;
}

}  // namespace h2beta
