// Independent reference values for the tests.
#ifndef HELMDG_TESTS_ORACLE_HPP
#define HELMDG_TESTS_ORACLE_HPP

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using big = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<180>>;

// Power series of J_order(x), summed in 180 decimal digits, which covers
// the cancellation up to x = 300.
inline double bessel_series(int order, double xd) {
  const big x(xd);
  const big q = x * x / 4;
  big term = 1;
  if (order == 1) term = x / 2;
  big sum = term;
  for (int m = 1; m < 2000; ++m) {
    term *= -q / (big(m) * big(m + order));
    sum += term;
    if (m > xd && abs(term) < big("1e-40")) break;
  }
  return static_cast<double>(sum);
}

}  // namespace oracle

#endif
