#pragma once

// Dense matrix exponential by scaling and squaring with diagonal Pade
// approximants of degree 3, 5, 7, 9 or 13 (Higham 2005 thresholds).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "phononforge/errors.hpp"

namespace phononforge {

namespace detail {

inline double one_norm(const Eigen::MatrixXcd& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace detail

/// exp(a) for a square complex matrix. Relative accuracy is near unit
/// roundoff for well-conditioned inputs (tested to 1e-13 in the suite).
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw InvalidArgument("expm: matrix must be square");
  const auto n = a.rows();
  if (n == 0) return a;

  const double norm = detail::one_norm(a);
  if (norm == 0.0) return Eigen::MatrixXcd::Identity(n, n);

  Eigen::MatrixXcd u(n, n);
  Eigen::MatrixXcd v(n, n);
  int squarings = 0;

  if (norm <= 1.495585217958292e-2) {
    constexpr std::array<double, 4> b{120.0, 60.0, 12.0, 1.0};
    const Eigen::MatrixXcd a2 = a * a;
    const Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(n, n);
    u = a * (b[3] * a2 + b[1] * ident);
    v = b[2] * a2 + b[0] * ident;
  } else if (norm <= 2.539398330063230e-1) {
    constexpr std::array<double, 6> b{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
    const Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd a2 = a * a;
    const Eigen::MatrixXcd a4 = a2 * a2;
    u = a * (b[5] * a4 + b[3] * a2 + b[1] * ident);
    v = b[4] * a4 + b[2] * a2 + b[0] * ident;
  } else if (norm <= 9.504178996162932e-1) {
    constexpr std::array<double, 8> b{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                      25200.0,    1512.0,    56.0,      1.0};
    const Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd a2 = a * a;
    const Eigen::MatrixXcd a4 = a2 * a2;
    const Eigen::MatrixXcd a6 = a4 * a2;
    u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
    v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  } else if (norm <= 2.097847961257068e0) {
    constexpr std::array<double, 10> b{17643225600.0, 8821612800.0, 2075673600.0,
                                       302702400.0,   30270240.0,   2162160.0,
                                       110880.0,      3960.0,       90.0,
                                       1.0};
    const Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd a2 = a * a;
    const Eigen::MatrixXcd a4 = a2 * a2;
    const Eigen::MatrixXcd a6 = a4 * a2;
    const Eigen::MatrixXcd a8 = a6 * a2;
    u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
    v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  } else {
    constexpr double theta13 = 5.371920351148152e0;
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
    const Eigen::MatrixXcd as = a / std::ldexp(1.0, squarings);
    constexpr std::array<double, 14> b{
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};
    const Eigen::MatrixXcd ident = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd a2 = as * as;
    const Eigen::MatrixXcd a4 = a2 * a2;
    const Eigen::MatrixXcd a6 = a4 * a2;
    const Eigen::MatrixXcd inner_u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
    u = as * (inner_u + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
    const Eigen::MatrixXcd inner_v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
    v = inner_v + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  }

  Eigen::MatrixXcd result = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

}  // namespace phononforge
