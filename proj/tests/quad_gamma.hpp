// Quad-precision complex log-gamma oracle (Stirling series with Bernoulli
// correction after an 8-step argument shift), independent of the library's
// Lanczos path. Test-only.
#pragma once

#include <quadmath.h>

#include <complex>

namespace oracle {

struct QComplex {
  __float128 re, im;
};

inline QComplex qc(double re, double im = 0.0) { return {re, im}; }
inline QComplex qadd(QComplex a, QComplex b) { return {a.re + b.re, a.im + b.im}; }
inline QComplex qsub(QComplex a, QComplex b) { return {a.re - b.re, a.im - b.im}; }
inline QComplex qmul(QComplex a, QComplex b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline QComplex qscale(__float128 s, QComplex a) { return {s * a.re, s * a.im}; }
inline QComplex qdiv(QComplex a, QComplex b) {
  const __float128 d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
inline QComplex qlog(QComplex a) {
  return {logq(hypotq(a.re, a.im)), atan2q(a.im, a.re)};
}
inline QComplex qexp(QComplex a) {
  const __float128 m = expq(a.re);
  return {m * cosq(a.im), m * sinq(a.im)};
}
inline QComplex qinv(QComplex a) { return qdiv(qc(1.0), a); }

/// ln Gamma(z) for Re z > 0, accurate to ~1e-25.
inline QComplex qlgamma(QComplex z) {
  constexpr int kShift = 8;
  QComplex shift_log = qc(0.0);
  QComplex w = z;
  for (int k = 0; k < kShift; ++k) {
    shift_log = qadd(shift_log, qlog(w));
    w = qadd(w, qc(1.0));
  }
  // Stirling: (w-1/2) ln w - w + ln sqrt(2 pi) + sum B_{2n}/((2n)(2n-1) w^{2n-1}).
  static const __float128 bern[] = {
      1.0Q / 12.0Q,   -1.0Q / 360.0Q,      1.0Q / 1260.0Q, -1.0Q / 1680.0Q,
      1.0Q / 1188.0Q, -691.0Q / 360360.0Q, 7.0Q / 1092.0Q, -3617.0Q / 122400.0Q,
      43867.0Q / 244188.0Q};
  const QComplex logw = qlog(w);
  QComplex acc = qadd(qsub(qmul(qsub(w, qc(0.5)), logw), w),
                      QComplex{0.91893853320467274178032973640561764Q, 0.0Q});
  const QComplex w2 = qmul(w, w);
  QComplex wpow = qinv(w);
  for (const __float128 b : bern) {
    acc = qadd(acc, qscale(b, wpow));
    wpow = qdiv(wpow, w2);
  }
  return qsub(acc, shift_log);
}

inline std::complex<double> to_cd(QComplex a) {
  return {static_cast<double>(a.re), static_cast<double>(a.im)};
}

}  // namespace oracle
