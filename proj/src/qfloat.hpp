#pragma once

// Minimal __float128 scalar and complex arithmetic for series accumulation.
//
// Several ascending series in this library (modified Bessel K through its
// log term, Bessel J/I at complex argument, confluent hypergeometrics) lose
// up to ~25 decimal digits to cancellation before converging.  Accumulating
// in binary128 (~33 digits) keeps the final double-precision result at full
// accuracy without pulling in an external multiprecision dependency.
//
// Only the operations the series need are provided: +,-,*,/ and, for the
// logarithmic/digamma terms, exp/log/sin/cos/atan2 built from argument
// reduction plus Taylor polynomials against string-parsed 128-bit constants.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>

namespace rmt {

using f128 = __float128;

namespace qf {

// Parse a decimal string "d.dddd" (no exponent) into f128.  Each arithmetic
// op is correctly rounded, so the result is accurate to ~1 ulp of binary128,
// ample for constants feeding 1e-10..1e-12 double-precision contracts.
inline f128 parse(const char* s) {
    f128 v = 0;
    bool neg = false;
    if (*s == '-') { neg = true; ++s; }
    long frac_digits = -1;
    for (; *s; ++s) {
        if (*s == '.') { frac_digits = 0; continue; }
        v = v * 10 + (f128)(*s - '0');
        if (frac_digits >= 0) ++frac_digits;
    }
    f128 scale = 1;
    for (long i = 0; i < frac_digits; ++i) scale *= 10;
    v /= scale;
    return neg ? -v : v;
}

inline const f128 PI      = parse("3.14159265358979323846264338327950288419716939937511");
inline const f128 LN2     = parse("0.69314718055994530941723212145817656807550013436026");
inline const f128 EULER   = parse("0.57721566490153286060651209008240243104215933593992");
inline const f128 HALF_PI = PI / 2;

inline f128 qabs(f128 x) { return x < 0 ? -x : x; }

inline f128 qsqrt(f128 a) {
    if (a <= 0) return 0;
    f128 x = (f128)std::sqrt((double)a);   // 53-bit seed
    x = (x + a / x) / 2;                   // two Newton steps double the digits
    x = (x + a / x) / 2;
    return x;
}

// exp(x) by range reduction x = k ln2 + r, |r| <= ln2/2, Taylor in r.
inline f128 qexp(f128 x) {
    if (x > 11356) return __builtin_huge_valq();
    if (x < -11400) return 0;
    long k = (long)std::llround((double)(x / LN2));
    f128 r = x - (f128)k * LN2;
    f128 term = 1, sum = 1;
    for (int n = 1; n < 40; ++n) {
        term *= r / (f128)n;
        sum += term;
        if (qabs(term) < sum * (f128)1e-36) break;
    }
    // scale by 2^k exactly (power-of-two factors are lossless)
    while (k > 0) { int step = k > 60 ? 60 : (int)k; sum *= (f128)std::ldexp(1.0, step); k -= step; }
    while (k < 0) { int step = k < -60 ? 60 : (int)(-k); sum *= (f128)std::ldexp(1.0, -step); k += step; }
    return sum;
}

// log(x) by Newton refinement of the double-precision seed: y += x e^{-y} - 1.
inline f128 qlog(f128 x) {
    f128 y = (f128)std::log((double)x);
    for (int i = 0; i < 2; ++i) y += x * qexp(-y) - 1;
    return y;
}

// sin/cos with argument reduction modulo pi/2 and Taylor in |r| <= pi/4.
inline void qsincos(f128 x, f128& s, f128& c) {
    long q = (long)std::llround((double)(x / HALF_PI));
    f128 r = x - (f128)q * HALF_PI;
    f128 r2 = r * r;
    f128 sr = r, term = r;
    for (int n = 1; n < 20; ++n) {
        term *= -r2 / (f128)((2 * n) * (2 * n + 1));
        sr += term;
        if (qabs(term) < (f128)1e-40) break;
    }
    f128 cr = 1; term = 1;
    for (int n = 1; n < 20; ++n) {
        term *= -r2 / (f128)((2 * n - 1) * (2 * n));
        cr += term;
        if (qabs(term) < (f128)1e-40) break;
    }
    switch (((q % 4) + 4) % 4) {
        case 0: s = sr;  c = cr;  break;
        case 1: s = cr;  c = -sr; break;
        case 2: s = -sr; c = -cr; break;
        default: s = -cr; c = sr; break;
    }
}

inline f128 qatan2(f128 y, f128 x) {
    f128 t = (f128)std::atan2((double)y, (double)x);
    // One rotation-based correction: rotate (x,y) by -t; residual angle is
    // tiny, atan(eps) = eps to 3rd order.
    f128 st, ct;
    qsincos(t, st, ct);
    f128 xr = x * ct + y * st;
    f128 yr = y * ct - x * st;
    if (xr != 0) t += yr / xr;
    return t;
}

}  // namespace qf

// Complex binary128 value for series work.
struct qcplx {
    f128 re, im;
    qcplx() : re(0), im(0) {}
    qcplx(f128 r) : re(r), im(0) {}
    qcplx(f128 r, f128 i) : re(r), im(i) {}
    explicit qcplx(std::complex<double> z) : re(z.real()), im(z.imag()) {}
    std::complex<double> to_double() const { return {(double)re, (double)im}; }
};

inline qcplx operator+(qcplx a, qcplx b) { return {a.re + b.re, a.im + b.im}; }
inline qcplx operator-(qcplx a, qcplx b) { return {a.re - b.re, a.im - b.im}; }
inline qcplx operator-(qcplx a) { return {-a.re, -a.im}; }
inline qcplx operator*(qcplx a, qcplx b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline qcplx operator*(qcplx a, f128 b) { return {a.re * b, a.im * b}; }
inline qcplx operator*(f128 b, qcplx a) { return {a.re * b, a.im * b}; }
inline qcplx operator/(qcplx a, f128 b) { return {a.re / b, a.im / b}; }
inline qcplx operator/(qcplx a, qcplx b) {
    f128 d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
inline f128 qnorm2(qcplx a) { return a.re * a.re + a.im * a.im; }
inline f128 qabs(qcplx a) { return qf::qsqrt(qnorm2(a)); }

// Principal complex log, accurate to binary128.
inline qcplx qclog(qcplx z) {
    return {qf::qlog(qnorm2(z)) / 2, qf::qatan2(z.im, z.re)};
}

inline qcplx qcexp(qcplx z) {
    f128 m = qf::qexp(z.re), s, c;
    qf::qsincos(z.im, s, c);
    return {m * c, m * s};
}

// Integer power by binary exponentiation.
inline qcplx qcpow_int(qcplx z, long n) {
    bool inv = n < 0;
    unsigned long k = inv ? (unsigned long)(-n) : (unsigned long)n;
    qcplx acc(1), base = z;
    while (k) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    if (inv) acc = qcplx(1) / acc;
    return acc;
}

}  // namespace rmt
