#pragma once

// Exact and extended-precision scalar types used across the library.
//
// The ladder is: exact rationals / quadratic surds for everything that can
// stay exact, std::complex<double> for search and bulk evaluation, and a
// ~166-bit binary float for final certification of residuals.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pforge {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

using MpReal = boost::multiprecision::cpp_bin_float_50;   // 50 decimal digits
using MpComplex = boost::multiprecision::cpp_complex_50;

using Cd = std::complex<double>;

inline double to_double(const BigRat& q) { return q.convert_to<double>(); }
inline MpReal to_mp(const BigRat& q) { return MpReal(numerator(q)) / MpReal(denominator(q)); }

template <typename C>
struct scalar_of;
template <>
struct scalar_of<Cd> { using type = double; };
template <>
struct scalar_of<MpComplex> { using type = MpReal; };

// Largest square divisor split: n = s^2 * d with d square-free.
inline void squarefree_split(std::int64_t n, std::int64_t& s, std::int64_t& d) {
    s = 1;
    d = n;
    for (std::int64_t p = 2; p * p <= d; ++p) {
        while (d % (p * p) == 0) {
            d /= p * p;
            s *= p;
        }
    }
}

// Element a + b*sqrt(D) of a real quadratic field, exact coefficients.
struct QuadExt {
    BigRat a{0};
    BigRat b{0};
    std::int64_t D{0};

    QuadExt() = default;
    QuadExt(BigRat a_, BigRat b_, std::int64_t D_) : a(std::move(a_)), b(std::move(b_)), D(D_) {}

    static QuadExt rational(BigRat r, std::int64_t D_) { return {std::move(r), BigRat(0), D_}; }

    QuadExt conj() const { return {a, -b, D}; }

    QuadExt operator+(const QuadExt& o) const { return {a + o.a, b + o.b, D}; }
    QuadExt operator-(const QuadExt& o) const { return {a - o.a, b - o.b, D}; }
    QuadExt operator*(const QuadExt& o) const {
        return {a * o.a + b * o.b * BigRat(D), a * o.b + b * o.a, D};
    }
    QuadExt operator-() const { return {-a, -b, D}; }

    bool operator==(const QuadExt& o) const { return a == o.a && b == o.b && D == o.D; }

    template <typename R>
    R value() const {
        R sd = sqrt(R(D));
        if constexpr (std::is_same_v<R, double>) {
            return to_double(a) + to_double(b) * sd;
        } else {
            return to_mp(a) + to_mp(b) * sd;
        }
    }
    double d() const { return value<double>(); }
    MpReal mp() const { return value<MpReal>(); }

    std::string str() const {
        BigRat ab = b < 0 ? BigRat(-b) : b;
        return "(" + a.str() + (b < 0 ? " - " : " + ") + ab.str() + "*sqrt(" + std::to_string(D) + "))";
    }
};

// Principal square root that keeps negative reals on the +i branch.
inline Cd branch_sqrt(Cd x) {
    if (x.imag() == 0.0 && x.real() < 0.0) return Cd(0.0, std::sqrt(-x.real()));
    return std::sqrt(x);
}
inline MpComplex branch_sqrt(MpComplex x) {
    if (x.imag() == 0 && x.real() < 0) return MpComplex(0, sqrt(-x.real()));
    return sqrt(x);
}

struct DimensionMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pforge
