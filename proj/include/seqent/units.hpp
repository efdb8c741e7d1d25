#pragma once

// Minimal compile-time dimensional analysis for the SI calculator. A quantity
// carries exponents of (kg, m, s, A); adding or comparing quantities of
// different dimension does not compile.

#include <cmath>
#include <string>

namespace seqent::units {

template <int M, int L, int T, int I>
struct Quantity {
  double value = 0.0;

  constexpr Quantity() = default;
  constexpr explicit Quantity(double v) : value(v) {}

  constexpr Quantity operator+(Quantity o) const { return Quantity(value + o.value); }
  constexpr Quantity operator-(Quantity o) const { return Quantity(value - o.value); }
  constexpr Quantity operator-() const { return Quantity(-value); }
  constexpr Quantity operator*(double s) const { return Quantity(value * s); }
  constexpr Quantity operator/(double s) const { return Quantity(value / s); }
  constexpr double operator/(Quantity o) const { return value / o.value; }
  constexpr auto operator<=>(const Quantity&) const = default;

  static std::string symbol();
};

template <int M, int L, int T, int I>
constexpr Quantity<M, L, T, I> operator*(double s, Quantity<M, L, T, I> q) {
  return q * s;
}

template <int M1, int L1, int T1, int I1, int M2, int L2, int T2, int I2>
constexpr Quantity<M1 + M2, L1 + L2, T1 + T2, I1 + I2> operator*(Quantity<M1, L1, T1, I1> a,
                                                                 Quantity<M2, L2, T2, I2> b) {
  return Quantity<M1 + M2, L1 + L2, T1 + T2, I1 + I2>(a.value * b.value);
}

template <int M1, int L1, int T1, int I1, int M2, int L2, int T2, int I2>
  requires(M1 != M2 || L1 != L2 || T1 != T2 || I1 != I2)
constexpr Quantity<M1 - M2, L1 - L2, T1 - T2, I1 - I2> operator/(Quantity<M1, L1, T1, I1> a,
                                                                 Quantity<M2, L2, T2, I2> b) {
  return Quantity<M1 - M2, L1 - L2, T1 - T2, I1 - I2>(a.value / b.value);
}

template <int M, int L, int T, int I>
constexpr Quantity<-M, -L, -T, -I> operator/(double s, Quantity<M, L, T, I> q) {
  return Quantity<-M, -L, -T, -I>(s / q.value);
}

using Dimensionless = Quantity<0, 0, 0, 0>;
using Kilogram = Quantity<1, 0, 0, 0>;
using Meter = Quantity<0, 1, 0, 0>;
using Second = Quantity<0, 0, 1, 0>;
using Ampere = Quantity<0, 0, 0, 1>;
using SquareMeter = Quantity<0, 2, 0, 0>;
using CubicMeter = Quantity<0, 3, 0, 0>;
using Joule = Quantity<1, 2, -2, 0>;
using JouleSecond = Quantity<1, 2, -1, 0>;
using Tesla = Quantity<1, 0, -2, -1>;
using JoulePerTesla = Quantity<0, 2, 0, 1>;           // A m^2
using TeslaMeterPerAmpere = Quantity<1, 1, -2, -2>;   // H / m
using MeterPerSecond = Quantity<0, 1, -1, 0>;
using Momentum = Quantity<1, 1, -1, 0>;
using Flux = Quantity<0, -2, -1, 0>;                  // m^-2 s^-1
using TeslaCubicMeter = Quantity<1, 3, -2, -1>;

template <int M, int L, int T, int I>
std::string Quantity<M, L, T, I>::symbol() {
  if constexpr (M == 0 && L == 0 && T == 0 && I == 0) return "1";
  if constexpr (M == 1 && L == 2 && T == -2 && I == 0) return "J";
  if constexpr (M == 1 && L == 0 && T == -2 && I == -1) return "T";
  if constexpr (M == 0 && L == 0 && T == 1 && I == 0) return "s";
  if constexpr (M == 0 && L == 1 && T == 0 && I == 0) return "m";
  if constexpr (M == 1 && L == 0 && T == 0 && I == 0) return "kg";
  if constexpr (M == 0 && L == 2 && T == 0 && I == 1) return "J/T";
  if constexpr (M == 1 && L == 1 && T == -1 && I == 0) return "kg m/s";
  if constexpr (M == 0 && L == 1 && T == -1 && I == 0) return "m/s";
  std::string s;
  auto part = [&s](const char* name, int e) {
    if (e == 0) return;
    if (!s.empty()) s += ' ';
    s += name;
    if (e != 1) s += '^' + std::to_string(e);
  };
  part("kg", M);
  part("m", L);
  part("s", T);
  part("A", I);
  return s;
}

template <int M, int L, int T, int I>
  requires(L % 3 == 0 && M % 3 == 0 && T % 3 == 0 && I % 3 == 0)
Quantity<M / 3, L / 3, T / 3, I / 3> cbrt(Quantity<M, L, T, I> q) {
  return Quantity<M / 3, L / 3, T / 3, I / 3>(std::cbrt(q.value));
}

}  // namespace seqent::units
