// Copyright 2026 The ttno Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TTNO_COMMON_HPP
#define TTNO_COMMON_HPP

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace ttno {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;

/// Opaque, user supplied site identifier. Ordered by value.
struct SiteId {
  std::uint32_t value = 0;

  constexpr SiteId() = default;
  constexpr explicit SiteId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(SiteId, SiteId) = default;
  friend std::ostream &operator<<(std::ostream &os, SiteId s) { return os << s.value; }
};

/// Undirected tree edge, stored with `a < b`.
struct Edge {
  SiteId a;
  SiteId b;

  constexpr Edge() = default;
  constexpr Edge(SiteId x, SiteId y) : a(x < y ? x : y), b(x < y ? y : x) {}

  constexpr bool touches(SiteId s) const { return a == s || b == s; }
  constexpr SiteId other(SiteId s) const { return s == a ? b : a; }
  std::string to_string() const { return std::to_string(a.value) + "-" + std::to_string(b.value); }

  friend constexpr auto operator<=>(const Edge &, const Edge &) = default;
  friend std::ostream &operator<<(std::ostream &os, const Edge &e) {
    return os << '(' << e.a << ',' << e.b << ')';
  }
};

// Error hierarchy. The CLI maps these onto exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// Malformed or out-of-range arguments (unknown site, bad radius, ...).
struct InputError : Error {
  using Error::Error;
};
/// A structural invariant of a tree, term or Hamiltonian is violated.
struct ValidationError : Error {
  using Error::Error;
};
struct DuplicateTermError : ValidationError {
  using ValidationError::ValidationError;
};
struct UnknownLabelError : Error {
  using Error::Error;
};
/// A dense or enumeration size cap would be exceeded.
struct CapExceededError : Error {
  using Error::Error;
};
/// Internal-consistency failure of a constructed object.
struct ConsistencyError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

inline constexpr std::size_t kDefaultDenseCap = 4096;

/// Dense-dimension cap, overridable with TTNO_DENSE_CAP.
inline std::size_t dense_cap() {
  if (const char *env = std::getenv("TTNO_DENSE_CAP")) {
    std::size_t v = 0;
    std::string s(env);
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size() && v > 0) return v;
  }
  return kDefaultDenseCap;
}

/// Shortest round-trip decimal representation of a double.
inline std::string format_double(double x) {
  if (x == 0.0) return std::signbit(x) ? "-0" : "0";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, p);
}

/// Human readable scalar used in derived labels: "2", "-0.5", "(1+0.5i)".
inline std::string format_scalar(Complex c) {
  if (c.imag() == 0.0) return format_double(c.real());
  if (c.real() == 0.0) return format_double(c.imag()) + "i";
  std::string im = format_double(c.imag());
  if (im.front() != '-') im = "+" + im;
  return "(" + format_double(c.real()) + im + "i)";
}

/// 17 significant digits, as used in every CSV the tools emit.
inline std::string format_csv_double(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, p);
}

}  // namespace ttno

template <>
struct std::hash<ttno::SiteId> {
  std::size_t operator()(ttno::SiteId s) const noexcept { return std::hash<std::uint32_t>{}(s.value); }
};

#endif  // TTNO_COMMON_HPP
