#pragma once

// Exact scalar and vector arithmetic shared by every module. All numbers in
// this library are GMP integers or rationals; there is no floating point.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cragged {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

enum class ErrorKind {
  DimensionMismatch,
  NotFullRank,
  NotSimplicial,
  EmptyInput,
  BadWeights,
  InfiniteOrder,
  UnknownName,
  IncompleteFan,
  NotAFace,
  ParseError,
  SchemaError,
  ValidationError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotFullRank: return "NotFullRank";
    case ErrorKind::NotSimplicial: return "NotSimplicial";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::BadWeights: return "BadWeights";
    case ErrorKind::InfiniteOrder: return "InfiniteOrder";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::IncompleteFan: return "IncompleteFan";
    case ErrorKind::NotAFace: return "NotAFace";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require_same_dim(std::size_t a, std::size_t b, std::string_view what) {
  if (a != b) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": expected dimension " + std::to_string(a) +
                    ", got " + std::to_string(b));
  }
}

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

inline Integer content(const IntVector& v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g;
}

inline bool is_zero(const IntVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

/// Divides out the content; the zero vector is returned unchanged.
inline IntVector primitive(IntVector v) {
  Integer g = content(v);
  if (g > 1) {
    for (auto& x : v) x /= g;
  }
  return v;
}

inline IntVector negated(IntVector v) {
  for (auto& x : v) x = -x;
  return v;
}

inline Integer dot(const IntVector& a, const IntVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational dot(const RatVector& a, const IntVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational dot(const RatVector& a, const RatVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RatVector to_rational(const IntVector& v) {
  return RatVector(v.begin(), v.end());
}

/// Positive multiple of `v` with integer entries and content 1.
inline IntVector primitive_direction(const RatVector& v) {
  Integer den = 1;
  for (const auto& q : v) den = lcm(den, q.get_den());
  IntVector out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(Integer(q * den));
  return primitive(std::move(out));
}

inline bool is_integral(const RatVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& q) { return is_integer(q); });
}

/// Parses "p", "-p" or "p/q" exactly. Decimal notation is rejected.
inline Rational parse_rational(std::string_view text) {
  auto bad = [&] {
    return Error(ErrorKind::ParseError, "not a rational number: '" + std::string(text) + "'");
  };
  auto digits_ok = [](std::string_view s, bool allow_sign) {
    if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) s.remove_prefix(1);
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false)) throw bad();
  std::string num_s(num);
  if (!num_s.empty() && num_s[0] == '+') num_s.erase(0, 1);
  Integer n(num_s, 10);
  Integer d(std::string(den), 10);
  if (d == 0) throw bad();
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline std::string format(const Rational& q) {
  if (is_integer(q)) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace cragged
