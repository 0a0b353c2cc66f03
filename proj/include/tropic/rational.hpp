#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tropic {

using Integer = mpz_class;
using Rational = mpq_class;
using QVector = std::vector<Rational>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: unparsable numbers, wrong shapes, missing fields.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A precondition or structural check failed. The witness names the offending object.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::string witness = {})
      : Error(what), witness_(std::move(witness)) {}
  const std::string& witness() const { return witness_; }

 private:
  std::string witness_;
};

inline Rational parseRational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  auto bad = [&] { return SchemaError("malformed rational '" + std::string(text) + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  auto isInt = [](const std::string& t, bool allowSign) {
    size_t i = 0;
    if (allowSign && !t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
    if (i >= t.size()) return false;
    return std::all_of(t.begin() + i, t.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  if (!isInt(num, true) || !isInt(den, false)) throw bad();
  if (num[0] == '+') num.erase(0, 1);
  Integer p(num, 10), q(den, 10);
  if (q == 0) throw SchemaError("zero denominator in '" + std::string(text) + "'");
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline Rational frac(const Integer& p, const Integer& q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline std::string toString(const Rational& r) { return r.get_str(); }

inline std::string toString(const QVector& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + toString(v[i]);
  return s + ")";
}

inline bool isInteger(const Rational& r) { return r.get_den() == 1; }

inline Integer floorOf(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

inline Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline Integer factorial(unsigned k) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), k);
  return r;
}

// ---- vectors ----

inline QVector zeros(size_t n) { return QVector(n, Rational(0)); }

inline QVector unitVector(size_t n, size_t i) {
  QVector v = zeros(n);
  v[i] = 1;
  return v;
}

inline QVector operator+(const QVector& a, const QVector& b) {
  QVector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline QVector operator-(const QVector& a, const QVector& b) {
  QVector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline QVector operator-(const QVector& a) {
  QVector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

inline QVector operator*(const Rational& s, const QVector& a) {
  QVector r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

inline Rational dot(const QVector& a, const QVector& b) {
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline bool isZero(const QVector& v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

inline Integer denominatorLcm(const QVector& v) {
  Integer d = 1;
  for (const auto& x : v) d = lcm(d, x.get_den());
  return d;
}

/// Positive multiple of v with coprime integer entries. Zero stays zero.
inline QVector primitive(const QVector& v) {
  if (isZero(v)) return v;
  Integer d = denominatorLcm(v);
  Integer g = 0;
  for (const auto& x : v) {
    Integer n = x.get_num() * (d / x.get_den());
    g = gcd(g, n);
  }
  QVector r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = Rational(v[i] * d / g);
  return r;
}

inline QVector centroid(const std::vector<QVector>& pts) {
  QVector c = zeros(pts.front().size());
  for (const auto& p : pts) c = c + p;
  return frac(1, Integer(static_cast<unsigned long>(pts.size()))) * c;
}

}  // namespace tropic
