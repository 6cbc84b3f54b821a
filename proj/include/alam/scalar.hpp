#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace alam {

using Rational = boost::multiprecision::cpp_rational;
using Natural = boost::multiprecision::cpp_int;

// Which scalar sets a term is allowed to mention. Ring admits every rational;
// NonNegSemiring rejects negatives at construction time.
enum class ScalarDomain { Ring, NonNegSemiring };

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScalarDomainError : Error {
  using Error::Error;
};

// Exact rational coefficient. Always normalized (cpp_rational keeps gcd-reduced
// form with positive denominator), so operator== is structural equality.
class Scalar {
 public:
  Scalar() : value_(0) {}
  explicit Scalar(long n) : value_(n) {}
  explicit Scalar(Rational v) : value_(std::move(v)) {}
  Scalar(long num, long den) : value_(Rational(num, den)) {
    if (den == 0) throw Error("scalar denominator is zero");
  }

  static auto checked(Rational v, ScalarDomain domain) -> Scalar {
    if (domain == ScalarDomain::NonNegSemiring && v < 0)
      throw ScalarDomainError("negative scalar rejected by NonNegSemiring domain");
    return Scalar(std::move(v));
  }

  auto value() const -> const Rational& { return value_; }
  auto is_zero() const -> bool { return value_ == 0; }
  auto is_one() const -> bool { return value_ == 1; }
  auto is_negative() const -> bool { return value_ < 0; }

  friend auto operator+(const Scalar& a, const Scalar& b) -> Scalar {
    return Scalar(a.value_ + b.value_);
  }
  friend auto operator-(const Scalar& a, const Scalar& b) -> Scalar {
    return Scalar(a.value_ - b.value_);
  }
  friend auto operator*(const Scalar& a, const Scalar& b) -> Scalar {
    return Scalar(a.value_ * b.value_);
  }
  friend auto operator/(const Scalar& a, const Scalar& b) -> Scalar {
    if (b.is_zero()) throw Error("scalar division by zero");
    return Scalar(a.value_ / b.value_);
  }
  friend auto operator-(const Scalar& a) -> Scalar { return Scalar(-a.value_); }
  friend auto operator==(const Scalar& a, const Scalar& b) -> bool {
    return a.value_ == b.value_;
  }
  friend auto operator!=(const Scalar& a, const Scalar& b) -> bool {
    return a.value_ != b.value_;
  }
  friend auto operator<(const Scalar& a, const Scalar& b) -> bool {
    return a.value_ < b.value_;
  }

  // Concrete syntax: "n" or "n/d", parenthesized when negative so that the
  // printed form re-parses as a scalar literal.
  auto str() const -> std::string {
    std::string s = value_.str();
    if (is_negative()) return "(" + s + ")";
    return s;
  }

 private:
  Rational value_;
};

}  // namespace alam
