#pragma once

#include <gmpxx.h>

#include <Eigen/Core>

#include <compare>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace plp {

/// Exact rational scalar backed by GMP.
///
/// Every value is kept in canonical form: the denominator is positive, the
/// fraction is reduced, and zero is 0/1. Implicit construction from integers
/// lets the type serve as an Eigen scalar (`Scalar(0)`, `Scalar(1)`).
class Rat {
 public:
  Rat() = default;
  Rat(int value) : v_(value) {}
  Rat(long value) : v_(value) {}
  Rat(long long value) : v_(static_cast<long>(value)) {}
  Rat(long num, long den);
  explicit Rat(const mpq_class& q);
  Rat(const mpz_class& num, const mpz_class& den);

  /// Exact value of a finite binary64.
  static Rat from_double(double value);

  /// Parses `p`, `-p` or `p/q` (q > 0). Throws std::invalid_argument.
  static Rat parse(std::string_view text);

  [[nodiscard]] const mpq_class& value() const noexcept { return v_; }
  [[nodiscard]] mpz_class num() const { return v_.get_num(); }
  [[nodiscard]] mpz_class den() const { return v_.get_den(); }
  [[nodiscard]] int sign() const noexcept { return sgn(v_); }
  [[nodiscard]] bool is_zero() const noexcept { return sign() == 0; }
  [[nodiscard]] bool is_integer() const { return v_.get_den() == 1; }
  [[nodiscard]] std::string str() const { return v_.get_str(); }

  Rat& operator+=(const Rat& o) {
    mpq_add(v_.get_mpq_t(), v_.get_mpq_t(), o.v_.get_mpq_t());
    return *this;
  }
  Rat& operator-=(const Rat& o) {
    mpq_sub(v_.get_mpq_t(), v_.get_mpq_t(), o.v_.get_mpq_t());
    return *this;
  }
  Rat& operator*=(const Rat& o) {
    mpq_mul(v_.get_mpq_t(), v_.get_mpq_t(), o.v_.get_mpq_t());
    return *this;
  }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(const Rat& a, const Rat& b) {
    Rat r;
    mpq_add(r.v_.get_mpq_t(), a.v_.get_mpq_t(), b.v_.get_mpq_t());
    return r;
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    Rat r;
    mpq_sub(r.v_.get_mpq_t(), a.v_.get_mpq_t(), b.v_.get_mpq_t());
    return r;
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    Rat r;
    mpq_mul(r.v_.get_mpq_t(), a.v_.get_mpq_t(), b.v_.get_mpq_t());
    return r;
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    Rat r(a);
    r /= b;
    return r;
  }
  friend Rat operator-(const Rat& a) {
    Rat r;
    mpq_neg(r.v_.get_mpq_t(), a.v_.get_mpq_t());
    return r;
  }
  friend Rat operator+(const Rat& a) { return a; }

  friend bool operator==(const Rat& a, const Rat& b) noexcept {
    return mpq_equal(a.v_.get_mpq_t(), b.v_.get_mpq_t()) != 0;
  }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) noexcept {
    const int c = mpq_cmp(a.v_.get_mpq_t(), b.v_.get_mpq_t());
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& x);

 private:
  mpq_class v_;
};

inline Rat abs(const Rat& x) { return x.sign() < 0 ? -x : x; }
inline Rat abs2(const Rat& x) { return x * x; }
inline const Rat& conj(const Rat& x) { return x; }
inline const Rat& real(const Rat& x) { return x; }
inline Rat imag(const Rat&) { return Rat(0); }

/// Nearest binary64, ties to even; magnitudes beyond the binary64 range map
/// to ±infinity.
double to_float(const Rat& x);

std::size_t hash_value(const Rat& x);

}  // namespace plp

template <>
struct std::hash<plp::Rat> {
  std::size_t operator()(const plp::Rat& x) const { return plp::hash_value(x); }
};

namespace Eigen {

template <>
struct NumTraits<plp::Rat> : GenericNumTraits<plp::Rat> {
  using Real = plp::Rat;
  using NonInteger = plp::Rat;
  using Nested = plp::Rat;
  using Literal = plp::Rat;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 8,
    MulCost = 16
  };

  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
  static inline int max_digits10() { return 0; }
};

}  // namespace Eigen
