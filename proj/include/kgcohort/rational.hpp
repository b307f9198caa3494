#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

namespace kgcohort {

namespace detail {
struct RationalOps;
}

/// Exact rational number in lowest terms with a positive denominator.
///
/// Values whose numerator and denominator fit in int64 are held inline and
/// all arithmetic is done in 128-bit intermediates. On overflow the value is
/// promoted to an immutable GMP rational and demoted again as soon as a
/// result fits. The representation is therefore canonical: two equal values
/// always serialize to the same num/den text.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t value) : num_(value) {}  // NOLINT(implicit)
  Rational(std::int64_t num, std::int64_t den);

  /// Parses "n", "n/d" (arbitrary-size decimal integers).
  static Rational parse(std::string_view text);
  static Rational from_strings(std::string_view num, std::string_view den);

  bool is_big() const noexcept { return big_ != nullptr; }
  bool is_zero() const noexcept;
  int sign() const noexcept;

  /// Decimal numerator / denominator, arbitrary size.
  std::string num_str() const;
  std::string den_str() const;
  /// "n/d", or "n" when the denominator is 1.
  std::string str() const;
  double to_double() const;

  /// Inline parts; only meaningful when !is_big().
  std::int64_t small_num() const noexcept { return num_; }
  std::int64_t small_den() const noexcept { return den_; }

  Rational reciprocal() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;

  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b);

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

  struct Big;

 private:
  friend struct detail::RationalOps;

  explicit Rational(std::shared_ptr<const Big> big) : big_(std::move(big)) {}
  static Rational from_big(Big value);
  Big to_big() const;

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const Big> big_;
};

}  // namespace kgcohort
