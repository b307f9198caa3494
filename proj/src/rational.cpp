#include "kgcohort/rational.hpp"

#include <gmpxx.h>

#include <charconv>
#include <limits>
#include <ostream>

#include "kgcohort/error.hpp"

namespace kgcohort {

struct Rational::Big {
  mpq_class value;
};

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

struct RationalOps {
  static constexpr i128 kMin64 = std::numeric_limits<std::int64_t>::min();
  static constexpr i128 kMax64 = std::numeric_limits<std::int64_t>::max();

  static u128 abs128(i128 v) { return v < 0 ? u128(-(v + 1)) + 1 : u128(v); }

  static std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
      std::uint64_t t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static u128 gcd128(u128 a, u128 b) {
    // Reduce to 64-bit Euclid as soon as both operands fit.
    while (b != 0) {
      if ((a >> 64) == 0 && (b >> 64) == 0)
        return gcd64(std::uint64_t(a), std::uint64_t(b));
      u128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static bool fits(i128 v) { return v >= kMin64 && v <= kMax64; }

  static std::string to_decimal(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    u128 u = abs128(v);
    std::string out;
    while (u != 0) {
      out.push_back(char('0' + int(u % 10)));
      u /= 10;
    }
    if (neg) out.push_back('-');
    return {out.rbegin(), out.rend()};
  }

  static mpz_class to_mpz(i128 v) {
    if (fits(v)) return mpz_class(static_cast<long>(v));
    return mpz_class(to_decimal(v), 10);
  }

  static Rational small(std::int64_t num, std::int64_t den) {
    Rational r;
    r.num_ = num;
    r.den_ = den;
    return r;
  }

  static Rational from_mpq(mpq_class q) {
    q.canonicalize();
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p())
      return small(q.get_num().get_si(), q.get_den().get_si());
    return Rational(std::make_shared<const Rational::Big>(
        Rational::Big{std::move(q)}));
  }

  // `reduced` asserts gcd(num, den) == 1 already.
  static Rational make(i128 num, i128 den, bool reduced) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) return small(0, 1);
    if (!reduced) {
      u128 g = gcd128(abs128(num), u128(den));
      if (g > 1) {
        num /= i128(g);
        den /= i128(g);
      }
    }
    if (fits(num) && fits(den))
      return small(std::int64_t(num), std::int64_t(den));
    mpq_class q(to_mpz(num), to_mpz(den));
    return Rational(
        std::make_shared<const Rational::Big>(Rational::Big{std::move(q)}));
  }

  static mpq_class big_of(const Rational& r) {
    if (r.big_) return r.big_->value;
    return mpq_class(mpz_class(static_cast<long>(r.num_)),
                     mpz_class(static_cast<long>(r.den_)));
  }

  static Rational add(const Rational& x, const Rational& y) {
    if (x.big_ || y.big_) return from_mpq(big_of(x) + big_of(y));
    if (x.num_ == 0) return y;
    if (y.num_ == 0) return x;
    if (x.den_ == 1 && y.den_ == 1) return make(i128(x.num_) + y.num_, 1, true);
    // Knuth 4.5.1: keep intermediates small by splitting out gcd(b, d).
    std::uint64_t g = gcd64(std::uint64_t(x.den_), std::uint64_t(y.den_));
    if (g == 1) {
      i128 num = i128(x.num_) * y.den_ + i128(y.num_) * x.den_;
      i128 den = i128(x.den_) * y.den_;
      return make(num, den, true);
    }
    i128 b1 = x.den_ / std::int64_t(g);
    i128 d1 = y.den_ / std::int64_t(g);
    i128 t = i128(x.num_) * d1 + i128(y.num_) * b1;
    if (t == 0) return small(0, 1);
    std::uint64_t g2 = std::uint64_t(gcd128(abs128(t), g));
    i128 den = b1 * (y.den_ / std::int64_t(g2));
    return make(t / i128(g2), den, true);
  }

  static Rational mul(const Rational& x, const Rational& y) {
    if (x.big_ || y.big_) return from_mpq(big_of(x) * big_of(y));
    if (x.num_ == 0 || y.num_ == 0) return small(0, 1);
    std::uint64_t g1 = gcd64(std::uint64_t(abs128(x.num_)), std::uint64_t(y.den_));
    std::uint64_t g2 = gcd64(std::uint64_t(abs128(y.num_)), std::uint64_t(x.den_));
    i128 num = i128(x.num_ / std::int64_t(g1)) * (y.num_ / std::int64_t(g2));
    i128 den = i128(x.den_ / std::int64_t(g2)) * (y.den_ / std::int64_t(g1));
    return make(num, den, true);
  }

  static std::strong_ordering cmp(const Rational& x, const Rational& y) {
    if (x.big_ || y.big_) {
      int c = ::cmp(big_of(x), big_of(y));
      return c < 0 ? std::strong_ordering::less
                   : (c > 0 ? std::strong_ordering::greater
                            : std::strong_ordering::equal);
    }
    if (x.den_ == y.den_) return x.num_ <=> y.num_;
    i128 l = i128(x.num_) * y.den_;
    i128 r = i128(y.num_) * x.den_;
    return l < r ? std::strong_ordering::less
                 : (l > r ? std::strong_ordering::greater
                          : std::strong_ordering::equal);
  }
};

}  // namespace detail

using detail::RationalOps;

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0)
    throw Error(Errc::DomainError, "rational with zero denominator");
  *this = RationalOps::make(num, den, false);
}

Rational Rational::from_big(Big value) {
  return RationalOps::from_mpq(std::move(value.value));
}

Rational::Big Rational::to_big() const { return Big{RationalOps::big_of(*this)}; }

namespace {

bool parse_int64(std::string_view s, std::int64_t& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool valid_integer(std::string_view s) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

std::string strip_plus(std::string_view s) {
  return std::string(!s.empty() && s[0] == '+' ? s.substr(1) : s);
}

}  // namespace

Rational Rational::from_strings(std::string_view num, std::string_view den) {
  if (!valid_integer(num) || !valid_integer(den))
    throw Error(Errc::DomainError,
                "malformed rational '" + std::string(num) + "/" +
                    std::string(den) + "'");
  std::int64_t n = 0, d = 0;
  if (parse_int64(num, n) && parse_int64(den, d)) return Rational(n, d);
  mpz_class zn(strip_plus(num), 10), zd(strip_plus(den), 10);
  if (zd == 0) throw Error(Errc::DomainError, "rational with zero denominator");
  return RationalOps::from_mpq(mpq_class(zn, zd));
}

Rational Rational::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return from_strings(text, "1");
  return from_strings(text.substr(0, slash), text.substr(slash + 1));
}

bool Rational::is_zero() const noexcept { return !big_ && num_ == 0; }

int Rational::sign() const noexcept {
  if (big_) return sgn(big_->value);
  return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0);
}

std::string Rational::num_str() const {
  return big_ ? big_->value.get_num().get_str() : std::to_string(num_);
}

std::string Rational::den_str() const {
  return big_ ? big_->value.get_den().get_str() : std::to_string(den_);
}

std::string Rational::str() const {
  if (big_) return big_->value.get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

double Rational::to_double() const {
  if (big_) return big_->value.get_d();
  return double(num_) / double(den_);
}

Rational Rational::reciprocal() const {
  if (is_zero()) throw Error(Errc::DomainError, "reciprocal of zero");
  if (big_) return RationalOps::from_mpq(1 / big_->value);
  return RationalOps::make(den_, num_, true);
}

Rational Rational::operator-() const {
  if (big_) return RationalOps::from_mpq(-big_->value);
  return RationalOps::make(-detail::i128(num_), den_, true);
}

Rational operator+(const Rational& a, const Rational& b) {
  return RationalOps::add(a, b);
}

Rational operator-(const Rational& a, const Rational& b) {
  return RationalOps::add(a, -b);
}

Rational operator*(const Rational& a, const Rational& b) {
  return RationalOps::mul(a, b);
}

Rational operator/(const Rational& a, const Rational& b) {
  return RationalOps::mul(a, b.reciprocal());
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
  if (a.big_ && b.big_) return a.big_->value == b.big_->value;
  // Canonical form: a big value never equals an inline one.
  return false;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  return RationalOps::cmp(a, b);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.str();
}

}  // namespace kgcohort
